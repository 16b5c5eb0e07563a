#include "depthlab/qdepth.hpp"

#include <json.hpp>

#include "depthlab/error.hpp"

namespace depthlab::qdepth {

namespace {

constexpr unsigned kMaxQubits = 20;

bool is_zero(const Amplitude& a) { return a.re == 0 && a.im == 0; }

void put_gamma(Word& w, const mpz_class& n) {
  const std::size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
  for (std::size_t i = 1; i < bits; ++i) w.push_back(0);
  for (std::size_t i = bits; i-- > 0;) w.push_back(mpz_tstbit(n.get_mpz_t(), i));
}

void put_part(Word& w, const mpz_class& a) {
  put_gamma(w, mpz_class(abs(a)) + 1);
  if (a != 0) w.push_back(a < 0 ? 1 : 0);
}

class Reader {
 public:
  explicit Reader(const Word& w) : w_(w) {}
  bool done() const { return pos_ == w_.size(); }
  std::size_t left() const { return w_.size() - pos_; }

  bool gamma(mpz_class& out) {
    std::size_t zeros = 0;
    while (pos_ < w_.size() && w_[pos_] == 0) {
      ++zeros;
      ++pos_;
    }
    if (left() < zeros + 1) return false;
    out = 0;
    for (std::size_t i = 0; i <= zeros; ++i) {
      out <<= 1;
      out += w_[pos_++];
    }
    return true;
  }

  bool part(mpz_class& out) {
    mpz_class g;
    if (!gamma(g)) return false;
    out = g - 1;
    if (out == 0) return true;
    if (done()) return false;
    if (w_[pos_++]) out = -out;
    return true;
  }

 private:
  const Word& w_;
  std::size_t pos_ = 0;
};

// Complex cross product test a * d == c * b.
bool cross_equal(const Amplitude& a, const Amplitude& d, const Amplitude& c, const Amplitude& b) {
  const mpz_class lre = a.re * d.re - a.im * d.im;
  const mpz_class lim = a.re * d.im + a.im * d.re;
  const mpz_class rre = c.re * b.re - c.im * b.im;
  const mpz_class rim = c.re * b.im + c.im * b.re;
  return lre == rre && lim == rim;
}

mpz_class json_integer(const nlohmann::json& v) {
  if (v.is_number_integer()) return mpz_class(std::to_string(v.get<long long>()));
  if (v.is_string()) {
    mpz_class z;
    if (z.set_str(v.get<std::string>(), 10) != 0) throw PreconditionError("bad integer amplitude");
    return z;
  }
  throw PreconditionError("amplitude parts must be integers or decimal strings");
}

}  // namespace

QubitString::QubitString(unsigned n, std::vector<Amplitude> amplitudes)
    : n_(n), amps_(std::move(amplitudes)) {
  if (n < 1 || n > kMaxQubits) throw PreconditionError("qubit count must be in [1, 20]");
  if (amps_.size() != (std::size_t{1} << n)) throw PreconditionError("need exactly 2^n amplitudes");
  bool any = false;
  for (const auto& a : amps_) any = any || !is_zero(a);
  if (!any) throw PreconditionError("the zero vector is not a state");
}

QubitString QubitString::basis(unsigned n, std::uint64_t index) {
  if (n < 1 || n > kMaxQubits || index >= (std::uint64_t{1} << n)) {
    throw PreconditionError("basis index out of range");
  }
  std::vector<Amplitude> amps(std::size_t{1} << n, Amplitude{0, 0});
  amps[index].re = 1;
  return QubitString(n, std::move(amps));
}

QubitString QubitString::scaled(const mpz_class& factor) const {
  if (factor <= 0) throw PreconditionError("scale factor must be positive");
  std::vector<Amplitude> amps = amps_;
  for (auto& a : amps) {
    a.re *= factor;
    a.im *= factor;
  }
  return QubitString(n_, std::move(amps));
}

Word encode(const QubitString& psi) {
  Word w;
  put_gamma(w, psi.qubits());
  for (const auto& a : psi.amplitudes()) {
    put_part(w, a.re);
    put_part(w, a.im);
  }
  return w;
}

std::optional<QubitString> parse_qoutput(const Word& bits) {
  if (bits.alphabet().size() != 2) return std::nullopt;
  Reader in(bits);
  mpz_class n;
  if (!in.gamma(n) || n > kMaxQubits) return std::nullopt;
  const std::size_t count = std::size_t{1} << n.get_ui();
  // Each part takes at least one bit.
  if (in.left() < 2 * count) return std::nullopt;
  std::vector<Amplitude> amps(count);
  bool any = false;
  for (auto& a : amps) {
    if (!in.part(a.re) || !in.part(a.im)) return std::nullopt;
    any = any || !is_zero(a);
  }
  if (!in.done() || !any) return std::nullopt;
  return QubitString(static_cast<unsigned>(n.get_ui()), std::move(amps));
}

bool states_equivalent(const QubitString& a, const QubitString& b) {
  if (a.qubits() != b.qubits()) return false;
  const auto& x = a.amplitudes();
  const auto& y = b.amplitudes();
  std::size_t pivot = 0;
  while (is_zero(x[pivot])) ++pivot;
  const Amplitude& p = x[pivot];
  const Amplitude& q = y[pivot];
  if (is_zero(q)) return false;
  // lambda = q / p is a positive real iff q * conj(p) is.
  const mpz_class re = q.re * p.re + q.im * p.im;
  const mpz_class im = q.im * p.re - q.re * p.im;
  if (im != 0 || re <= 0) return false;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (!cross_equal(y[j], p, x[j], q)) return false;
  }
  return true;
}

std::optional<aic::Producer> qcanonical_program(const QubitString& psi,
                                                const aic::ComplexityTable& table) {
  std::optional<aic::Producer> best;
  bitstrings::ShortlexLess less;
  for (const auto& [out, e] : table.entries()) {
    if (!e.prefix) continue;
    if (best && !less(e.prefix->program, best->program)) continue;
    const auto state = parse_qoutput(out);
    if (state && states_equivalent(*state, psi)) best = e.prefix;
  }
  return best;
}

aic::DepthValue qdepth(const QubitString& psi, std::uint64_t s, const aic::ComplexityTable& table) {
  std::optional<std::uint64_t> best;
  std::optional<Word> witness;
  std::uint64_t excluded = 0;
  bitstrings::ShortlexLess less;
  for (const auto& [out, e] : table.entries()) {
    if (!e.prefix) continue;
    const auto state = parse_qoutput(out);
    if (!state || !states_equivalent(*state, psi)) continue;
    const aic::DepthValue d = aic::depth(out, s, table);
    excluded += d.excluded();
    if (!d.is_defined()) continue;
    if (!best || d.steps() < *best || (d.steps() == *best && less(*d.witness(), *witness))) {
      best = d.steps();
      witness = d.witness();
    }
  }
  if (!best) return aic::DepthValue::undefined(excluded);
  return aic::DepthValue::of(*best, std::move(*witness), excluded);
}

aic::DepthClass classify_qdepth(const QubitString& psi, std::uint64_t s, std::uint64_t t,
                                const aic::ComplexityTable& table) {
  return qdepth(psi, s, table).steps() > t ? aic::DepthClass::Deep : aic::DepthClass::Shallow;
}

QubitString state_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("state fixture is not JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("n") || !j.contains("amplitudes")) {
    throw PreconditionError("state fixture needs fields n and amplitudes");
  }
  std::vector<Amplitude> amps;
  for (const auto& pair : j.at("amplitudes")) {
    if (!pair.is_array() || pair.size() != 2) {
      throw PreconditionError("each amplitude must be a [re, im] pair");
    }
    amps.push_back({json_integer(pair[0]), json_integer(pair[1])});
  }
  return QubitString(j.at("n").get<unsigned>(), std::move(amps));
}

std::string state_to_json(const QubitString& psi) {
  nlohmann::json amps = nlohmann::json::array();
  for (const auto& a : psi.amplitudes()) {
    if (a.re.fits_slong_p() && a.im.fits_slong_p()) {
      amps.push_back({a.re.get_si(), a.im.get_si()});
    } else {
      amps.push_back({a.re.get_str(), a.im.get_str()});
    }
  }
  return nlohmann::json{{"n", psi.qubits()}, {"amplitudes", amps}}.dump();
}

}  // namespace depthlab::qdepth
