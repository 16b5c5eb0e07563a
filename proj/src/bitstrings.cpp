#include "depthlab/bitstrings.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

#include "depthlab/error.hpp"

namespace depthlab::bitstrings {

namespace {

mpz_class pow_ui(unsigned base, std::size_t exp) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
  return r;
}

}  // namespace

Alphabet::Alphabet(unsigned n) : n_(n) {
  if (n < 2 || n > 256) throw PreconditionError("alphabet size must be in [2, 256]");
}

Word::Word(Alphabet alphabet, std::string raw_digits)
    : alphabet_(alphabet), digits_(std::move(raw_digits)) {
  for (unsigned char d : digits_) {
    if (d >= alphabet_.size()) throw PreconditionError("digit outside alphabet");
  }
}

Word Word::binary(std::string_view text) {
  Word w(Alphabet::binary());
  w.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') throw PreconditionError("binary word must contain only 0/1");
    w.digits_.push_back(static_cast<char>(c - '0'));
  }
  return w;
}

Word Word::from_digits(Alphabet alphabet, const std::vector<unsigned>& digits) {
  Word w(alphabet);
  w.reserve(digits.size());
  for (unsigned d : digits) w.push_back(d);
  return w;
}

void Word::push_back(unsigned digit) {
  if (digit >= alphabet_.size()) throw PreconditionError("digit outside alphabet");
  digits_.push_back(static_cast<char>(digit));
}

void Word::append(const Word& other) {
  if (!(other.alphabet_ == alphabet_)) throw PreconditionError("alphabet mismatch in append");
  digits_ += other.digits_;
}

std::string Word::str() const {
  std::string out;
  if (alphabet_.size() <= 10) {
    out.reserve(digits_.size());
    for (unsigned char d : digits_) out.push_back(static_cast<char>('0' + d));
    return out;
  }
  for (std::size_t i = 0; i < digits_.size(); ++i) {
    if (i) out.push_back('.');
    out += std::to_string(static_cast<unsigned char>(digits_[i]));
  }
  return out;
}

Word lex_string(std::uint64_t k) {
  // Word k is the binary form of k+1 with its leading 1 removed.
  unsigned __int128 v = static_cast<unsigned __int128>(k) + 1;
  int top = 127;
  while (!((v >> top) & 1)) --top;
  Word w;
  w.reserve(static_cast<std::size_t>(top));
  for (int i = top - 1; i >= 0; --i) w.push_back(static_cast<unsigned>((v >> i) & 1));
  return w;
}

std::uint64_t lex_rank(const Word& w) {
  if (w.alphabet().size() != 2) throw PreconditionError("lex_rank needs a binary word");
  if (w.size() >= 64) throw PreconditionError("lex_rank limited to words shorter than 64");
  std::uint64_t v = 1;
  for (std::size_t i = 0; i < w.size(); ++i) v = (v << 1) | w[i];
  return v - 1;
}

Word prefix(const Word& w, std::size_t n) {
  if (n > w.size()) {
    throw PreconditionError("prefix length " + std::to_string(n) + " exceeds word length " +
                            std::to_string(w.size()));
  }
  return Word(w.alphabet(), w.raw().substr(0, n));
}

Word prefix(DigitSource& source, std::size_t n) {
  Word w(source.alphabet());
  w.reserve(n);
  for (std::size_t i = 0; i < n; ++i) w.push_back(source.next());
  return w;
}

mpq_class RationalInterval::midpoint() const {
  mpq_class m = (lo + hi) / 2;
  m.canonicalize();
  return m;
}

mpq_class RationalInterval::radius() const {
  mpq_class r = (hi - lo) / 2;
  r.canonicalize();
  return r;
}

RationalInterval nadic_value(const Word& w) {
  const unsigned n = w.alphabet().size();
  mpz_class a = 0;
  for (std::size_t i = 0; i < w.size(); ++i) a = a * n + w[i];
  const mpz_class denom = pow_ui(n, w.size());
  RationalInterval iv{mpq_class(a, denom), mpq_class(a + 1, denom)};
  iv.lo.canonicalize();
  iv.hi.canonicalize();
  return iv;
}

Word nadic_repr(const mpq_class& q, unsigned n, std::size_t m) {
  if (q < 0 || q > 1) throw PreconditionError("nadic_repr needs q in [0, 1]");
  Word w{Alphabet(n)};
  w.reserve(m);
  mpz_class p = q.get_num();
  const mpz_class d = q.get_den();
  for (std::size_t i = 0; i < m; ++i) {
    if (p == 0) {
      w.push_back(0);
      continue;
    }
    // digit = ceil(n*x) - 1 keeps the remainder in (0, 1], which selects the
    // expansion ending in repeated (n-1).
    mpz_class np = p * n;
    mpz_class digit;
    mpz_class tmp = np - 1;
    mpz_fdiv_q(digit.get_mpz_t(), tmp.get_mpz_t(), d.get_mpz_t());
    p = np - digit * d;
    w.push_back(static_cast<unsigned>(digit.get_ui()));
  }
  return w;
}

std::size_t nominal_digits(std::size_t m, unsigned n1, unsigned n2) {
  if (m == 0) return 0;
  const mpz_class target = pow_ui(n1, m);
  auto j = static_cast<std::size_t>(
      std::floor(static_cast<double>(m) * std::log(n1) / std::log(n2)));
  while (j > 0 && pow_ui(n2, j) > target) --j;
  while (pow_ui(n2, j + 1) <= target) ++j;
  return j;
}

Word change_basis(const Word& w, unsigned n2) {
  const unsigned n1 = w.alphabet().size();
  Alphabet out_alphabet(n2);
  Word out(out_alphabet);

  // n1 = n2^e: cylinders coincide digit group by digit group.
  unsigned e = 0;
  for (unsigned long long p = 1; p < n1; p *= n2) {
    ++e;
    if (p * n2 == n1) {
      out.reserve(w.size() * e);
      for (std::size_t i = 0; i < w.size(); ++i) {
        unsigned d = w[i];
        std::vector<unsigned> group(e);
        for (unsigned k = 0; k < e; ++k) {
          group[e - 1 - k] = d % n2;
          d /= n2;
        }
        for (unsigned g : group) out.push_back(g);
      }
      return out;
    }
  }
  if (n1 == n2) return w;

  // Cylinder of w is (a/D, (a+1)/D]. Digit j+1 is determined when the base-n2
  // index floor(lo*n2^j) agrees with ceil(hi*n2^j) - 1.
  const mpz_class denom = pow_ui(n1, w.size());
  mpz_class a = 0;
  for (std::size_t i = 0; i < w.size(); ++i) a = a * n1 + w[i];
  mpz_class ra = a;
  mpz_class rb = a;
  mpz_class tmp, da, db;
  const std::size_t limit = nominal_digits(w.size(), n1, n2) + 2;
  for (std::size_t j = 0; j < limit; ++j) {
    tmp = ra * n2;
    mpz_fdiv_qr(da.get_mpz_t(), ra.get_mpz_t(), tmp.get_mpz_t(), denom.get_mpz_t());
    tmp = rb * n2 + (n2 - 1);
    mpz_fdiv_qr(db.get_mpz_t(), rb.get_mpz_t(), tmp.get_mpz_t(), denom.get_mpz_t());
    if (da != db) break;
    out.push_back(static_cast<unsigned>(da.get_ui()));
  }
  return out;
}

DyadicRational::DyadicRational(mpz_class numerator, std::uint64_t exponent)
    : numerator_(std::move(numerator)), exponent_(exponent) {
  if (numerator_ < 0) throw PreconditionError("dyadic numerator must be nonnegative");
  if (numerator_ == 0) {
    exponent_ = 0;
    return;
  }
  while (exponent_ > 0 && mpz_even_p(numerator_.get_mpz_t())) {
    numerator_ >>= 1;
    --exponent_;
  }
}

mpq_class DyadicRational::value() const {
  mpz_class den = 1;
  den <<= exponent_;
  mpq_class q(numerator_, den);
  q.canonicalize();
  return q;
}

DyadicRational DyadicRational::from_rational(const mpq_class& q) {
  mpz_class den = q.get_den();
  const std::size_t bits = mpz_sizeinbase(den.get_mpz_t(), 2) - 1;
  if (den != (mpz_class(1) << bits)) throw PreconditionError("not a dyadic rational");
  return DyadicRational(q.get_num(), bits);
}

mpq_class parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t start = 0;
  while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
  s = s.substr(start);
  mpq_class q;
  if (s.empty() || q.set_str(s, 10) != 0 || q.get_den() == 0) {
    throw PreconditionError("not an exact rational: \"" + std::string(text) + "\"");
  }
  q.canonicalize();
  return q;
}

std::string rational_string(const mpq_class& q) { return q.get_str(); }

std::string to_hex(const Word& bits) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve((bits.size() + 3) / 4);
  for (std::size_t i = 0; i < bits.size(); i += 4) {
    unsigned nibble = 0;
    for (std::size_t k = 0; k < 4; ++k) {
      nibble <<= 1;
      if (i + k < bits.size()) nibble |= bits[i + k];
    }
    out.push_back(kHex[nibble]);
  }
  return out;
}

Word from_hex(std::string_view hex, std::size_t bit_length) {
  if (hex.size() != (bit_length + 3) / 4) {
    throw PreconditionError("hex length does not match bit length " + std::to_string(bit_length));
  }
  Word w;
  w.reserve(bit_length);
  for (std::size_t i = 0; i < hex.size(); ++i) {
    const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(hex[i])));
    unsigned v;
    if (c >= '0' && c <= '9') {
      v = static_cast<unsigned>(c - '0');
    } else if (c >= 'a' && c <= 'f') {
      v = static_cast<unsigned>(c - 'a' + 10);
    } else {
      throw PreconditionError("invalid hex digit");
    }
    for (int k = 3; k >= 0; --k) {
      if (w.size() < bit_length) {
        w.push_back((v >> k) & 1);
      } else if ((v >> k) & 1) {
        throw PreconditionError("nonzero padding bits in hex word");
      }
    }
  }
  return w;
}

}  // namespace depthlab::bitstrings
