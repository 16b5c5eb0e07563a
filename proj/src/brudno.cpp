#include "depthlab/brudno.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "depthlab/error.hpp"
#include "depthlab/machine.hpp"
#include "depthlab/report.hpp"
#include "parallel.hpp"

namespace depthlab::brudno {

namespace {

double clamp_rate(double v, double eps) { return std::clamp(v, 0.0, 1.0 + eps); }

dynsys::Point orbit_start(const dynsys::DynamicalSystem& sys, std::uint64_t length,
                          std::uint64_t seed, std::uint64_t index) {
  rng::Engine eng = rng::engine(seed, rng::kOrbitStream, index);
  return sys.sample(eng, sys.required_precision(length));
}

report::Json optional_json(const std::optional<std::uint64_t>& v) {
  return v ? report::Json(*v) : report::Json(nullptr);
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::BoundedK: return "BOUNDED_K";
    case Method::LZ78: return "LZ78";
    case Method::BlockEntropy: return "BLOCK_ENTROPY";
  }
  return "?";
}

Method method_from_string(const std::string& name) {
  if (name == "BOUNDED_K") return Method::BoundedK;
  if (name == "LZ78") return Method::LZ78;
  if (name == "BLOCK_ENTROPY") return Method::BlockEntropy;
  throw PreconditionError("unknown estimator '" + name + "'");
}

std::string to_string(Chaoticity c) {
  switch (c) {
    case Chaoticity::None: return "NONE";
    case Chaoticity::Weak: return "WEAK";
    case Chaoticity::StrongProxy: return "STRONG_PROXY";
  }
  return "?";
}

double rate_epsilon(std::uint64_t n) {
  const double dn = static_cast<double>(n);
  return 2 * std::log2(std::log2(std::max(dn, 1.0)) + 2) / std::log2(dn + 1);
}

std::uint64_t lz78_phrase_count(const Word& w) {
  const std::uint64_t n = w.alphabet().size();
  std::unordered_map<std::uint64_t, std::uint64_t> trie;  // node * n + symbol -> child
  trie.reserve(w.size() / 4 + 16);
  std::uint64_t nodes = 1;
  std::uint64_t phrases = 0;
  std::uint64_t node = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const std::uint64_t key = node * n + w[i];
    auto it = trie.find(key);
    if (it != trie.end()) {
      node = it->second;
      continue;
    }
    trie.emplace(key, nodes++);
    ++phrases;
    node = 0;
  }
  if (node != 0) ++phrases;  // unfinished last phrase
  return phrases;
}

RateEstimate lz78_rate(const Word& w) {
  if (w.size() < 2) throw PreconditionError("lz78_rate needs a word of length >= 2");
  RateEstimate r;
  r.method = Method::LZ78;
  r.length = w.size();
  r.phrases = lz78_phrase_count(w);
  r.epsilon = rate_epsilon(w.size());
  const double c = static_cast<double>(r.phrases);
  const double bits = std::log2(static_cast<double>(w.alphabet().size()));
  const double raw = c * (std::log2(c) + bits) / (static_cast<double>(w.size()) * bits);
  r.value = clamp_rate(raw, r.epsilon);
  return r;
}

RateEstimate boundedK_rate(const Word& w, const aic::ComplexityTable& table) {
  if (w.alphabet().size() != 2) throw PreconditionError("boundedK_rate needs a binary word");
  RateEstimate r;
  r.method = Method::BoundedK;
  r.length = w.size();
  for (std::size_t n = 1; n <= w.size(); ++n) {
    const auto k = table.K_bound(bitstrings::prefix(w, n));
    if (!k) {
      r.truncated = true;
      break;
    }
    r.curve.push_back(static_cast<double>(*k) / static_cast<double>(n));
  }
  if (r.curve.empty()) throw ComplexityUnknown("no prefix of the word is in the table");
  r.epsilon = rate_epsilon(r.curve.size());
  r.value = clamp_rate(r.curve.back(), r.epsilon);
  return r;
}

RateEstimate block_rate(const Word& w, std::uint64_t k) {
  if (w.alphabet().size() != 2) throw PreconditionError("block_rate needs a binary word");
  const dynsys::BlockEntropyEstimate b = dynsys::block_entropy_of_words({w}, 2, k);
  RateEstimate r;
  r.method = Method::BlockEntropy;
  r.length = w.size();
  r.curve = b.conditional;
  r.value = b.rate;
  return r;
}

Word binary_coding(const Word& coding, std::uint64_t* dropped) {
  const unsigned n = coding.alphabet().size();
  if (dropped) *dropped = 0;
  if (n == 2) return coding;
  Word out = bitstrings::change_basis(coding, 2);
  if (dropped) {
    const std::size_t nominal = bitstrings::nominal_digits(coding.size(), n, 2);
    *dropped = nominal > out.size() ? nominal - out.size() : 0;
  }
  return out;
}

RateEstimate estimate(const Word& binary, const EstimatorOptions& options) {
  switch (options.method) {
    case Method::LZ78:
      return lz78_rate(binary);
    case Method::BlockEntropy:
      return block_rate(binary, options.k);
    case Method::BoundedK:
      if (!options.table) throw PreconditionError("BOUNDED_K estimator needs a complexity table");
      return boundedK_rate(binary, *options.table);
  }
  throw PreconditionError("unknown estimator");
}

RateEstimate brudno_entropy(const dynsys::DynamicalSystem& sys, const dynsys::Partition& a,
                            const dynsys::Point& x0, std::uint64_t length,
                            const EstimatorOptions& options) {
  const Word coding = dynsys::translate_k(sys, a, x0, length).symbols;
  std::uint64_t dropped = 0;
  const Word binary = binary_coding(coding, &dropped);
  RateEstimate r = estimate(binary, options);
  r.dropped = dropped;
  return r;
}

SupEstimate brudno_sup(const dynsys::DynamicalSystem& sys,
                       const std::vector<dynsys::Partition>& family, const dynsys::Point& x0,
                       std::uint64_t length, const EstimatorOptions& options) {
  if (family.empty()) throw PreconditionError("partition family is empty");
  SupEstimate sup;
  for (std::size_t i = 0; i < family.size(); ++i) {
    sup.members.push_back(brudno_entropy(sys, family[i], x0, length, options));
    if (i == 0 || sup.members[i].value > sup.best.value) {
      sup.best = sup.members[i];
      sup.maximizer = i;
    }
  }
  return sup;
}

ChaoticityReport classify_algorithmic_chaoticity(const dynsys::DynamicalSystem& sys,
                                                 const std::vector<dynsys::Partition>& family,
                                                 std::uint64_t n_orbits, std::uint64_t length,
                                                 std::uint64_t seed,
                                                 const ChaoticityThresholds& thresholds,
                                                 const EstimatorOptions& options,
                                                 unsigned workers) {
  if (n_orbits < 30) throw PreconditionError("chaoticity classification needs >= 30 orbits");
  ChaoticityReport rep;
  rep.thresholds = thresholds;
  rep.orbits.resize(n_orbits);
  detail::parallel_for(n_orbits, detail::resolve_workers(workers), [&](unsigned, std::size_t i) {
    const dynsys::Point x0 = orbit_start(sys, length, seed, i);
    const SupEstimate sup = brudno_sup(sys, family, x0, length, options);
    OrbitChaoticity& o = rep.orbits[i];
    o.index = i;
    o.rate = sup.best.value;
    o.maximizer = sup.maximizer;
    const Word bits =
        binary_coding(dynsys::translate_k(sys, family[sup.maximizer], x0, length).symbols);
    o.battery = randomness_battery(bits, thresholds.alpha);
    o.battery_passed = std::all_of(o.battery.begin(), o.battery.end(),
                                   [](const TestResult& t) { return t.passed; });
  });
  std::uint64_t weak = 0, strong = 0;
  for (const auto& o : rep.orbits) {
    weak += o.rate > thresholds.weak;
    strong += o.battery_passed;
  }
  rep.weak_fraction = static_cast<double>(weak) / n_orbits;
  rep.battery_fraction = static_cast<double>(strong) / n_orbits;
  if (rep.weak_fraction >= thresholds.fraction) {
    rep.verdict = rep.battery_fraction >= thresholds.fraction ? Chaoticity::StrongProxy
                                                              : Chaoticity::Weak;
  }
  return rep;
}

DepthProfile depth_profile_of_words(const std::vector<Word>& words, std::uint64_t s,
                                    const aic::ComplexityTable& table, std::uint64_t c_slack) {
  DepthProfile p;
  p.machine = table.machine_version();
  p.bounds = table.bounds();
  p.s = s;
  p.c_slack = c_slack;
  std::uint64_t shallow = 0, incompressible = 0, inc_shallow = 0;
  for (std::size_t i = 0; i < words.size(); ++i) {
    const Word& x = words[i];
    OrbitDepth o;
    o.index = i;
    o.coding = x;
    o.I_bound = table.I_bound(x);
    o.K_bound = table.K_bound(x);
    const machine::HaltingTime tp =
        machine::halting_time(machine::print_program(x), table.bounds().T);
    o.T_print = tp.steps();
    if (o.I_bound) {
      o.incompressible = !aic::is_n_compressible(x, s, table);
      const aic::DepthValue d = aic::depth(x, s, table);
      if (d.is_defined()) o.depth = d.steps();
    } else {
      o.incompressible = true;
    }
    o.shallow = o.depth && *o.depth <= o.T_print + c_slack;
    shallow += o.shallow;
    incompressible += o.incompressible;
    inc_shallow += o.incompressible && o.shallow;
    p.per_orbit.push_back(std::move(o));
  }
  const double n = std::max<double>(1, static_cast<double>(words.size()));
  p.shallow_fraction = shallow / n;
  p.incompressible_fraction = incompressible / n;
  p.incompressible_shallow_fraction =
      incompressible ? static_cast<double>(inc_shallow) / static_cast<double>(incompressible) : 1.0;
  return p;
}

DepthProfile trajectory_depth_profile(const dynsys::DynamicalSystem& sys,
                                      const dynsys::Partition& a, std::uint64_t n_orbits,
                                      std::uint64_t prefix_len, std::uint64_t s,
                                      const aic::ComplexityTable& table, std::uint64_t seed,
                                      std::uint64_t c_slack) {
  if (n_orbits < 30) throw PreconditionError("depth profile needs >= 30 orbits");
  if (prefix_len + machine::print_overhead_bits(prefix_len) > table.bounds().L) {
    throw PreconditionError("prefix length " + std::to_string(prefix_len) +
                            " exceeds the table's coverage");
  }
  // Codings are taken long enough that the binary form has prefix_len digits.
  std::uint64_t length = prefix_len;
  if (a.atoms() > 2) length = prefix_len + 2;
  std::vector<Word> words;
  for (std::uint64_t i = 0; i < n_orbits; ++i) {
    const dynsys::Point x0 = orbit_start(sys, length, seed, i);
    Word bits = binary_coding(dynsys::translate_k(sys, a, x0, length).symbols);
    if (bits.size() < prefix_len) throw PreconditionError("coding too short after change of basis");
    words.push_back(bitstrings::prefix(bits, prefix_len));
  }
  DepthProfile p = depth_profile_of_words(words, s, table, c_slack);
  p.system = sys.name();
  p.partition = a.str();
  p.seed = seed;
  return p;
}

std::string profile_to_json(const DepthProfile& p) {
  report::Json rows = report::Json::array();
  for (const auto& o : p.per_orbit) {
    rows.push_back({{"index", o.index},
                    {"coding", o.coding.str()},
                    {"I_bound", optional_json(o.I_bound)},
                    {"K_bound", optional_json(o.K_bound)},
                    {"depth", optional_json(o.depth)},
                    {"T_print", o.T_print},
                    {"incompressible", o.incompressible},
                    {"shallow", o.shallow}});
  }
  report::Json doc = {
      {"machine", p.machine},
      {"bounds", {{"L", p.bounds.L}, {"T", p.bounds.T}}},
      {"system", p.system},
      {"partition", p.partition},
      {"seed", p.seed},
      {"s", p.s},
      {"per_orbit", rows},
      {"summary",
       {{"n_orbits", p.per_orbit.size()},
        {"c_slack", p.c_slack},
        {"shallow_fraction", report::number(p.shallow_fraction)},
        {"incompressible_fraction", report::number(p.incompressible_fraction)},
        {"incompressible_shallow_fraction", report::number(p.incompressible_shallow_fraction)}}},
  };
  return doc.dump(2) + "\n";
}

std::string profile_to_csv(const DepthProfile& p) {
  std::ostringstream os;
  os << "index,coding,I_bound,K_bound,depth,T_print,incompressible,shallow\n";
  auto opt = [](const std::optional<std::uint64_t>& v) {
    return v ? std::to_string(*v) : std::string();
  };
  for (const auto& o : p.per_orbit) {
    os << o.index << ',' << o.coding.str() << ',' << opt(o.I_bound) << ',' << opt(o.K_bound)
       << ',' << opt(o.depth) << ',' << o.T_print << ',' << o.incompressible << ','
       << o.shallow << '\n';
  }
  return os.str();
}

}  // namespace depthlab::brudno
