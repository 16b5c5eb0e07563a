#include <algorithm>
#include <cmath>
#include <limits>

#include "depthlab/brudno.hpp"
#include "depthlab/config.hpp"
#include "depthlab/constants.hpp"
#include "depthlab/dynsys.hpp"
#include "depthlab/error.hpp"
#include "depthlab/machine.hpp"
#include "depthlab/qdepth.hpp"

#ifndef DEPTHLAB_VERSION
#define DEPTHLAB_VERSION "0.0.0"
#endif

namespace depthlab::harness {

namespace {

using bitstrings::Word;
using report::Json;
using report::number;

Json opt(const std::optional<std::uint64_t>& v) { return v ? Json(*v) : Json(nullptr); }

Json opt_word(const std::optional<Word>& w) { return w ? Json(w->str()) : Json(nullptr); }

double q_double(const mpq_class& q) { return q.get_d(); }

dynsys::SystemPtr build_system(const SystemConfig& s) {
  if (s.name == "rotation") return dynsys::rotation(s.p, s.q, s.d, s.r);
  return dynsys::make_system(s.name);
}

std::vector<dynsys::Partition> build_family(const ExperimentConfig& cfg) {
  std::vector<dynsys::Partition> family;
  for (const auto& cuts : cfg.partitions) family.emplace_back(cuts);
  return family;
}

aic::ComplexityTable build_table(const ExperimentConfig& cfg, const RunOptions& options) {
  aic::EnumerateOptions eo;
  eo.workers = options.workers;
  eo.work_ceiling = cfg.work_ceiling.value_or(0);
  return aic::enumerate(cfg.bounds, eo);
}

Json constants_json(const ExperimentConfig& cfg) {
  return {
      {"c_lit", constants::kCLit},
      {"c0", constants::kC0},
      {"c_gap", constants::kCGap},
      {"T_print", constants::kTPrint},
      {"c_slack", cfg.c_slack},
      {"weak_threshold", cfg.weak_threshold.get_str()},
      {"chaotic_fraction", cfg.chaotic_fraction.get_str()},
      {"alpha", cfg.alpha.get_str()},
      {"chaos_threshold", cfg.chaos_threshold.get_str()},
      {"block_frequency_m", constants::kBlockFrequencyM},
  };
}

std::vector<Word> all_words(std::uint64_t min_len, std::uint64_t max_len) {
  std::vector<Word> out;
  for (std::uint64_t r = (std::uint64_t{1} << min_len) - 1; r < (std::uint64_t{2} << max_len) - 1;
       ++r) {
    out.push_back(bitstrings::lex_string(r));
  }
  return out;
}

std::vector<Word> config_words(const ExperimentConfig& cfg) {
  if (cfg.words.empty()) return all_words(1, std::min<std::uint64_t>(cfg.prefix_length, 8));
  std::vector<Word> out;
  for (const auto& w : cfg.words) out.push_back(Word::binary(w));
  return out;
}

std::optional<std::uint64_t> depth_or_null(const Word& x, std::uint64_t s,
                                           const aic::ComplexityTable& table) {
  try {
    const auto d = aic::depth(x, s, table);
    if (d.is_defined()) return d.steps();
  } catch (const ComplexityUnknown&) {
  }
  return std::nullopt;
}

// Undefined depth counts as +infinity.
bool not_above(const std::optional<std::uint64_t>& a, const std::optional<std::uint64_t>& b) {
  if (!a) return !b;
  return !b || *a <= *b;
}

void run_enumerate(const ExperimentConfig& cfg, const RunOptions& options,
                   report::ExperimentReport& rep) {
  const auto table = build_table(cfg, options);
  const std::uint32_t L = cfg.bounds.L;

  std::vector<std::uint64_t> below(L + 2, 0);
  for (const auto& [x, e] : table.entries()) {
    if (!e.prefix) continue;
    for (std::uint64_t m = e.prefix->program.size() + 1; m <= L + 1; ++m) ++below[m];
  }
  bool counting_ok = true;
  report::Series counting{"counting_bound", "m", "count_I_below_m", {}};
  report::Table counting_table{"counting_bound", {"m", "count", "bound", "holds"}, {}};
  for (std::uint64_t m = 0; m <= L; ++m) {
    const double bound = std::ldexp(1.0, static_cast<int>(m));
    const bool holds = static_cast<double>(below[m]) < bound;
    counting_ok = counting_ok && holds;
    counting.points.emplace_back(static_cast<double>(m), static_cast<double>(below[m]));
    counting_table.rows.push_back({m, below[m], number(bound), holds});
  }

  const std::uint64_t max_len = std::min<std::uint64_t>(cfg.prefix_length, 8);
  bool print_ok = true;
  bool gap_ok = true;
  bool plain_ok = true;
  bool all_present = true;
  double worst_gap = 0;
  report::Table outputs{"outputs",
                        {"output", "length", "I_bound", "K_bound", "canonical_program",
                         "prefix_steps", "print_program_bits", "witnesses"},
                        {}};
  for (const Word& x : all_words(0, max_len)) {
    const auto* e = table.find(x);
    const auto I = table.I_bound(x);
    const auto K = table.K_bound(x);
    const std::uint64_t print_bits = machine::print_program(x).size();
    if (!I || !K) {
      all_present = false;
    } else {
      print_ok = print_ok && *I <= constants::kCLit * x.size() + constants::kC0;
      const double gap = std::fabs(static_cast<double>(*I) - static_cast<double>(*K));
      worst_gap = std::max(worst_gap, gap - 2 * std::log2(static_cast<double>(x.size()) + 1));
      gap_ok = gap_ok && gap <= 2 * std::log2(static_cast<double>(x.size()) + 1) + constants::kCGap;
      plain_ok = plain_ok && *K <= *I + constants::kC0;
    }
    outputs.rows.push_back({x.str(), x.size(), opt(I), opt(K),
                            e && e->prefix ? Json(e->prefix->program.str()) : Json(nullptr),
                            e && e->prefix ? Json(e->prefix->steps) : Json(nullptr), print_bits,
                            e ? e->witnesses.size() : 0});
  }

  const mpq_class kraft = aic::kraft_sum(table);
  std::uint64_t with_prefix = 0;
  std::uint64_t with_plain = 0;
  for (const auto& [x, e] : table.entries()) {
    with_prefix += e.prefix.has_value();
    with_plain += e.plain.has_value();
  }
  rep.body["results"] = {
      {"outputs", table.entries().size()},
      {"outputs_with_prefix_producer", with_prefix},
      {"outputs_with_plain_producer", with_plain},
      {"kraft_sum", kraft.get_str()},
      {"kraft_sum_approx", number(q_double(kraft))},
      {"checked_max_length", max_len},
      {"all_short_words_present", all_present},
      {"max_gap_excess", number(worst_gap)},
  };
  rep.body["summary"] = {
      {"counting_bound_holds", counting_ok},
      {"print_bound_holds", all_present && print_ok},
      {"gap_bound_holds", all_present && gap_ok},
      {"plain_below_prefix_holds", all_present && plain_ok},
      {"kraft_at_most_one", kraft <= 1},
  };
  rep.tables.push_back(std::move(counting_table));
  rep.tables.push_back(std::move(outputs));
  rep.series.push_back(std::move(counting));
  rep.attachments.emplace_back("complexity_table.txt", aic::table_to_text(table));
  rep.attachments.emplace_back("complexity_table.json", aic::table_to_json(table));
}

void run_depth(const ExperimentConfig& cfg, const RunOptions& options,
               report::ExperimentReport& rep) {
  const auto table = build_table(cfg, options);
  std::vector<std::string> columns = {"word", "I_bound", "K_bound"};
  for (std::uint64_t s = 0; s <= cfg.s; ++s) columns.push_back("depth_s" + std::to_string(s));
  columns.insert(columns.end(), {"witness", "excluded", "class"});
  report::Table rows{"depth", columns, {}};
  bool monotone = true;
  std::uint64_t deep = 0;
  std::uint64_t undefined = 0;
  for (const Word& x : config_words(cfg)) {
    std::vector<Json> row = {x.str(), opt(table.I_bound(x)), opt(table.K_bound(x))};
    std::optional<std::uint64_t> prev;
    for (std::uint64_t s = 0; s <= cfg.s; ++s) {
      const auto d = depth_or_null(x, s, table);
      if (s > 0) monotone = monotone && not_above(d, prev);
      prev = d;
      row.push_back(opt(d));
    }
    std::optional<Word> witness;
    std::uint64_t excluded = 0;
    Json cls = nullptr;
    try {
      const auto d = aic::depth(x, cfg.s, table);
      witness = d.witness();
      excluded = d.excluded();
      if (d.is_defined()) {
        const auto c = d.steps() > cfg.t ? aic::DepthClass::Deep : aic::DepthClass::Shallow;
        deep += c == aic::DepthClass::Deep;
        cls = aic::to_string(c);
      }
    } catch (const ComplexityUnknown&) {
    }
    if (cls.is_null()) ++undefined;
    row.push_back(opt_word(witness));
    row.push_back(excluded);
    row.push_back(cls);
    rows.rows.push_back(std::move(row));
  }
  rep.body["results"] = {
      {"words", rows.rows.size()},
      {"deep", deep},
      {"undefined", undefined},
  };
  rep.body["summary"] = {{"depth_monotone_in_s", monotone}};
  rep.tables.push_back(std::move(rows));
}

void run_entropy(const ExperimentConfig& cfg, const RunOptions& options,
                 report::ExperimentReport& rep) {
  const auto sys = build_system(cfg.system);
  const auto family = build_family(cfg);
  dynsys::EstimatorParams params{cfg.k, cfg.samples, cfg.trajectory_length, cfg.seed,
                                 options.workers};
  const auto ks = dynsys::ks_entropy(*sys, family, params);
  const double threshold = q_double(cfg.chaos_threshold);

  report::Table per{"partitions",
                    {"partition", "atoms", "rate", "standard_error", "undersampled",
                     "partition_entropy"},
                    {}};
  Json curves = Json::array();
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto& est = ks.per_partition[i];
    per.rows.push_back({family[i].str(), family[i].atoms(), number(est.rate),
                        number(est.standard_error), est.undersampled,
                        number(dynsys::partition_entropy(*sys, family[i]))});
    const std::string suffix = i == 0 ? "" : "_" + std::to_string(i);
    report::Series h{"entropy_curve" + suffix, "k", "h_k", {}};
    report::Series big{"block_entropy" + suffix, "k", "H_k", {}};
    bool nonincreasing = true;
    for (std::size_t j = 0; j < est.conditional.size(); ++j) {
      h.points.emplace_back(static_cast<double>(j + 1), est.conditional[j]);
      big.points.emplace_back(static_cast<double>(j + 1), est.block_entropies[j]);
      if (j > 0) nonincreasing = nonincreasing && est.conditional[j] <= est.conditional[j - 1] + 0.01;
    }
    curves.push_back({{"partition", family[i].str()}, {"conditional_nonincreasing", nonincreasing}});
    rep.series.push_back(std::move(h));
    rep.series.push_back(std::move(big));
  }

  const std::uint64_t defect_samples = std::max<std::uint64_t>(1000, cfg.samples * 10);
  const double defect =
      dynsys::measure_preservation_defect(*sys, family.front(), defect_samples, cfg.seed);
  rep.body["results"] = {
      {"system", sys->name()},
      {"rate", number(ks.rate)},
      {"standard_error", number(ks.standard_error)},
      {"maximizer", ks.maximizer},
      {"lower_bound", ks.lower_bound},
      {"total_symbols", cfg.samples * cfg.trajectory_length},
      {"curves", curves},
      {"preservation_defect", number(defect)},
      {"preservation_samples", defect_samples},
  };
  rep.body["summary"] = {{"chaotic", ks.rate - 2 * ks.standard_error > threshold}};
  rep.tables.push_back(std::move(per));
}

void run_brudno(const ExperimentConfig& cfg, const RunOptions& options,
                report::ExperimentReport& rep) {
  const auto sys = build_system(cfg.system);
  const auto family = build_family(cfg);
  brudno::EstimatorOptions eo;
  eo.method = brudno::method_from_string(cfg.estimator);
  eo.k = cfg.k;
  std::optional<aic::ComplexityTable> table;
  if (eo.method == brudno::Method::BoundedK) {
    table = build_table(cfg, options);
    eo.table = &*table;
  }
  brudno::ChaoticityThresholds th{q_double(cfg.weak_threshold), q_double(cfg.chaotic_fraction),
                                  q_double(cfg.alpha)};
  const auto result = brudno::classify_algorithmic_chaoticity(
      *sys, family, cfg.orbits, cfg.trajectory_length, cfg.seed, th, eo, options.workers);

  report::Table orbits{"orbits",
                       {"index", "rate", "maximizer", "monobit_p", "block_frequency_p", "runs_p",
                        "battery_passed"},
                       {}};
  for (const auto& o : result.orbits) {
    std::vector<Json> row = {o.index, number(o.rate), o.maximizer};
    for (std::size_t i = 0; i < 3; ++i) {
      row.push_back(i < o.battery.size() ? number(o.battery[i].p_value) : Json(nullptr));
    }
    row.push_back(o.battery_passed);
    orbits.rows.push_back(std::move(row));
  }

  // Estimator agreement on orbit 0 under the first partition.
  const auto traj = dynsys::sample_trajectory(*sys, family.front(), cfg.trajectory_length,
                                              cfg.seed, 0);
  const Word bits = brudno::binary_coding(traj.symbols);
  const auto lz = brudno::lz78_rate(bits);
  const auto blk = brudno::block_rate(bits, cfg.k);
  report::Series conv{"lz78_convergence", "n", "lz78_rate", {}};
  for (std::uint64_t n = 16; n <= bits.size(); n *= 2) {
    conv.points.emplace_back(static_cast<double>(n),
                             brudno::lz78_rate(bitstrings::prefix(bits, n)).value);
  }
  if (bits.size() >= 2) conv.points.emplace_back(static_cast<double>(bits.size()), lz.value);

  rep.body["results"] = {
      {"system", sys->name()},
      {"estimator", brudno::to_string(eo.method)},
      {"weak_fraction", number(result.weak_fraction)},
      {"battery_fraction", number(result.battery_fraction)},
      {"orbit0",
       {{"length", bits.size()},
        {"lz78_rate", number(lz.value)},
        {"lz78_phrases", lz.phrases},
        {"block_rate", number(blk.value)},
        {"difference", number(std::fabs(lz.value - blk.value))}}},
  };
  rep.body["summary"] = {{"verdict", brudno::to_string(result.verdict)}};
  rep.tables.push_back(std::move(orbits));
  rep.series.push_back(std::move(conv));
}

void run_shallow_chaos(const ExperimentConfig& cfg, const RunOptions& options,
                       report::ExperimentReport& rep) {
  const auto table = build_table(cfg, options);
  const auto sys = build_system(cfg.system);
  const dynsys::Partition a(cfg.partitions.front());
  const auto profile = brudno::trajectory_depth_profile(*sys, a, cfg.orbits, cfg.prefix_length,
                                                        cfg.s, table, cfg.seed, cfg.c_slack);
  report::Table per{"per_orbit",
                    {"index", "coding", "I_bound", "K_bound", "depth", "T_print",
                     "incompressible", "shallow"},
                    {}};
  for (const auto& o : profile.per_orbit) {
    per.rows.push_back({o.index, o.coding.str(), opt(o.I_bound), opt(o.K_bound), opt(o.depth),
                        o.T_print, o.incompressible, o.shallow});
  }
  rep.body["results"] = {
      {"system", profile.system},
      {"partition", profile.partition},
      {"orbits", profile.per_orbit.size()},
      {"shallow_fraction", number(profile.shallow_fraction)},
      {"incompressible_fraction", number(profile.incompressible_fraction)},
      {"incompressible_shallow_fraction", number(profile.incompressible_shallow_fraction)},
  };
  const bool mostly_incompressible = profile.incompressible_fraction >= 0.95;
  const bool all_shallow = profile.incompressible_shallow_fraction == 1.0;
  rep.body["summary"] = {
      {"incompressible_at_least_95_percent", mostly_incompressible},
      {"incompressible_all_shallow", all_shallow},
      {"weakly_shallow", mostly_incompressible && all_shallow},
  };
  rep.tables.push_back(std::move(per));
}

void run_qdepth(const ExperimentConfig& cfg, const RunOptions& options,
                report::ExperimentReport& rep) {
  const auto table = build_table(cfg, options);
  std::vector<qdepth::QubitString> states;
  for (const auto& s : cfg.states) states.push_back(qdepth::state_from_json(s));
  if (states.empty()) {
    states.push_back(qdepth::QubitString::basis(1, 0));
    states.push_back(qdepth::QubitString::basis(1, 1));
  }
  std::vector<std::string> columns = {"state", "encoding", "parse_round_trip", "canonical_program"};
  for (std::uint64_t s = 0; s <= cfg.s; ++s) columns.push_back("qdepth_s" + std::to_string(s));
  columns.insert(columns.end(), {"rescale_invariant", "monotone", "class"});
  report::Table rows{"qdepth", columns, {}};
  bool all_defined = true;
  bool all_invariant = true;
  bool all_monotone = true;
  bool all_round_trip = true;
  for (const auto& psi : states) {
    const Word enc = qdepth::encode(psi);
    const auto back = qdepth::parse_qoutput(enc);
    const bool round_trip = back && *back == psi;
    all_round_trip = all_round_trip && round_trip;
    const auto canon = qdepth::qcanonical_program(psi, table);
    std::vector<Json> row = {Json::parse(qdepth::state_to_json(psi)), enc.str(), round_trip,
                             canon ? Json(canon->program.str()) : Json(nullptr)};
    std::optional<std::uint64_t> prev;
    bool invariant = true;
    bool monotone = true;
    const auto scaled = psi.scaled(3);
    for (std::uint64_t s = 0; s <= cfg.s; ++s) {
      const auto d = qdepth::qdepth(psi, s, table);
      const auto d3 = qdepth::qdepth(scaled, s, table);
      const std::optional<std::uint64_t> v =
          d.is_defined() ? std::optional<std::uint64_t>(d.steps()) : std::nullopt;
      const std::optional<std::uint64_t> v3 =
          d3.is_defined() ? std::optional<std::uint64_t>(d3.steps()) : std::nullopt;
      invariant = invariant && v == v3;
      if (s > 0) monotone = monotone && not_above(v, prev);
      prev = v;
      all_defined = all_defined && v.has_value();
      row.push_back(opt(v));
    }
    all_invariant = all_invariant && invariant;
    all_monotone = all_monotone && monotone;
    row.push_back(invariant);
    row.push_back(monotone);
    row.push_back(prev ? Json(aic::to_string(*prev > cfg.t ? aic::DepthClass::Deep
                                                           : aic::DepthClass::Shallow))
                       : Json(nullptr));
    rows.rows.push_back(std::move(row));
  }
  rep.body["results"] = {{"states", states.size()}, {"rescale_factor", 3}};
  rep.body["summary"] = {
      {"all_defined", all_defined},
      {"rescale_invariant", all_invariant},
      {"monotone_in_s", all_monotone},
      {"parse_round_trip", all_round_trip},
  };
  rep.tables.push_back(std::move(rows));
}

void run_coding_gap(const ExperimentConfig& cfg, const RunOptions& options,
                    report::ExperimentReport& rep) {
  const auto table = build_table(cfg, options);
  std::vector<DistributionConfig> dists = cfg.distributions;
  if (dists.empty()) dists = {{"uniform", 4}, {"geometric", 6}};
  const mpq_class kraft = aic::kraft_sum(table);
  report::Table rows{"coding_gap",
                     {"distribution", "length", "support", "H", "L", "gap", "overhead", "bound",
                      "holds"},
                     {}};
  bool all_hold = true;
  for (const auto& dc : dists) {
    const auto p = dc.kind == "uniform" ? aic::Distribution::uniform(dc.length)
                                        : aic::Distribution::geometric(dc.length);
    std::uint64_t overhead = 0;
    for (const Word& x : p.support()) {
      overhead = std::max<std::uint64_t>(overhead, machine::print_program(x).size() - x.size());
    }
    const double H = aic::shannon_entropy(p);
    const mpq_class L = aic::avg_codeword_length(p, table);
    const double gap = q_double(L) - H;
    const double bound = 3.0 * static_cast<double>(overhead);
    const bool holds = gap >= 0 && gap <= bound;
    all_hold = all_hold && holds;
    rows.rows.push_back({dc.kind, dc.length, p.support().size(), number(H), L.get_str(),
                         number(gap), overhead, number(bound), holds});
  }
  rep.body["results"] = {
      {"kraft_sum", kraft.get_str()},
      {"kraft_sum_approx", number(q_double(kraft))},
  };
  rep.body["summary"] = {{"kraft_at_most_one", kraft <= 1}, {"gap_within_bound", all_hold}};
  rep.tables.push_back(std::move(rows));
}

}  // namespace

report::ExperimentReport run_experiment(const ExperimentConfig& cfg, const RunOptions& options) {
  report::ExperimentReport rep;
  rep.body["tool"] = {{"name", "depthlab"}, {"version", DEPTHLAB_VERSION}};
  rep.body["machine"] = machine::machine_spec().version;
  rep.body["experiment"] = to_string(cfg.kind);
  rep.body["config"] = config_echo(cfg);
  rep.body["constants"] = constants_json(cfg);
  try {
    switch (cfg.kind) {
      case Kind::Enumerate: run_enumerate(cfg, options, rep); break;
      case Kind::Depth: run_depth(cfg, options, rep); break;
      case Kind::Entropy: run_entropy(cfg, options, rep); break;
      case Kind::Brudno: run_brudno(cfg, options, rep); break;
      case Kind::ShallowChaos: run_shallow_chaos(cfg, options, rep); break;
      case Kind::Qdepth: run_qdepth(cfg, options, rep); break;
      case Kind::CodingGap: run_coding_gap(cfg, options, rep); break;
    }
  } catch (const WorkCeilingExceeded&) {
    throw;
  } catch (const PreconditionError& e) {
    throw PreconditionError(to_string(cfg.kind) + ": " + e.what());
  }
  return rep;
}

}  // namespace depthlab::harness
