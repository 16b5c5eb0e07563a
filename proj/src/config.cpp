#include "depthlab/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "depthlab/error.hpp"
#include "depthlab/qdepth.hpp"

namespace depthlab::harness {

namespace {

using report::Json;

struct KindName {
  Kind kind;
  const char* name;
};

constexpr KindName kKinds[] = {
    {Kind::Enumerate, "ENUMERATE"}, {Kind::Depth, "DEPTH"},
    {Kind::Entropy, "ENTROPY"},     {Kind::Brudno, "BRUDNO"},
    {Kind::ShallowChaos, "SHALLOW_CHAOS"}, {Kind::Qdepth, "QDEPTH"},
    {Kind::CodingGap, "CODING_GAP"},
};

const std::set<std::string> kTopFields = {
    "experiment", "bounds",     "work_ceiling", "system",   "partition",     "partitions",
    "trajectory_length", "samples", "orbits",   "k",        "s",             "t",
    "prefix_length", "estimator", "thresholds", "c_slack",  "words",         "states",
    "distributions", "seed",     "output"};

// Collects validation problems instead of stopping at the first.
class Checker {
 public:
  explicit Checker(std::vector<std::string>& errors) : errors_(errors) {}

  void fail(std::string msg) { errors_.push_back(std::move(msg)); }

  void only(const Json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
      if (!allowed.count(key)) fail("unknown field '" + where + key + "'");
    }
  }

  template <class T>
  void natural(const Json& obj, const char* key, T& out, const std::string& where = "") {
    if (!obj.contains(key)) return;
    const Json& v = obj.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      fail("'" + where + key + "' must be a non-negative integer");
      return;
    }
    out = static_cast<T>(v.get<std::uint64_t>());
  }

  void integer(const Json& obj, const char* key, long& out, const std::string& where) {
    if (!obj.contains(key)) return;
    if (!obj.at(key).is_number_integer()) {
      fail("'" + where + key + "' must be an integer");
      return;
    }
    out = obj.at(key).get<long>();
  }

  void string(const Json& obj, const char* key, std::string& out, const std::string& where = "") {
    if (!obj.contains(key)) return;
    if (!obj.at(key).is_string()) {
      fail("'" + where + key + "' must be a string");
      return;
    }
    out = obj.at(key).get<std::string>();
  }

  void rational(const Json& obj, const char* key, mpq_class& out, const std::string& where) {
    if (!obj.contains(key)) return;
    const Json& v = obj.at(key);
    if (v.is_number_integer()) {
      out = mpq_class(std::to_string(v.get<long long>()));
      return;
    }
    if (!v.is_string()) {
      fail("'" + where + key + "' must be an exact rational string such as \"1/2\"");
      return;
    }
    try {
      out = bitstrings::parse_rational(v.get<std::string>());
    } catch (const PreconditionError&) {
      fail("'" + where + key + "' is not an exact rational: \"" + v.get<std::string>() + "\"");
    }
  }

  std::optional<std::vector<mpq_class>> cuts(const Json& v, const std::string& where) {
    if (!v.is_array()) {
      fail("'" + where + "' must be an array of rational strings");
      return std::nullopt;
    }
    std::vector<mpq_class> out;
    for (const auto& c : v) {
      if (!c.is_string() && !c.is_number_integer()) {
        fail("'" + where + "' cut points must be rational strings");
        return std::nullopt;
      }
      const std::string text = c.is_string() ? c.get<std::string>() : c.dump();
      try {
        out.push_back(bitstrings::parse_rational(text));
      } catch (const PreconditionError&) {
        fail("'" + where + "' has a non-rational cut point \"" + text + "\"");
        return std::nullopt;
      }
    }
    bool ok = true;
    if (out.size() < 2 || out.front() != 0 || out.back() != 1) {
      fail("'" + where + "' must start at 0 and end at 1");
      ok = false;
    }
    for (std::size_t i = 1; i < out.size(); ++i) {
      if (!(out[i - 1] < out[i])) {
        fail("'" + where + "' cut points " + out[i - 1].get_str() + " and " + out[i].get_str() +
             " are not strictly increasing");
        ok = false;
      }
    }
    if (!ok) return std::nullopt;
    return out;
  }

 private:
  std::vector<std::string>& errors_;
};

bool needs_table(const ExperimentConfig& cfg) {
  switch (cfg.kind) {
    case Kind::Enumerate:
    case Kind::Depth:
    case Kind::ShallowChaos:
    case Kind::Qdepth:
    case Kind::CodingGap:
      return true;
    case Kind::Brudno:
      return cfg.estimator == "BOUNDED_K";
    case Kind::Entropy:
      return false;
  }
  return false;
}

std::string format_name(report::Format f) {
  switch (f) {
    case report::Format::Json: return "json";
    case report::Format::Csv: return "csv";
    case report::Format::Plotdata: return "plotdata";
  }
  return "?";
}

std::string normalize_kind(std::string s) {
  for (char& c : s) c = c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

std::string to_string(Kind k) {
  for (const auto& kn : kKinds) {
    if (kn.kind == k) return kn.name;
  }
  return "?";
}

std::optional<Kind> kind_from_string(const std::string& name) {
  const std::string n = normalize_kind(name);
  for (const auto& kn : kKinds) {
    if (n == kn.name) return kn.kind;
  }
  return std::nullopt;
}

ExperimentConfig parse_config(const std::string& json_text) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const Json::exception& e) {
    throw ValidationError({std::string("config is not valid JSON: ") + e.what()});
  }
  std::vector<std::string> errors;
  Checker check(errors);
  ExperimentConfig cfg;
  if (!j.is_object()) throw ValidationError({"config must be a JSON object"});
  check.only(j, kTopFields, "");

  if (!j.contains("experiment") || !j.at("experiment").is_string()) {
    check.fail("missing string field 'experiment'");
  } else if (auto k = kind_from_string(j.at("experiment").get<std::string>())) {
    cfg.kind = *k;
  } else {
    check.fail("unknown experiment kind '" + j.at("experiment").get<std::string>() + "'");
  }

  if (j.contains("bounds")) {
    const Json& b = j.at("bounds");
    if (!b.is_object()) {
      check.fail("'bounds' must be an object {L, T}");
    } else {
      check.only(b, {"L", "T"}, "bounds.");
      check.natural(b, "L", cfg.bounds.L, "bounds.");
      check.natural(b, "T", cfg.bounds.T, "bounds.");
      if (cfg.bounds.L < 1 || cfg.bounds.L > 62) check.fail("'bounds.L' must be in [1, 62]");
      if (cfg.bounds.T < 1) check.fail("'bounds.T' must be at least 1");
    }
  }
  if (j.contains("work_ceiling") && !j.at("work_ceiling").is_null()) {
    if (!j.at("work_ceiling").is_number() || j.at("work_ceiling").get<double>() <= 0) {
      check.fail("'work_ceiling' must be a positive number");
    } else {
      cfg.work_ceiling = j.at("work_ceiling").get<double>();
    }
  }

  if (j.contains("system")) {
    const Json& s = j.at("system");
    if (s.is_string()) {
      cfg.system.name = s.get<std::string>();
    } else if (s.is_object()) {
      check.only(s, {"name", "p", "q", "d", "r"}, "system.");
      check.string(s, "name", cfg.system.name, "system.");
      check.integer(s, "p", cfg.system.p, "system.");
      check.integer(s, "q", cfg.system.q, "system.");
      check.natural(s, "d", cfg.system.d, "system.");
      check.integer(s, "r", cfg.system.r, "system.");
    } else {
      check.fail("'system' must be a name or an object");
    }
    static const std::set<std::string> names = {"doubling", "rotation", "logistic", "identity",
                                                "half"};
    if (!names.count(cfg.system.name)) check.fail("unknown system '" + cfg.system.name + "'");
  }

  if (j.contains("partition") && j.contains("partitions")) {
    check.fail("give either 'partition' or 'partitions', not both");
  } else if (j.contains("partition")) {
    if (auto c = check.cuts(j.at("partition"), "partition")) cfg.partitions = {*c};
  } else if (j.contains("partitions")) {
    const Json& family = j.at("partitions");
    if (!family.is_array() || family.empty()) {
      check.fail("'partitions' must be a nonempty array of cut lists");
    } else {
      cfg.partitions.clear();
      for (std::size_t i = 0; i < family.size(); ++i) {
        if (auto c = check.cuts(family[i], "partitions[" + std::to_string(i) + "]")) {
          cfg.partitions.push_back(*c);
        }
      }
    }
  }

  check.natural(j, "trajectory_length", cfg.trajectory_length);
  check.natural(j, "samples", cfg.samples);
  check.natural(j, "orbits", cfg.orbits);
  check.natural(j, "k", cfg.k);
  check.natural(j, "s", cfg.s);
  check.natural(j, "t", cfg.t);
  check.natural(j, "prefix_length", cfg.prefix_length);
  check.natural(j, "c_slack", cfg.c_slack);
  check.natural(j, "seed", cfg.seed);
  check.string(j, "estimator", cfg.estimator);
  if (cfg.estimator != "LZ78" && cfg.estimator != "BLOCK_ENTROPY" &&
      cfg.estimator != "BOUNDED_K") {
    check.fail("'estimator' must be LZ78, BLOCK_ENTROPY or BOUNDED_K");
  }
  if (cfg.k < 1) check.fail("'k' must be at least 1");
  if (cfg.trajectory_length < 1) check.fail("'trajectory_length' must be at least 1");
  if (cfg.kind == Kind::Entropy) {
    if (cfg.samples < 100) check.fail("'samples' must be at least 100 for ENTROPY");
    if (cfg.k > cfg.trajectory_length) check.fail("'k' must not exceed 'trajectory_length'");
  }
  if ((cfg.kind == Kind::Brudno || cfg.kind == Kind::ShallowChaos) && cfg.orbits < 30) {
    check.fail("'orbits' must be at least 30");
  }
  if (cfg.kind == Kind::Brudno && cfg.trajectory_length < 2) {
    check.fail("'trajectory_length' must be at least 2 for BRUDNO");
  }

  if (j.contains("thresholds")) {
    const Json& t = j.at("thresholds");
    if (!t.is_object()) {
      check.fail("'thresholds' must be an object");
    } else {
      check.only(t, {"weak", "fraction", "alpha", "chaos"}, "thresholds.");
      check.rational(t, "weak", cfg.weak_threshold, "thresholds.");
      check.rational(t, "fraction", cfg.chaotic_fraction, "thresholds.");
      check.rational(t, "alpha", cfg.alpha, "thresholds.");
      check.rational(t, "chaos", cfg.chaos_threshold, "thresholds.");
      if (cfg.alpha <= 0 || cfg.alpha >= 1) check.fail("'thresholds.alpha' must lie in (0, 1)");
      if (cfg.chaotic_fraction <= 0 || cfg.chaotic_fraction > 1) {
        check.fail("'thresholds.fraction' must lie in (0, 1]");
      }
    }
  }

  if (j.contains("words")) {
    const Json& w = j.at("words");
    if (!w.is_array()) {
      check.fail("'words' must be an array of 0/1 strings");
    } else {
      for (const auto& x : w) {
        if (!x.is_string() || x.get<std::string>().find_first_not_of("01") != std::string::npos) {
          check.fail("'words' entries must be 0/1 strings, got " + x.dump());
        } else {
          cfg.words.push_back(x.get<std::string>());
        }
      }
    }
  }
  if (j.contains("states")) {
    const Json& st = j.at("states");
    if (!st.is_array()) {
      check.fail("'states' must be an array of {n, amplitudes} objects");
    } else {
      for (std::size_t i = 0; i < st.size(); ++i) {
        try {
          const auto psi = qdepth::state_from_json(st[i].dump());
          cfg.states.push_back(qdepth::state_to_json(psi));
        } catch (const std::exception& e) {
          check.fail("'states[" + std::to_string(i) + "]': " + e.what());
        }
      }
    }
  }
  if (j.contains("distributions")) {
    const Json& ds = j.at("distributions");
    if (!ds.is_array()) {
      check.fail("'distributions' must be an array");
    } else {
      for (std::size_t i = 0; i < ds.size(); ++i) {
        const std::string where = "distributions[" + std::to_string(i) + "].";
        DistributionConfig d;
        if (!ds[i].is_object()) {
          check.fail("'" + where + "' must be an object");
          continue;
        }
        check.only(ds[i], {"kind", "length"}, where);
        check.string(ds[i], "kind", d.kind, where);
        check.natural(ds[i], "length", d.length, where);
        if (d.kind != "uniform" && d.kind != "geometric") {
          check.fail("'" + where + "kind' must be uniform or geometric");
        }
        if (d.length > 16) check.fail("'" + where + "length' must be at most 16");
        cfg.distributions.push_back(d);
      }
    }
  }

  if (j.contains("output")) {
    const Json& o = j.at("output");
    if (!o.is_object()) {
      check.fail("'output' must be an object");
    } else {
      check.only(o, {"dir", "formats"}, "output.");
      check.string(o, "dir", cfg.output_dir, "output.");
      if (o.contains("formats")) {
        cfg.formats.clear();
        for (const auto& f : o.at("formats")) {
          const std::string name = f.is_string() ? f.get<std::string>() : "";
          if (name == "json") {
            cfg.formats.push_back(report::Format::Json);
          } else if (name == "csv") {
            cfg.formats.push_back(report::Format::Csv);
          } else if (name == "plotdata") {
            cfg.formats.push_back(report::Format::Plotdata);
          } else {
            check.fail("unknown output format " + f.dump());
          }
        }
      }
    }
  }

  if (cfg.kind == Kind::ShallowChaos || cfg.kind == Kind::Depth) {
    if (cfg.prefix_length > cfg.bounds.L) check.fail("'prefix_length' exceeds bounds.L");
  }

  if (!errors.empty()) throw ValidationError(std::move(errors));
  if (needs_table(cfg)) {
    const double ceiling = cfg.work_ceiling ? *cfg.work_ceiling : aic::default_work_ceiling();
    const double cost = aic::enumeration_cost(cfg.bounds);
    if (cost > ceiling) throw WorkCeilingExceeded(cost, ceiling);
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError({"cannot read config file " + path});
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

Json config_echo(const ExperimentConfig& cfg) {
  Json partitions = Json::array();
  for (const auto& cuts : cfg.partitions) {
    Json c = Json::array();
    for (const auto& q : cuts) c.push_back(q.get_str());
    partitions.push_back(c);
  }
  Json distributions = Json::array();
  for (const auto& d : cfg.distributions) {
    distributions.push_back({{"kind", d.kind}, {"length", d.length}});
  }
  Json states = Json::array();
  for (const auto& s : cfg.states) states.push_back(Json::parse(s));
  Json formats = Json::array();
  for (auto f : cfg.formats) formats.push_back(format_name(f));
  Json echo = {
      {"experiment", to_string(cfg.kind)},
      {"bounds", {{"L", cfg.bounds.L}, {"T", cfg.bounds.T}}},
      {"system",
       {{"name", cfg.system.name},
        {"p", cfg.system.p},
        {"q", cfg.system.q},
        {"d", cfg.system.d},
        {"r", cfg.system.r}}},
      {"partitions", partitions},
      {"trajectory_length", cfg.trajectory_length},
      {"samples", cfg.samples},
      {"orbits", cfg.orbits},
      {"k", cfg.k},
      {"s", cfg.s},
      {"t", cfg.t},
      {"prefix_length", cfg.prefix_length},
      {"estimator", cfg.estimator},
      {"thresholds",
       {{"weak", cfg.weak_threshold.get_str()},
        {"fraction", cfg.chaotic_fraction.get_str()},
        {"alpha", cfg.alpha.get_str()},
        {"chaos", cfg.chaos_threshold.get_str()}}},
      {"c_slack", cfg.c_slack},
      {"words", cfg.words},
      {"states", states},
      {"distributions", distributions},
      {"seed", cfg.seed},
      {"output", {{"formats", formats}}},
  };
  echo["work_ceiling"] = cfg.work_ceiling ? Json(*cfg.work_ceiling) : Json(nullptr);
  return echo;
}

}  // namespace depthlab::harness
