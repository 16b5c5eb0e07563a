#pragma once

// Experiment configuration (JSON, exact values as rational strings) and the
// experiment runner.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "depthlab/aic.hpp"
#include "depthlab/report.hpp"

namespace depthlab::harness {

enum class Kind { Enumerate, Depth, Entropy, Brudno, ShallowChaos, Qdepth, CodingGap };

std::string to_string(Kind k);
/// Accepts "SHALLOW_CHAOS", "shallow-chaos" and "shallow_chaos" spellings.
std::optional<Kind> kind_from_string(const std::string& name);

struct SystemConfig {
  std::string name = "doubling";
  // Rotation angle (p + q sqrt(d)) / r.
  long p = -1;
  long q = 1;
  unsigned long d = 2;
  long r = 1;
};

struct DistributionConfig {
  std::string kind = "uniform";  // uniform | geometric
  std::uint64_t length = 4;       // uniform: word length; geometric: max length
};

struct ExperimentConfig {
  Kind kind = Kind::ShallowChaos;
  aic::Bounds bounds{16, 256};
  std::optional<double> work_ceiling;
  SystemConfig system;
  /// Partition family; the first is the experiment partition.
  std::vector<std::vector<mpq_class>> partitions{{0, mpq_class(1, 2), 1}};
  std::uint64_t trajectory_length = 1000;
  std::uint64_t samples = 100;
  std::uint64_t orbits = 100;
  std::uint64_t k = 10;
  std::uint64_t s = 2;
  std::uint64_t t = 1;
  std::uint64_t prefix_length = 8;
  std::string estimator = "LZ78";
  mpq_class weak_threshold{1, 2};
  mpq_class chaotic_fraction{9, 10};
  mpq_class alpha{1, 100};
  mpq_class chaos_threshold{1, 10};
  std::uint64_t c_slack = 0;
  std::vector<std::string> words;
  std::vector<std::string> states;  // JSON state fixtures
  std::vector<DistributionConfig> distributions;
  std::uint64_t seed = 0;
  std::string output_dir = "out";
  std::vector<report::Format> formats{report::Format::Json, report::Format::Csv,
                                      report::Format::Plotdata};
};

/// Throws ValidationError listing every problem, including unknown fields
/// and bounds beyond the work ceiling.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

/// The config as canonical JSON (output paths excluded).
report::Json config_echo(const ExperimentConfig& cfg);

struct RunOptions {
  unsigned workers = 1;
};

report::ExperimentReport run_experiment(const ExperimentConfig& cfg, const RunOptions& options = {});

}  // namespace depthlab::harness
