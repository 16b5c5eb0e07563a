#pragma once

// Per-symbol complexity rates of words and orbit codings, the finite-scale
// chaoticity classifier and the depth profile of orbit codings.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "depthlab/aic.hpp"
#include "depthlab/bitstrings.hpp"
#include "depthlab/dynsys.hpp"

namespace depthlab::brudno {

using bitstrings::Word;

enum class Method { BoundedK, LZ78, BlockEntropy };
std::string to_string(Method m);
Method method_from_string(const std::string& name);

struct RateEstimate {
  double value = 0;
  Method method = Method::LZ78;
  std::uint64_t length = 0;
  /// BoundedK: K_bound(w(n))/n for n = 1, 2, ...; BlockEntropy: h_1..h_k.
  std::vector<double> curve;
  std::uint64_t phrases = 0;  // LZ78 only
  /// Upper clamp slack: values lie in [0, 1 + epsilon].
  double epsilon = 0;
  /// BoundedK curve stopped at the first prefix without a plain producer.
  bool truncated = false;
  /// Digits lost converting a coding to binary.
  std::uint64_t dropped = 0;
};

/// 2 log2(log2 n + 2) / log2(n + 1).
double rate_epsilon(std::uint64_t n);

/// Phrase count c of the incremental parsing. For binary words the rate is
/// c (log2 c + 1) / |w|; over n letters, c (log2 c + log2 n) / (|w| log2 n).
RateEstimate lz78_rate(const Word& w);
std::uint64_t lz78_phrase_count(const Word& w);

RateEstimate boundedK_rate(const Word& w, const aic::ComplexityTable& table);

RateEstimate block_rate(const Word& w, std::uint64_t k);

struct EstimatorOptions {
  Method method = Method::LZ78;
  std::uint64_t k = 10;  // BlockEntropy block length
  const aic::ComplexityTable* table = nullptr;  // BoundedK
};

/// Binary form of a coding over card(A) letters. `dropped` receives the
/// undetermined trailing digits.
Word binary_coding(const Word& coding, std::uint64_t* dropped = nullptr);

RateEstimate estimate(const Word& binary, const EstimatorOptions& options);

RateEstimate brudno_entropy(const dynsys::DynamicalSystem& sys, const dynsys::Partition& a,
                            const dynsys::Point& x0, std::uint64_t length,
                            const EstimatorOptions& options = {});

struct SupEstimate {
  RateEstimate best;
  std::size_t maximizer = 0;
  std::vector<RateEstimate> members;
  bool lower_bound = true;
};

SupEstimate brudno_sup(const dynsys::DynamicalSystem& sys,
                       const std::vector<dynsys::Partition>& family, const dynsys::Point& x0,
                       std::uint64_t length, const EstimatorOptions& options = {});

struct TestResult {
  std::string name;
  double p_value = 0;
  bool passed = false;
};

TestResult monobit_test(const Word& bits, double alpha);
TestResult block_frequency_test(const Word& bits, unsigned block, double alpha);
TestResult runs_test(const Word& bits, double alpha);
std::vector<TestResult> randomness_battery(const Word& bits, double alpha);

enum class Chaoticity { None, Weak, StrongProxy };
std::string to_string(Chaoticity c);

struct ChaoticityThresholds {
  double weak = 0.5;
  double fraction = 0.9;
  double alpha = 0.01;
};

struct OrbitChaoticity {
  std::uint64_t index = 0;
  double rate = 0;
  std::size_t maximizer = 0;
  std::vector<TestResult> battery;
  bool battery_passed = false;
};

struct ChaoticityReport {
  Chaoticity verdict = Chaoticity::None;
  double weak_fraction = 0;
  double battery_fraction = 0;
  ChaoticityThresholds thresholds;
  std::vector<OrbitChaoticity> orbits;
};

ChaoticityReport classify_algorithmic_chaoticity(
    const dynsys::DynamicalSystem& sys, const std::vector<dynsys::Partition>& family,
    std::uint64_t n_orbits, std::uint64_t length, std::uint64_t seed,
    const ChaoticityThresholds& thresholds = {}, const EstimatorOptions& options = {},
    unsigned workers = 1);

struct OrbitDepth {
  std::uint64_t index = 0;
  Word coding;
  std::optional<std::uint64_t> I_bound;
  std::optional<std::uint64_t> K_bound;
  std::optional<std::uint64_t> depth;
  std::uint64_t T_print = 0;
  bool incompressible = false;  // s-incompressible
  bool shallow = false;         // depth <= T_print + c_slack
};

struct DepthProfile {
  std::string machine;
  aic::Bounds bounds;
  std::string system;
  std::string partition;
  std::uint64_t seed = 0;
  std::uint64_t s = 0;
  std::uint64_t c_slack = 0;
  std::vector<OrbitDepth> per_orbit;
  double shallow_fraction = 0;
  double incompressible_fraction = 0;
  /// Among s-incompressible codings.
  double incompressible_shallow_fraction = 0;
};

/// Depth profile of given binary words.
DepthProfile depth_profile_of_words(const std::vector<Word>& words, std::uint64_t s,
                                    const aic::ComplexityTable& table, std::uint64_t c_slack);

DepthProfile trajectory_depth_profile(const dynsys::DynamicalSystem& sys,
                                      const dynsys::Partition& a, std::uint64_t n_orbits,
                                      std::uint64_t prefix_len, std::uint64_t s,
                                      const aic::ComplexityTable& table, std::uint64_t seed,
                                      std::uint64_t c_slack);

std::string profile_to_json(const DepthProfile& profile);
/// Header plus one row per orbit.
std::string profile_to_csv(const DepthProfile& profile);

}  // namespace depthlab::brudno
