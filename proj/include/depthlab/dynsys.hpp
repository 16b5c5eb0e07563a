#pragma once

// Classical dynamical systems on [0, 1]: fixed-point iteration with a
// precision contract, partitions and their refinement lattice, symbolic
// coding of orbits, and Monte-Carlo entropy estimators.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "depthlab/bitstrings.hpp"
#include "depthlab/rng.hpp"

namespace depthlab::dynsys {

using bitstrings::Word;

/// The point X / 2^P, 0 <= X <= 2^P.
struct Point {
  mpz_class X;
  std::uint64_t P = 0;

  /// floor(q * 2^P).
  static Point from_rational(const mpq_class& q, std::uint64_t precision);
  mpq_class value() const;
  double approx() const;
};

/// Finite partition of [0, 1) into half-open atoms [c_i, c_{i+1}).
class Partition {
 public:
  /// Cuts must start at 0, end at 1 and increase strictly.
  explicit Partition(std::vector<mpq_class> cuts);

  static Partition trivial();
  static Partition halves();
  /// n atoms of equal length.
  static Partition uniform(unsigned n);

  const std::vector<mpq_class>& cuts() const { return cuts_; }
  std::size_t atoms() const { return cuts_.size() - 1; }
  const mpq_class& lo(std::size_t i) const { return cuts_[i]; }
  const mpq_class& hi(std::size_t i) const { return cuts_[i + 1]; }
  /// Index of the atom containing q; q = 1 maps to the last atom.
  std::size_t index_of(const mpq_class& q) const;
  std::string str() const;

  bool operator==(const Partition&) const = default;

 private:
  std::vector<mpq_class> cuts_;
};

/// One application of the map at a fixed precision.
using Stepper = std::function<void(mpz_class&)>;

class DynamicalSystem {
 public:
  virtual ~DynamicalSystem() = default;
  virtual std::string name() const = 0;
  /// Fixed-point bits a point needs so that k iterations keep 64 good bits.
  virtual std::uint64_t required_precision(std::uint64_t k) const = 0;
  virtual Stepper stepper(std::uint64_t precision) const = 0;
  /// A point drawn from the invariant measure.
  virtual Point sample(rng::Engine& eng, std::uint64_t precision) const;
  /// mu([lo, hi)).
  virtual double atom_measure(const mpq_class& lo, const mpq_class& hi) const;
  /// T(x) on exact rationals, when the map sends rationals to rationals.
  virtual std::optional<mpq_class> map_exact(const mpq_class& x) const;
  /// All y in [0, 1) with T(y) = c, when available in closed form.
  virtual std::optional<std::vector<mpq_class>> preimages(const mpq_class& c) const;
};

using SystemPtr = std::shared_ptr<const DynamicalSystem>;

SystemPtr doubling_map();
/// Rotation by alpha = (p + q sqrt(d)) / r, which must lie in (0, 1).
SystemPtr rotation(long p = -1, long q = 1, unsigned long d = 2, long r = 1);
/// x -> 4x(1 - x), invariant measure arcsine.
SystemPtr logistic_map();
/// Test fixture: every set invariant, not ergodic.
SystemPtr identity_map();
/// Test fixture: x -> x/2, does not preserve Lebesgue measure.
SystemPtr half_map();

/// Built-in system by name: doubling, rotation, logistic, identity, half.
SystemPtr make_system(const std::string& name);

/// Refuses with PrecisionError when x0 lacks sys.required_precision(k) bits.
Point iterate(const DynamicalSystem& sys, const Point& x0, std::uint64_t k);

/// A point for q with exactly the precision k iterations need.
Point make_point(const DynamicalSystem& sys, const mpq_class& q, std::uint64_t k);

Partition refine(const Partition& a, const Partition& b);
/// Every cut of a is a cut of b.
bool is_coarsening(const Partition& a, const Partition& b);

/// Join of T^-j A over j < m. Throws UnsupportedSystem without exact preimages.
Partition dynamical_refinement(const DynamicalSystem& sys, const Partition& a, std::uint64_t m);

/// m-symbol code of the left endpoint of each atom of a refinement.
std::vector<Word> refinement_codes(const DynamicalSystem& sys, const Partition& a,
                                   const Partition& refined, std::uint64_t m);

double partition_entropy(const DynamicalSystem& sys, const Partition& a);

/// Alphabet of the coding: card(A), at least 2.
bitstrings::Alphabet coding_alphabet(const Partition& a);

unsigned translate(const Partition& a, const Point& x);

struct SymbolicTrajectory {
  Word symbols;
  std::string system;
  Partition partition;
  std::uint64_t precision = 0;
  std::optional<std::uint64_t> seed;
};

SymbolicTrajectory translate_k(const DynamicalSystem& sys, const Partition& a, const Point& x0,
                               std::uint64_t k);

/// Trajectory `index` of the stream for `seed`: mu-sampled start, coded for k steps.
SymbolicTrajectory sample_trajectory(const DynamicalSystem& sys, const Partition& a,
                                     std::uint64_t k, std::uint64_t seed, std::uint64_t index);

/// One line per trajectory after a '#' header.
void write_trajectories(std::ostream& os, const std::vector<SymbolicTrajectory>& trajectories);

struct EstimatorParams {
  std::uint64_t k = 10;
  std::uint64_t n_samples = 100;
  std::uint64_t traj_len = 1000;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

struct BlockEntropyEstimate {
  double rate = 0;
  double standard_error = 0;
  /// H_1 .. H_k, block entropies in bits.
  std::vector<double> block_entropies;
  /// h_j = H_j - H_{j-1}, with H_0 = 0.
  std::vector<double> conditional;
  bool undersampled = false;
  std::uint64_t symbols = 0;
};

/// Plug-in block entropies of overlapping blocks of length 1..k, counted over
/// every word. Words are grouped into `groups` contiguous batches for the
/// batch-means standard error of H_k - H_{k-1}.
BlockEntropyEstimate block_entropy_of_words(const std::vector<Word>& words, unsigned symbols,
                                            std::uint64_t k, unsigned groups = 10);

BlockEntropyEstimate block_entropy_rate(const DynamicalSystem& sys, const Partition& a,
                                        const EstimatorParams& params);

struct KsEstimate {
  double rate = 0;
  double standard_error = 0;
  std::size_t maximizer = 0;
  std::vector<BlockEntropyEstimate> per_partition;
  /// Always true: a max over a finite family bounds the supremum from below.
  bool lower_bound = true;
};

KsEstimate ks_entropy(const DynamicalSystem& sys, const std::vector<Partition>& family,
                      const EstimatorParams& params);

bool is_chaotic(const DynamicalSystem& sys, const std::vector<Partition>& family,
                const EstimatorParams& params, double threshold = 0.1);

double measure_preservation_defect(const DynamicalSystem& sys, const Partition& a,
                                   std::uint64_t n_samples, std::uint64_t seed);

struct Interval {
  mpq_class lo;
  mpq_class hi;
};

/// |(1/n) sum_{k=1..n} mu(A and T^k x in B) - mu(A) mu(B)| from forward orbits.
double ergodicity_defect(const DynamicalSystem& sys, const Interval& a, const Interval& b,
                         std::uint64_t n, std::uint64_t n_samples, std::uint64_t seed);

}  // namespace depthlab::dynsys
