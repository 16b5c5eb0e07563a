#include "depthlab/dynsys.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "depthlab/error.hpp"

namespace depthlab::dynsys {

namespace {

mpz_class pow2(std::uint64_t e) {
  mpz_class r = 1;
  r <<= e;
  return r;
}

// ceil(c * 2^P): x >= c iff X >= threshold.
mpz_class threshold(const mpq_class& c, std::uint64_t precision) {
  mpz_class num = c.get_num() << precision;
  mpz_class t;
  mpz_cdiv_q(t.get_mpz_t(), num.get_mpz_t(), c.get_den_mpz_t());
  return t;
}

// Inner cut thresholds of a partition at one precision.
class Coder {
 public:
  Coder(const Partition& a, std::uint64_t precision) {
    for (std::size_t i = 1; i + 1 < a.cuts().size(); ++i) {
      thresholds_.push_back(threshold(a.cuts()[i], precision));
    }
  }
  unsigned operator()(const mpz_class& x) const {
    auto it = std::upper_bound(thresholds_.begin(), thresholds_.end(), x,
                               [](const mpz_class& v, const mpz_class& t) { return v < t; });
    return static_cast<unsigned>(it - thresholds_.begin());
  }

 private:
  std::vector<mpz_class> thresholds_;
};

struct IntervalTest {
  mpz_class lo;
  mpz_class hi;
  bool closed;
  IntervalTest(const Interval& iv, std::uint64_t precision)
      : lo(threshold(iv.lo, precision)), hi(threshold(iv.hi, precision)), closed(iv.hi == 1) {}
  bool operator()(const mpz_class& x) const { return x >= lo && (x < hi || (closed && x == hi)); }
};

void check_interval(const Interval& iv) {
  if (!(iv.lo >= 0 && iv.lo < iv.hi && iv.hi <= 1)) {
    throw PreconditionError("interval must satisfy 0 <= lo < hi <= 1");
  }
}

std::vector<mpq_class> sorted_unique(std::vector<mpq_class> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

Point Point::from_rational(const mpq_class& q, std::uint64_t precision) {
  if (q < 0 || q > 1) throw PreconditionError("point must lie in [0, 1]");
  Point p;
  p.P = precision;
  mpz_class num = q.get_num() << precision;
  mpz_fdiv_q(p.X.get_mpz_t(), num.get_mpz_t(), q.get_den_mpz_t());
  return p;
}

mpq_class Point::value() const {
  mpq_class q(X, pow2(P));
  q.canonicalize();
  return q;
}

double Point::approx() const { return value().get_d(); }

Partition::Partition(std::vector<mpq_class> cuts) : cuts_(std::move(cuts)) {
  for (auto& c : cuts_) c.canonicalize();
  if (cuts_.size() < 2 || cuts_.front() != 0 || cuts_.back() != 1) {
    throw PreconditionError("partition cuts must start at 0 and end at 1");
  }
  for (std::size_t i = 1; i < cuts_.size(); ++i) {
    if (!(cuts_[i - 1] < cuts_[i])) throw PreconditionError("partition cuts must increase strictly");
  }
}

Partition Partition::trivial() { return Partition({mpq_class(0), mpq_class(1)}); }

Partition Partition::halves() { return uniform(2); }

Partition Partition::uniform(unsigned n) {
  if (n < 1) throw PreconditionError("partition needs at least one atom");
  std::vector<mpq_class> cuts;
  for (unsigned i = 0; i <= n; ++i) cuts.emplace_back(i, n);
  return Partition(std::move(cuts));
}

std::size_t Partition::index_of(const mpq_class& q) const {
  auto it = std::upper_bound(cuts_.begin() + 1, cuts_.end() - 1, q);
  return static_cast<std::size_t>(it - (cuts_.begin() + 1));
}

std::string Partition::str() const {
  std::string s = "{";
  for (std::size_t i = 0; i < cuts_.size(); ++i) s += (i ? "," : "") + cuts_[i].get_str();
  return s + "}";
}

Point iterate(const DynamicalSystem& sys, const Point& x0, std::uint64_t k) {
  const std::uint64_t need = sys.required_precision(k);
  if (x0.P < need) throw PrecisionError(need, x0.P);
  Point x = x0;
  const Stepper step = sys.stepper(x.P);
  for (std::uint64_t i = 0; i < k; ++i) step(x.X);
  return x;
}

Point make_point(const DynamicalSystem& sys, const mpq_class& q, std::uint64_t k) {
  return Point::from_rational(q, sys.required_precision(k));
}

Partition refine(const Partition& a, const Partition& b) {
  std::vector<mpq_class> cuts = a.cuts();
  cuts.insert(cuts.end(), b.cuts().begin(), b.cuts().end());
  return Partition(sorted_unique(std::move(cuts)));
}

bool is_coarsening(const Partition& a, const Partition& b) {
  return std::includes(b.cuts().begin(), b.cuts().end(), a.cuts().begin(), a.cuts().end());
}

Partition dynamical_refinement(const DynamicalSystem& sys, const Partition& a, std::uint64_t m) {
  if (m == 0) return Partition::trivial();
  std::vector<mpq_class> level = a.cuts();
  std::vector<mpq_class> all = level;
  for (std::uint64_t j = 1; j < m; ++j) {
    std::vector<mpq_class> next{mpq_class(0), mpq_class(1)};
    for (const auto& c : level) {
      if (c == 1) continue;
      auto pre = sys.preimages(c);
      if (!pre) {
        throw UnsupportedSystem("no exact preimages for system '" + sys.name() + "'");
      }
      next.insert(next.end(), pre->begin(), pre->end());
    }
    level = sorted_unique(std::move(next));
    all.insert(all.end(), level.begin(), level.end());
  }
  return Partition(sorted_unique(std::move(all)));
}

std::vector<Word> refinement_codes(const DynamicalSystem& sys, const Partition& a,
                                   const Partition& refined, std::uint64_t m) {
  std::vector<Word> codes;
  codes.reserve(refined.atoms());
  for (std::size_t i = 0; i < refined.atoms(); ++i) {
    Word w(coding_alphabet(a));
    mpq_class x = refined.lo(i);
    for (std::uint64_t j = 0; j < m; ++j) {
      w.push_back(static_cast<unsigned>(a.index_of(x)));
      if (j + 1 == m) break;
      auto next = sys.map_exact(x);
      if (!next) throw UnsupportedSystem("no exact map for system '" + sys.name() + "'");
      x = *next;
    }
    codes.push_back(std::move(w));
  }
  return codes;
}

double partition_entropy(const DynamicalSystem& sys, const Partition& a) {
  double h = 0;
  for (std::size_t i = 0; i < a.atoms(); ++i) {
    const double p = sys.atom_measure(a.lo(i), a.hi(i));
    if (p > 0) h -= p * std::log2(p);
  }
  return h;
}

bitstrings::Alphabet coding_alphabet(const Partition& a) {
  return bitstrings::Alphabet(static_cast<unsigned>(std::max<std::size_t>(2, a.atoms())));
}

unsigned translate(const Partition& a, const Point& x) {
  if (x.X < 0 || x.X > pow2(x.P)) throw PreconditionError("point outside [0, 1]");
  return Coder(a, x.P)(x.X);
}

SymbolicTrajectory translate_k(const DynamicalSystem& sys, const Partition& a, const Point& x0,
                               std::uint64_t k) {
  const std::uint64_t need = sys.required_precision(k);
  if (x0.P < need) throw PrecisionError(need, x0.P);
  SymbolicTrajectory t{Word(coding_alphabet(a)), sys.name(), a, x0.P, std::nullopt};
  t.symbols.reserve(k);
  const Coder code(a, x0.P);
  const Stepper step = sys.stepper(x0.P);
  mpz_class x = x0.X;
  for (std::uint64_t j = 0; j < k; ++j) {
    if (j) step(x);
    t.symbols.push_back(code(x));
  }
  return t;
}

SymbolicTrajectory sample_trajectory(const DynamicalSystem& sys, const Partition& a,
                                     std::uint64_t k, std::uint64_t seed, std::uint64_t index) {
  rng::Engine eng = rng::engine(seed, rng::kOrbitStream, index);
  const Point x0 = sys.sample(eng, sys.required_precision(k));
  SymbolicTrajectory t = translate_k(sys, a, x0, k);
  t.seed = seed;
  return t;
}

void write_trajectories(std::ostream& os, const std::vector<SymbolicTrajectory>& trajectories) {
  if (trajectories.empty()) return;
  const auto& first = trajectories.front();
  os << "# system=" << first.system << " partition=" << first.partition.str()
     << " seed=" << (first.seed ? std::to_string(*first.seed) : "none")
     << " precision=" << first.precision << '\n';
  for (const auto& t : trajectories) os << t.symbols.str() << '\n';
}

double measure_preservation_defect(const DynamicalSystem& sys, const Partition& a,
                                   std::uint64_t n_samples, std::uint64_t seed) {
  if (n_samples < 1000) throw PreconditionError("measure preservation needs >= 1000 samples");
  const std::uint64_t precision = sys.required_precision(1);
  const Coder code(a, precision);
  const Stepper step = sys.stepper(precision);
  std::vector<std::int64_t> before(a.atoms(), 0), after(a.atoms(), 0);
  for (std::uint64_t i = 0; i < n_samples; ++i) {
    rng::Engine eng = rng::engine(seed, rng::kSampleStream, i);
    Point x = sys.sample(eng, precision);
    ++before[code(x.X)];
    step(x.X);
    ++after[code(x.X)];
  }
  double worst = 0;
  for (std::size_t i = 0; i < a.atoms(); ++i) {
    worst = std::max(worst, std::abs(static_cast<double>(after[i] - before[i])) /
                                static_cast<double>(n_samples));
  }
  return worst;
}

double ergodicity_defect(const DynamicalSystem& sys, const Interval& a, const Interval& b,
                         std::uint64_t n, std::uint64_t n_samples, std::uint64_t seed) {
  if (n < 1) throw PreconditionError("ergodicity defect needs n >= 1");
  if (n_samples < 1) throw PreconditionError("ergodicity defect needs samples");
  check_interval(a);
  check_interval(b);
  const std::uint64_t precision = sys.required_precision(n);
  const IntervalTest in_a(a, precision), in_b(b, precision);
  const Stepper step = sys.stepper(precision);
  std::uint64_t count_a = 0, count_b = 0, joint = 0;
  for (std::uint64_t i = 0; i < n_samples; ++i) {
    rng::Engine eng = rng::engine(seed, rng::kSampleStream, i);
    Point x = sys.sample(eng, precision);
    const bool hit_a = in_a(x.X);
    count_a += hit_a;
    count_b += in_b(x.X);
    for (std::uint64_t k = 1; k <= n; ++k) {
      step(x.X);
      if (hit_a && in_b(x.X)) ++joint;
    }
  }
  const double N = static_cast<double>(n_samples);
  const double cesaro = static_cast<double>(joint) / (static_cast<double>(n) * N);
  return std::abs(cesaro - (count_a / N) * (count_b / N));
}

}  // namespace depthlab::dynsys
