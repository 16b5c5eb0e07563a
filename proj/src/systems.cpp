#include <cmath>

#include <mpfr.h>

#include "depthlab/dynsys.hpp"
#include "depthlab/error.hpp"

namespace depthlab::dynsys {

namespace {

constexpr std::uint64_t kGuardBits = 64;

mpz_class pow2(std::uint64_t e) {
  mpz_class r = 1;
  r <<= e;
  return r;
}

mpq_class frac(const mpq_class& q) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  mpq_class r = q - f;
  r.canonicalize();
  return r;
}

class Doubling final : public DynamicalSystem {
 public:
  std::string name() const override { return "doubling"; }
  std::uint64_t required_precision(std::uint64_t k) const override { return k + kGuardBits; }
  Stepper stepper(std::uint64_t precision) const override {
    return [one = pow2(precision)](mpz_class& x) {
      x <<= 1;
      if (x >= one) x -= one;
    };
  }
  std::optional<mpq_class> map_exact(const mpq_class& x) const override { return frac(2 * x); }
  std::optional<std::vector<mpq_class>> preimages(const mpq_class& c) const override {
    mpq_class a = c / 2, b = (c + 1) / 2;
    a.canonicalize();
    b.canonicalize();
    return std::vector<mpq_class>{a, b};
  }
};

class Rotation final : public DynamicalSystem {
 public:
  Rotation(long p, long q, unsigned long d, long r) : p_(p), q_(q), d_(d), r_(r) {
    if (r == 0) throw PreconditionError("rotation denominator must be nonzero");
    const mpz_class dd(d);
    if (q == 0 || mpz_perfect_square_p(dd.get_mpz_t())) {
      mpz_class root;
      mpz_sqrt(root.get_mpz_t(), dd.get_mpz_t());
      exact_ = mpq_class(mpz_class(p) + mpz_class(q) * root, mpz_class(r));
      exact_->canonicalize();
    }
    const double a = (static_cast<double>(p) + static_cast<double>(q) * std::sqrt(double(d))) / r;
    if (!(a > 0 && a < 1)) throw PreconditionError("rotation angle must lie in (0, 1)");
  }

  std::string name() const override { return "rotation"; }
  std::uint64_t required_precision(std::uint64_t k) const override { return k + kGuardBits; }
  Stepper stepper(std::uint64_t precision) const override {
    return [one = pow2(precision), alpha = scaled_alpha(precision)](mpz_class& x) {
      x += alpha;
      if (x >= one) x -= one;
    };
  }
  std::optional<mpq_class> map_exact(const mpq_class& x) const override {
    if (!exact_) return std::nullopt;
    return frac(x + *exact_);
  }
  std::optional<std::vector<mpq_class>> preimages(const mpq_class& c) const override {
    if (!exact_) return std::nullopt;
    return std::vector<mpq_class>{frac(c - *exact_)};
  }

 private:
  // floor(alpha * 2^P)
  mpz_class scaled_alpha(std::uint64_t precision) const {
    mpz_class radicand = mpz_class(q_) * q_ * d_;
    radicand <<= 2 * precision;
    mpz_class t;
    mpz_sqrt(t.get_mpz_t(), radicand.get_mpz_t());
    mpz_class s = t;
    if (q_ < 0) {
      s = -t;
      if (t * t != radicand) s -= 1;
    }
    mpz_class num = (mpz_class(p_) << precision) + s;
    mpz_class out;
    mpz_class den(r_);
    if (den < 0) {
      num = -num;
      den = -den;
    }
    mpz_fdiv_q(out.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return out;
  }

  long p_, q_;
  unsigned long d_;
  long r_;
  std::optional<mpq_class> exact_;
};

class Logistic final : public DynamicalSystem {
 public:
  std::string name() const override { return "logistic"; }
  std::uint64_t required_precision(std::uint64_t k) const override {
    return 2 * k + kGuardBits;
  }
  Stepper stepper(std::uint64_t precision) const override {
    return [one = pow2(precision), precision](mpz_class& x) {
      mpz_class y = one - x;
      x *= y;
      x >>= precision - 2;
    };
  }
  // x = sin^2(pi u / 2) with u uniform has the arcsine law.
  Point sample(rng::Engine& eng, std::uint64_t precision) const override {
    const mpfr_prec_t prec = static_cast<mpfr_prec_t>(precision + kGuardBits);
    const mpz_class u = rng::uniform_bits(eng, precision + kGuardBits);
    mpfr_t t, pi;
    mpfr_inits2(prec, t, pi, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_z(t, u.get_mpz_t(), MPFR_RNDN);
    mpfr_div_2ui(t, t, precision + kGuardBits + 1, MPFR_RNDN);
    mpfr_const_pi(pi, MPFR_RNDN);
    mpfr_mul(t, t, pi, MPFR_RNDN);
    mpfr_sin(t, t, MPFR_RNDN);
    mpfr_sqr(t, t, MPFR_RNDN);
    mpfr_mul_2ui(t, t, precision, MPFR_RNDN);
    Point p;
    p.P = precision;
    mpfr_get_z(p.X.get_mpz_t(), t, MPFR_RNDD);
    mpfr_clears(t, pi, static_cast<mpfr_ptr>(nullptr));
    if (p.X < 0) p.X = 0;
    if (p.X > pow2(precision)) p.X = pow2(precision);
    return p;
  }
  double atom_measure(const mpq_class& lo, const mpq_class& hi) const override {
    const double pi = std::acos(-1.0);
    return 2.0 / pi * (std::asin(std::sqrt(hi.get_d())) - std::asin(std::sqrt(lo.get_d())));
  }
};

class Identity final : public DynamicalSystem {
 public:
  std::string name() const override { return "identity"; }
  std::uint64_t required_precision(std::uint64_t) const override { return kGuardBits; }
  Stepper stepper(std::uint64_t) const override {
    return [](mpz_class&) {};
  }
  std::optional<mpq_class> map_exact(const mpq_class& x) const override { return x; }
  std::optional<std::vector<mpq_class>> preimages(const mpq_class& c) const override {
    return std::vector<mpq_class>{c};
  }
};

class Half final : public DynamicalSystem {
 public:
  std::string name() const override { return "half"; }
  std::uint64_t required_precision(std::uint64_t k) const override { return k + kGuardBits; }
  Stepper stepper(std::uint64_t) const override {
    return [](mpz_class& x) { x >>= 1; };
  }
  std::optional<mpq_class> map_exact(const mpq_class& x) const override {
    mpq_class y = x / 2;
    y.canonicalize();
    return y;
  }
  std::optional<std::vector<mpq_class>> preimages(const mpq_class& c) const override {
    mpq_class y = 2 * c;
    y.canonicalize();
    if (y >= 1) return std::vector<mpq_class>{};
    return std::vector<mpq_class>{y};
  }
};

}  // namespace

Point DynamicalSystem::sample(rng::Engine& eng, std::uint64_t precision) const {
  return Point{rng::uniform_bits(eng, precision), precision};
}

double DynamicalSystem::atom_measure(const mpq_class& lo, const mpq_class& hi) const {
  return mpq_class(hi - lo).get_d();
}

std::optional<mpq_class> DynamicalSystem::map_exact(const mpq_class&) const {
  return std::nullopt;
}

std::optional<std::vector<mpq_class>> DynamicalSystem::preimages(const mpq_class&) const {
  return std::nullopt;
}

SystemPtr doubling_map() { return std::make_shared<Doubling>(); }
SystemPtr rotation(long p, long q, unsigned long d, long r) {
  return std::make_shared<Rotation>(p, q, d, r);
}
SystemPtr logistic_map() { return std::make_shared<Logistic>(); }
SystemPtr identity_map() { return std::make_shared<Identity>(); }
SystemPtr half_map() { return std::make_shared<Half>(); }

SystemPtr make_system(const std::string& name) {
  if (name == "doubling") return doubling_map();
  if (name == "rotation") return rotation();
  if (name == "logistic") return logistic_map();
  if (name == "identity") return identity_map();
  if (name == "half") return half_map();
  throw UnsupportedSystem("unknown system '" + name + "'");
}

}  // namespace depthlab::dynsys
