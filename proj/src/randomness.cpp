#include <cmath>

#include <boost/math/special_functions/gamma.hpp>

#include "depthlab/brudno.hpp"
#include "depthlab/constants.hpp"
#include "depthlab/error.hpp"

namespace depthlab::brudno {

namespace {

void require_binary(const Word& bits) {
  if (bits.alphabet().size() != 2) throw PreconditionError("randomness tests need a binary word");
  if (bits.size() < 2) throw PreconditionError("randomness tests need at least 2 bits");
}

TestResult verdict(std::string name, double p, double alpha) {
  return {std::move(name), p, p >= alpha};
}

}  // namespace

TestResult monobit_test(const Word& bits, double alpha) {
  require_binary(bits);
  const double n = static_cast<double>(bits.size());
  double sum = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) sum += bits[i] ? 1 : -1;
  return verdict("monobit", std::erfc(std::abs(sum) / std::sqrt(2 * n)), alpha);
}

TestResult block_frequency_test(const Word& bits, unsigned block, double alpha) {
  require_binary(bits);
  if (block < 1) throw PreconditionError("block frequency needs a positive block size");
  const std::size_t blocks = bits.size() / block;
  if (blocks == 0) return verdict("block_frequency", 0.0, alpha);
  double chi2 = 0;
  for (std::size_t b = 0; b < blocks; ++b) {
    std::size_t ones = 0;
    for (std::size_t i = 0; i < block; ++i) ones += bits[b * block + i];
    const double pi = static_cast<double>(ones) / block - 0.5;
    chi2 += pi * pi;
  }
  chi2 *= 4.0 * block;
  const double p = boost::math::gamma_q(static_cast<double>(blocks) / 2, chi2 / 2);
  return verdict("block_frequency", p, alpha);
}

TestResult runs_test(const Word& bits, double alpha) {
  require_binary(bits);
  const double n = static_cast<double>(bits.size());
  std::size_t ones = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) ones += bits[i];
  const double pi = ones / n;
  // Frequency prerequisite of the runs test.
  if (std::abs(pi - 0.5) >= 2 / std::sqrt(n)) return verdict("runs", 0.0, alpha);
  double runs = 1;
  for (std::size_t i = 1; i < bits.size(); ++i) runs += bits[i] != bits[i - 1];
  const double q = pi * (1 - pi);
  const double p = std::erfc(std::abs(runs - 2 * n * q) / (2 * std::sqrt(2 * n) * q));
  return verdict("runs", p, alpha);
}

std::vector<TestResult> randomness_battery(const Word& bits, double alpha) {
  return {monobit_test(bits, alpha), block_frequency_test(bits, constants::kBlockFrequencyM, alpha),
          runs_test(bits, alpha)};
}

}  // namespace depthlab::brudno
