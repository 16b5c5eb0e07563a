#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "depthlab/dynsys.hpp"
#include "depthlab/error.hpp"
#include "parallel.hpp"

namespace depthlab::dynsys {

namespace {

using Counts = std::unordered_map<std::uint64_t, std::uint64_t>;

constexpr std::uint64_t kUndersampleCount = 5;

// Plug-in entropy in bits. Summation runs over sorted keys so the result does
// not depend on hash table layout.
double plugin_entropy(const Counts& counts) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> items(counts.begin(), counts.end());
  std::sort(items.begin(), items.end());
  std::uint64_t n = 0;
  for (const auto& [key, c] : items) n += c;
  if (n == 0) return 0;
  long double acc = 0;
  for (const auto& [key, c] : items) acc += c * std::log2(static_cast<long double>(c));
  return static_cast<double>(std::log2(static_cast<long double>(n)) - acc / n);
}

}  // namespace

BlockEntropyEstimate block_entropy_of_words(const std::vector<Word>& words, unsigned symbols,
                                            std::uint64_t k, unsigned groups) {
  if (k < 1) throw PreconditionError("block length must be at least 1");
  if (symbols < 1) throw PreconditionError("need at least one symbol");
  if (groups < 1) groups = 1;
  if (k * std::log2(std::max(2u, symbols)) >= 63) {
    throw PreconditionError("block length too large for the alphabet");
  }
  std::uint64_t total = 0;
  for (const auto& w : words) total += w.size();

  // counts[g][j-1]: j-blocks whose start lies in batch g.
  std::vector<std::vector<Counts>> counts(groups, std::vector<Counts>(k));
  std::uint64_t offset = 0;
  for (const auto& w : words) {
    for (std::size_t s = 0; s < w.size(); ++s) {
      const std::uint64_t global = offset + s;
      const auto g = static_cast<std::size_t>((global * groups) / std::max<std::uint64_t>(total, 1));
      std::uint64_t key = 0;
      for (std::uint64_t j = 1; j <= k && s + j <= w.size(); ++j) {
        key = key * symbols + w[s + j - 1];
        ++counts[g][j - 1][key];
      }
    }
    offset += w.size();
  }

  BlockEntropyEstimate est;
  est.symbols = total;
  std::vector<Counts> merged(k);
  for (const auto& group : counts) {
    for (std::uint64_t j = 0; j < k; ++j) {
      for (const auto& [key, c] : group[j]) merged[j][key] += c;
    }
  }
  double prev = 0;
  for (std::uint64_t j = 0; j < k; ++j) {
    const double h = plugin_entropy(merged[j]);
    est.block_entropies.push_back(h);
    est.conditional.push_back(h - prev);
    prev = h;
  }
  est.rate = std::clamp(est.conditional.back(), 0.0, std::log2(static_cast<double>(symbols)));
  for (const auto& [key, c] : merged[k - 1]) {
    if (c < kUndersampleCount) est.undersampled = true;
  }
  if (merged[k - 1].empty()) est.undersampled = true;

  if (groups >= 2) {
    std::vector<double> rates;
    for (const auto& group : counts) {
      const double hk = plugin_entropy(group[k - 1]);
      const double hk1 = k >= 2 ? plugin_entropy(group[k - 2]) : 0.0;
      rates.push_back(hk - hk1);
    }
    double mean = 0;
    for (double r : rates) mean += r;
    mean /= rates.size();
    double var = 0;
    for (double r : rates) var += (r - mean) * (r - mean);
    var /= rates.size() - 1;
    est.standard_error = std::sqrt(var / rates.size());
  }
  return est;
}

BlockEntropyEstimate block_entropy_rate(const DynamicalSystem& sys, const Partition& a,
                                        const EstimatorParams& params) {
  if (params.k < 1 || params.k > params.traj_len) {
    throw PreconditionError("block entropy needs 1 <= k <= traj_len");
  }
  if (params.n_samples < 100) throw PreconditionError("block entropy needs n_samples >= 100");
  std::vector<Word> words(params.n_samples);
  detail::parallel_for(words.size(), detail::resolve_workers(params.workers),
                       [&](unsigned, std::size_t i) {
                         words[i] =
                             sample_trajectory(sys, a, params.traj_len, params.seed, i).symbols;
                       });
  return block_entropy_of_words(words, static_cast<unsigned>(a.atoms()), params.k);
}

KsEstimate ks_entropy(const DynamicalSystem& sys, const std::vector<Partition>& family,
                      const EstimatorParams& params) {
  if (family.empty()) throw PreconditionError("partition family is empty");
  KsEstimate ks;
  for (std::size_t i = 0; i < family.size(); ++i) {
    ks.per_partition.push_back(block_entropy_rate(sys, family[i], params));
    if (i == 0 || ks.per_partition[i].rate > ks.rate) {
      ks.rate = ks.per_partition[i].rate;
      ks.standard_error = ks.per_partition[i].standard_error;
      ks.maximizer = i;
    }
  }
  return ks;
}

bool is_chaotic(const DynamicalSystem& sys, const std::vector<Partition>& family,
                const EstimatorParams& params, double threshold) {
  const KsEstimate ks = ks_entropy(sys, family, params);
  return ks.rate - 2 * ks.standard_error > threshold;
}

}  // namespace depthlab::dynsys
