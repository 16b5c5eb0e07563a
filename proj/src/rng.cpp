#include "depthlab/rng.hpp"

#include <vector>

namespace depthlab::rng {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream, std::uint64_t index) {
  return mix(mix(mix(root) ^ stream) ^ index);
}

Engine engine(std::uint64_t root, std::uint64_t stream, std::uint64_t index) {
  return Engine(derive_seed(root, stream, index));
}

mpz_class uniform_bits(Engine& eng, std::uint64_t bits) {
  std::vector<std::uint64_t> words((bits + 63) / 64);
  for (auto& w : words) w = eng();
  if (const unsigned spare = static_cast<unsigned>(words.size() * 64 - bits)) words[0] >>= spare;
  mpz_class r;
  mpz_import(r.get_mpz_t(), words.size(), 1, sizeof(std::uint64_t), 0, 0, words.data());
  return r;
}

double uniform_unit(Engine& eng) { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }

}  // namespace depthlab::rng
