#pragma once

// Qubit strings as rays of exact Gaussian-integer amplitude vectors, their
// serialization as machine outputs, and their canonical programs and depth.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "depthlab/aic.hpp"
#include "depthlab/bitstrings.hpp"

namespace depthlab::qdepth {

using bitstrings::Word;

struct Amplitude {
  mpz_class re;
  mpz_class im;
  bool operator==(const Amplitude&) const = default;
};

class QubitString {
 public:
  /// Throws PreconditionError unless n >= 1, there are 2^n amplitudes and
  /// at least one is nonzero.
  QubitString(unsigned n, std::vector<Amplitude> amplitudes);

  /// |index> on n qubits.
  static QubitString basis(unsigned n, std::uint64_t index);

  unsigned qubits() const { return n_; }
  const std::vector<Amplitude>& amplitudes() const { return amps_; }
  /// Every amplitude multiplied by a positive integer.
  QubitString scaled(const mpz_class& factor) const;

  /// Representation equality (no scaling quotient).
  bool operator==(const QubitString&) const = default;

 private:
  unsigned n_;
  std::vector<Amplitude> amps_;
};

/// gamma(n), then for each amplitude the real and imaginary parts, each as
/// gamma(|a| + 1) followed by a sign bit (1 = negative) when a != 0.
Word encode(const QubitString& psi);

/// nullopt (PARSE_FAIL) for malformed, truncated, trailing or all-zero input.
std::optional<QubitString> parse_qoutput(const Word& bits);

/// Same n and b = lambda a for a positive rational lambda.
bool states_equivalent(const QubitString& a, const QubitString& b);

/// Shortlex-least program within bounds whose output parses to a state
/// equivalent to psi, with its halting time.
std::optional<aic::Producer> qcanonical_program(const QubitString& psi,
                                                const aic::ComplexityTable& table);

/// Minimum halting time over s-incompressible producers of any output
/// equivalent to psi. Undefined when there is none.
aic::DepthValue qdepth(const QubitString& psi, std::uint64_t s, const aic::ComplexityTable& table);

/// Deep iff qdepth > t. Throws UndefinedDepth when qdepth is undefined.
aic::DepthClass classify_qdepth(const QubitString& psi, std::uint64_t s, std::uint64_t t,
                                const aic::ComplexityTable& table);

/// {"n": 1, "amplitudes": [[re, im], ...]}; parts are integers or decimal strings.
QubitString state_from_json(const std::string& text);
std::string state_to_json(const QubitString& psi);

}  // namespace depthlab::qdepth
