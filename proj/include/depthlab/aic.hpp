#pragma once

// Bounded algorithmic information: exhaustive enumeration of the reference
// machine's programs, canonical programs, logical depth, and the prefix-code
// view of canonical programs used by the coding theorem.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "depthlab/bitstrings.hpp"
#include "depthlab/machine.hpp"

namespace depthlab::aic {

using bitstrings::Word;

struct Bounds {
  std::uint32_t L = 16;  // max program length in bits
  std::uint64_t T = 256;  // step budget per run
  bool operator==(const Bounds&) const = default;
};

/// A program together with its halting time.
struct Producer {
  Word program;
  std::uint64_t steps = 0;
  bool operator==(const Producer&) const = default;
};

struct Entry {
  std::optional<Producer> prefix;  // shortlex-least prefix program
  std::optional<Producer> plain;   // shortlex-least plain program
  /// Every halting prefix program producing the output, in shortlex order.
  std::vector<Producer> witnesses;
  bool operator==(const Entry&) const = default;
};

class ComplexityTable {
 public:
  using Map = std::map<Word, Entry, bitstrings::ShortlexLess>;

  ComplexityTable() = default;
  ComplexityTable(Bounds bounds, std::string machine_version, Map entries)
      : bounds_(bounds), machine_(std::move(machine_version)), entries_(std::move(entries)) {}

  const Bounds& bounds() const { return bounds_; }
  const std::string& machine_version() const { return machine_; }
  const Map& entries() const { return entries_; }
  const Entry* find(const Word& x) const;

  std::optional<std::uint64_t> I_bound(const Word& x) const;
  std::optional<std::uint64_t> K_bound(const Word& x) const;

  bool operator==(const ComplexityTable&) const = default;

 private:
  Bounds bounds_;
  std::string machine_;
  Map entries_;
};

struct EnumerateOptions {
  unsigned workers = 1;  // 0 means hardware concurrency
  /// Maximum admissible 2^(L+1) * T; 0 means default_work_ceiling().
  double work_ceiling = 0;
};

/// 2^(L+1) * T.
double enumeration_cost(const Bounds& bounds);

/// 2^31, or the value of DEPTHLAB_WORK_CEILING when set.
double default_work_ceiling();

/// Throws WorkCeilingExceeded when the bounds are too large, PreconditionError
/// for L or T of zero or L above 62.
ComplexityTable enumerate(const Bounds& bounds, const EnumerateOptions& options = {});

/// Reference enumeration: runs every string of length <= L in both modes,
/// without pruning or parallelism. Slow; used as a test oracle.
ComplexityTable enumerate_brute_force(const Bounds& bounds);

std::optional<Word> canonical_program(const Word& x, const ComplexityTable& table);

/// I_bound(x) <= |x| - n. Throws ComplexityUnknown when x has no prefix producer.
bool is_n_compressible(const Word& x, std::uint64_t n, const ComplexityTable& table);

class DepthValue {
 public:
  static DepthValue undefined(std::uint64_t excluded) { return DepthValue({}, {}, excluded); }
  static DepthValue of(std::uint64_t steps, Word witness, std::uint64_t excluded) {
    return DepthValue(steps, std::move(witness), excluded);
  }

  bool is_defined() const { return steps_.has_value(); }
  /// Throws UndefinedDepth.
  std::uint64_t steps() const;
  /// The shortlex-least s-incompressible producer attaining the minimum.
  const std::optional<Word>& witness() const { return witness_; }
  /// Producers dropped because their own complexity is unknown within bounds.
  std::uint64_t excluded() const { return excluded_; }

  bool operator==(const DepthValue&) const = default;

 private:
  DepthValue(std::optional<std::uint64_t> steps, std::optional<Word> witness,
             std::uint64_t excluded)
      : steps_(steps), witness_(std::move(witness)), excluded_(excluded) {}
  std::optional<std::uint64_t> steps_;
  std::optional<Word> witness_;
  std::uint64_t excluded_;
};

/// Minimum halting time over s-incompressible producers of x within bounds.
/// A producer y that is not itself an output in the table has
/// I_bound(y) > L >= |y|, hence is s-incompressible for every s.
/// Throws ComplexityUnknown when x has no prefix producer.
DepthValue depth(const Word& x, std::uint64_t s, const ComplexityTable& table);

enum class DepthClass { Deep, Shallow };
std::string to_string(DepthClass c);

/// Deep iff depth(x, s) > t. Throws UndefinedDepth when depth is undefined.
DepthClass classify_depth(const Word& x, std::uint64_t s, std::uint64_t t,
                          const ComplexityTable& table);

/// Finite distribution with exact rational probabilities.
class Distribution {
 public:
  /// Throws PreconditionError unless probabilities are positive, sum to 1 and
  /// the support has no repeats.
  Distribution(std::vector<Word> support, std::vector<mpq_class> probabilities);

  static Distribution uniform(std::size_t length);
  /// Length n with weight 2^-(n+1), uniform within a length, renormalized
  /// over lengths 0..max_length.
  static Distribution geometric(std::size_t max_length);
  static Distribution point_mass(const Word& x);

  const std::vector<Word>& support() const { return support_; }
  const std::vector<mpq_class>& probabilities() const { return probabilities_; }

 private:
  std::vector<Word> support_;
  std::vector<mpq_class> probabilities_;
};

double shannon_entropy(const Distribution& p);

/// Sum of P(x) * I_bound(x). Throws ComplexityUnknown listing absent words.
mpq_class avg_codeword_length(const Distribution& p, const ComplexityTable& table);

/// avg_codeword_length - shannon_entropy.
double coding_gap(const Distribution& p, const ComplexityTable& table);

/// Sum over table outputs of 2^-I_bound.
mpq_class kraft_sum(const ComplexityTable& table);

// Persistence. The text format is line oriented with hex-packed programs.
void save_table(const ComplexityTable& table, const std::string& path);
ComplexityTable load_table(const std::string& path);
std::string table_to_text(const ComplexityTable& table);
ComplexityTable table_from_text(const std::string& text);
/// JSON export for inspection.
std::string table_to_json(const ComplexityTable& table);

}  // namespace depthlab::aic
