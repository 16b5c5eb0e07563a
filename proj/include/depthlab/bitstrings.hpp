#pragma once

// Words over finite digit alphabets, shortlex ordering, and exact n-adic
// value/representation maps.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace depthlab::bitstrings {

/// The alphabet {0, ..., n-1}, n >= 2.
class Alphabet {
 public:
  explicit Alphabet(unsigned n = 2);
  unsigned size() const { return n_; }
  static Alphabet binary() { return Alphabet(2); }
  bool operator==(const Alphabet&) const = default;

 private:
  unsigned n_;
};

/// A finite word. Digits are stored as raw byte values 0..n-1.
class Word {
 public:
  Word() = default;
  explicit Word(Alphabet alphabet) : alphabet_(alphabet) {}
  Word(Alphabet alphabet, std::string raw_digits);

  /// Parses a '0'/'1' text into a binary word.
  static Word binary(std::string_view text);
  static Word from_digits(Alphabet alphabet, const std::vector<unsigned>& digits);

  Alphabet alphabet() const { return alphabet_; }
  std::size_t size() const { return digits_.size(); }
  bool empty() const { return digits_.empty(); }
  std::uint8_t operator[](std::size_t i) const {
    return static_cast<std::uint8_t>(digits_[i]);
  }

  void push_back(unsigned digit);
  void append(const Word& other);
  void pop_back() { digits_.pop_back(); }
  void clear() { digits_.clear(); }
  void reserve(std::size_t n) { digits_.reserve(n); }

  /// Raw digit storage, one byte per digit.
  const std::string& raw() const { return digits_; }

  /// Display form: "0110" for alphabets up to 10 letters, "3.11.0" above.
  std::string str() const;

  bool operator==(const Word& other) const {
    return alphabet_ == other.alphabet_ && digits_ == other.digits_;
  }

 private:
  Alphabet alphabet_{2};
  std::string digits_;
};

/// Length first, then lexicographic.
struct ShortlexLess {
  bool operator()(const Word& a, const Word& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.raw() < b.raw();
  }
};

/// The k-th binary word in shortlex order; lex_string(0) is the empty word.
Word lex_string(std::uint64_t k);

/// Inverse of lex_string. Binary words shorter than 64 digits only.
std::uint64_t lex_rank(const Word& w);

/// First n digits of w; throws PreconditionError when n > |w|.
Word prefix(const Word& w, std::size_t n);

/// A lazily generated, conceptually infinite digit sequence.
class DigitSource {
 public:
  DigitSource(Alphabet alphabet, std::function<unsigned()> next)
      : alphabet_(alphabet), next_(std::move(next)) {}
  Alphabet alphabet() const { return alphabet_; }
  unsigned next() { return next_(); }

 private:
  Alphabet alphabet_;
  std::function<unsigned()> next_;
};

Word prefix(DigitSource& source, std::size_t n);

struct RationalInterval {
  mpq_class lo;
  mpq_class hi;

  bool contains(const mpq_class& q) const { return lo <= q && q <= hi; }
  mpq_class midpoint() const;
  mpq_class radius() const;
};

/// Closed interval [v, v + n^-|w|] of values of all sequences extending w.
RationalInterval nadic_value(const Word& w);

/// First m digits of the nonterminating base-n expansion of q in [0, 1].
Word nadic_repr(const mpq_class& q, unsigned n, std::size_t m);

/// Longest base-n2 word determined by every point whose nonterminating
/// expansion begins with w.
Word change_basis(const Word& w, unsigned n2);

/// Number of base-n2 digits that carry the information of m base-n1 digits,
/// floor(m * log(n1) / log(n2)), computed exactly.
std::size_t nominal_digits(std::size_t m, unsigned n1, unsigned n2);

/// Exact rational m / 2^e in canonical form (odd numerator unless zero).
class DyadicRational {
 public:
  DyadicRational() = default;
  DyadicRational(mpz_class numerator, std::uint64_t exponent);

  const mpz_class& numerator() const { return numerator_; }
  std::uint64_t exponent() const { return exponent_; }
  mpq_class value() const;
  bool operator==(const DyadicRational&) const = default;

  /// Fails with PreconditionError when q's denominator is not a power of two.
  static DyadicRational from_rational(const mpq_class& q);

 private:
  mpz_class numerator_{0};
  std::uint64_t exponent_ = 0;
};

/// Parses "p/q", "p" or a decimal integer into an exact rational.
mpq_class parse_rational(std::string_view text);
std::string rational_string(const mpq_class& q);

/// Hex of the bits packed MSB first; the final nibble is zero padded.
std::string to_hex(const Word& bits);
Word from_hex(std::string_view hex, std::size_t bit_length);

}  // namespace depthlab::bitstrings

template <>
struct std::hash<depthlab::bitstrings::Word> {
  std::size_t operator()(const depthlab::bitstrings::Word& w) const noexcept {
    return std::hash<std::string>{}(w.raw()) ^ (w.alphabet().size() * 0x9E3779B97F4A7C15ull);
  }
};
