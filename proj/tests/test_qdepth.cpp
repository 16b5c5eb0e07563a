#include <gtest/gtest.h>

#include <random>

#include "depthlab/aic.hpp"
#include "depthlab/constants.hpp"
#include "depthlab/error.hpp"
#include "depthlab/machine.hpp"
#include "depthlab/qdepth.hpp"
#include "depthlab/rng.hpp"

using namespace depthlab;
using namespace depthlab::qdepth;
using bitstrings::Word;

namespace {

const aic::ComplexityTable& table16() {
  static const aic::ComplexityTable t = aic::enumerate(aic::Bounds{16, 256});
  return t;
}

QubitString state(unsigned n, std::vector<std::pair<long, long>> parts) {
  std::vector<Amplitude> amps;
  for (auto [re, im] : parts) amps.push_back({re, im});
  return QubitString(n, std::move(amps));
}

// First program in shortlex order, run directly, whose output denotes psi.
std::optional<Word> canonical_oracle(const QubitString& psi, std::uint32_t L, std::uint64_t T) {
  const std::uint64_t end = (std::uint64_t{2} << L) - 1;
  for (std::uint64_t k = 0; k < end; ++k) {
    const Word p = bitstrings::lex_string(k);
    const auto o = machine::run_prefix(p, T);
    if (!o.halted) continue;
    const auto s = parse_qoutput(o.output);
    if (s && states_equivalent(*s, psi)) return p;
  }
  return std::nullopt;
}

QubitString random_state(rng::Engine& eng, unsigned n, long range) {
  std::uniform_int_distribution<long> d(-range, range);
  for (;;) {
    std::vector<Amplitude> amps(std::size_t{1} << n);
    bool any = false;
    for (auto& a : amps) {
      a = {d(eng), d(eng)};
      any = any || a.re != 0 || a.im != 0;
    }
    if (any) return QubitString(n, std::move(amps));
  }
}

}  // namespace

TEST(QubitString, Validation) {
  EXPECT_THROW(state(1, {{0, 0}, {0, 0}}), PreconditionError);
  EXPECT_THROW(state(1, {{1, 0}}), PreconditionError);
  EXPECT_THROW(state(0, {{1, 0}}), PreconditionError);
  EXPECT_THROW(QubitString::basis(1, 2), PreconditionError);
  EXPECT_THROW(QubitString::basis(1, 0).scaled(0), PreconditionError);
}

TEST(Encode, BasisStates) {
  EXPECT_EQ(encode(QubitString::basis(1, 0)).str(), "10100111");
  EXPECT_EQ(encode(QubitString::basis(1, 1)).str(), "11101001");
  EXPECT_EQ(encode(QubitString::basis(2, 0)).str(), "01001001111111");
  // -1 carries a sign bit; zero parts carry none.
  EXPECT_EQ(encode(state(1, {{-1, 2}, {0, 0}})).str(), "1" "0101" "0110" "1" "1");
}

TEST(Parse, Examples) {
  const auto z = parse_qoutput(Word::binary("10100111"));
  ASSERT_TRUE(z);
  EXPECT_EQ(*z, QubitString::basis(1, 0));
  EXPECT_FALSE(parse_qoutput(Word::binary("11111")));       // all amplitudes zero
  EXPECT_FALSE(parse_qoutput(Word::binary("1010011")));     // truncated
  EXPECT_FALSE(parse_qoutput(Word::binary("101001110")));   // trailing bit
  EXPECT_FALSE(parse_qoutput(Word::binary("")));
  EXPECT_FALSE(parse_qoutput(Word::binary("0")));
  EXPECT_FALSE(parse_qoutput(Word::binary("1010")));        // value without its sign bit
}

TEST(Parse, RoundTripOnRandomStates) {
  auto eng = rng::engine(1, rng::kFixtureStream, 10);
  for (int i = 0; i < 2000; ++i) {
    const QubitString psi = random_state(eng, 1 + i % 3, 1 + i % 50);
    const Word bits = encode(psi);
    const auto back = parse_qoutput(bits);
    ASSERT_TRUE(back);
    ASSERT_EQ(*back, psi);
    ASSERT_EQ(encode(*back), bits);
    // Every proper prefix is rejected.
    if (i % 50 == 0) {
      for (std::size_t m = 0; m < bits.size(); ++m) {
        ASSERT_FALSE(parse_qoutput(bitstrings::prefix(bits, m)));
      }
    }
  }
}

TEST(Parse, EveryShortWordParsesBackToItself) {
  for (std::uint64_t k = 0; k < (1u << 14); ++k) {
    const Word w = bitstrings::lex_string(k);
    const auto s = parse_qoutput(w);
    if (s) {
      ASSERT_EQ(encode(*s), w);
    }
  }
}

TEST(Equivalence, Examples) {
  EXPECT_TRUE(states_equivalent(state(1, {{1, 0}, {1, 0}}), state(1, {{2, 0}, {2, 0}})));
  EXPECT_FALSE(states_equivalent(state(1, {{1, 0}, {0, 0}}), state(1, {{0, 0}, {1, 0}})));
  EXPECT_FALSE(states_equivalent(state(1, {{1, 0}, {1, 0}}), state(1, {{-1, 0}, {-1, 0}})));
  EXPECT_FALSE(states_equivalent(state(1, {{1, 0}, {1, 0}}), state(1, {{0, 1}, {0, 1}})));
  EXPECT_TRUE(states_equivalent(state(1, {{2, 4}, {0, -6}}), state(1, {{1, 2}, {0, -3}})));
  EXPECT_FALSE(states_equivalent(QubitString::basis(1, 0), QubitString::basis(2, 0)));
}

TEST(Equivalence, IsAnEquivalenceRelation) {
  auto eng = rng::engine(2, rng::kFixtureStream, 11);
  std::vector<QubitString> set;
  for (int i = 0; i < 40; ++i) {
    const QubitString base = random_state(eng, 1, 2);
    set.push_back(base);
    set.push_back(base.scaled(1 + i % 5));
  }
  for (const auto& a : set) {
    ASSERT_TRUE(states_equivalent(a, a));
    for (const auto& b : set) {
      ASSERT_EQ(states_equivalent(a, b), states_equivalent(b, a));
      if (!states_equivalent(a, b)) continue;
      for (const auto& c : set) {
        if (states_equivalent(b, c)) {
          ASSERT_TRUE(states_equivalent(a, c));
        }
      }
    }
  }
}

TEST(QCanonical, MatchesDirectSearch) {
  const auto& t = table16();
  for (const auto& psi : {QubitString::basis(1, 0), QubitString::basis(1, 1),
                          state(1, {{1, 0}, {1, 0}}), state(1, {{0, 1}, {0, 0}})}) {
    const auto p = qcanonical_program(psi, t);
    const auto o = canonical_oracle(psi, 16, 256);
    ASSERT_EQ(p.has_value(), o.has_value()) << state_to_json(psi);
    if (p) {
      EXPECT_EQ(p->program, *o);
      EXPECT_EQ(p->steps, machine::run_prefix(*o, 256).steps);
    }
  }
  const auto z = qcanonical_program(QubitString::basis(1, 0), t);
  ASSERT_TRUE(z);
  EXPECT_EQ(z->program, machine::print_program(Word::binary("10100111")));
}

TEST(QCanonical, ConstantOnClasses) {
  const auto& t = table16();
  const QubitString psi = state(1, {{1, 0}, {1, 0}});
  const auto a = qcanonical_program(psi, t);
  const auto b = qcanonical_program(psi.scaled(3), t);
  EXPECT_EQ(a, b);
  for (std::uint64_t s = 0; s <= 3; ++s) {
    EXPECT_EQ(qdepth::qdepth(psi, s, t), qdepth::qdepth(psi.scaled(3), s, t));
  }
}

TEST(QCanonical, LargeTwoQubitStateAbsent) {
  const QubitString big = state(2, {{1009, 0}, {-2003, 0}, {0, 3001}, {4001, -5003}});
  ASSERT_GT(encode(big).size(), 16u);
  EXPECT_FALSE(qcanonical_program(big, table16()));
  EXPECT_FALSE(qdepth::qdepth(big, 0, table16()).is_defined());
  EXPECT_THROW(classify_qdepth(big, 0, 10, table16()), UndefinedDepth);
}

TEST(QDepth, OneQubitBasisStates) {
  const auto& t = table16();
  for (std::uint64_t i = 0; i < 2; ++i) {
    const QubitString psi = QubitString::basis(1, i);
    const auto p = qcanonical_program(psi, t);
    ASSERT_TRUE(p);
    for (std::uint64_t s = 0; s <= 4; ++s) {
      const auto d = qdepth::qdepth(psi, s, t);
      ASSERT_TRUE(d.is_defined());
      EXPECT_LE(d.steps(), p->steps);
      if (s > 0) {
        EXPECT_LE(d.steps(), qdepth::qdepth(psi, s - 1, t).steps());
      }
      for (long f : {2, 3, 7}) {
        EXPECT_EQ(d, qdepth::qdepth(psi.scaled(f), s, t));
      }
    }
    EXPECT_EQ(classify_qdepth(psi, 2, 1, t), aic::DepthClass::Shallow);
  }
}

TEST(QDepth, MonotoneOnAllShortStates) {
  const auto& t = table16();
  for (std::uint64_t k = 0; k < (1u << 13); ++k) {
    const auto psi = parse_qoutput(bitstrings::lex_string(k));
    if (!psi) continue;
    std::optional<std::uint64_t> prev;
    for (std::uint64_t s = 0; s <= 3; ++s) {
      const auto d = qdepth::qdepth(*psi, s, t);
      if (prev) {
        ASSERT_TRUE(d.is_defined());
        ASSERT_LE(d.steps(), *prev);
      }
      if (d.is_defined()) prev = d.steps();
    }
  }
}

// Basis embedding: |x> is printed by the literal program of its encoding,
// so qdepth is at most the classical print time.
TEST(QDepth, TwoQubitBasisEmbedding) {
  const auto t = aic::enumerate(aic::Bounds{22, 1});
  for (std::uint64_t i = 0; i < 4; ++i) {
    const QubitString psi = QubitString::basis(2, i);
    const Word enc = encode(psi);
    ASSERT_LE(machine::print_program(enc).size(), 22u);
    const auto d = qdepth::qdepth(psi, 2, t);
    ASSERT_TRUE(d.is_defined());
    EXPECT_LE(d.steps(), aic::depth(enc, 2, t).steps());
    EXPECT_LE(d.steps(), constants::kTPrint);
  }
}

TEST(StateJson, RoundTripAndErrors) {
  const QubitString psi = state(2, {{1, -2}, {0, 0}, {3, 0}, {0, 4}});
  EXPECT_EQ(state_from_json(state_to_json(psi)), psi);
  const QubitString huge = QubitString(
      1, {{mpz_class("123456789012345678901234567890"), 0}, {0, mpz_class("-5")}});
  EXPECT_EQ(state_from_json(state_to_json(huge)), huge);
  EXPECT_EQ(state_from_json(R"({"n": 1, "amplitudes": [["7", 0], [0, "-1"]]})"),
            state(1, {{7, 0}, {0, -1}}));
  EXPECT_THROW(state_from_json("{"), PreconditionError);
  EXPECT_THROW(state_from_json(R"({"n": 1})"), PreconditionError);
  EXPECT_THROW(state_from_json(R"({"n": 1, "amplitudes": [[1], [0, 0]]})"), PreconditionError);
  EXPECT_THROW(state_from_json(R"({"n": 1, "amplitudes": [[1.5, 0], [0, 0]]})"), PreconditionError);
  EXPECT_THROW(state_from_json(R"({"n": 1, "amplitudes": [[0, 0], [0, 0]]})"), PreconditionError);
}
