#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "depthlab/aic.hpp"
#include "depthlab/brudno.hpp"
#include "depthlab/constants.hpp"
#include "depthlab/error.hpp"
#include "depthlab/machine.hpp"
#include "depthlab/report.hpp"
#include "depthlab/rng.hpp"

using namespace depthlab;
using namespace depthlab::brudno;
using bitstrings::Word;
using dynsys::Partition;

namespace {

const aic::ComplexityTable& table16() {
  static const aic::ComplexityTable t = aic::enumerate(aic::Bounds{16, 256});
  return t;
}

// Incremental parsing with a set of seen phrases; an unfinished tail counts.
std::uint64_t phrases_oracle(const std::string& s) {
  std::set<std::string> seen;
  std::string cur;
  std::uint64_t c = 0;
  for (char ch : s) {
    cur.push_back(ch);
    if (!seen.count(cur)) {
      seen.insert(cur);
      ++c;
      cur.clear();
    }
  }
  return c + (cur.empty() ? 0 : 1);
}

double rate_oracle(std::uint64_t c, std::size_t n) {
  const double dc = static_cast<double>(c);
  return dc * (std::log2(dc) + 1) / static_cast<double>(n);
}

Word coin(std::uint64_t seed, std::size_t n) {
  auto eng = rng::engine(seed, rng::kFixtureStream, 3);
  Word w;
  for (std::size_t i = 0; i < n; ++i) w.push_back(eng() & 1);
  return w;
}

Word repeat(const std::string& unit, std::size_t n) {
  std::string s;
  while (s.size() < n) s += unit;
  s.resize(n);
  return Word::binary(s);
}

}  // namespace

TEST(RateEpsilon, Formula) {
  EXPECT_DOUBLE_EQ(rate_epsilon(1), 2.0);
  EXPECT_NEAR(rate_epsilon(3), 2 * std::log2(std::log2(3.0) + 2) / 2, 1e-12);
  EXPECT_LT(rate_epsilon(100000), rate_epsilon(1000));
}

TEST(Lz78, PhraseCountMatchesOracle) {
  EXPECT_EQ(lz78_phrase_count(Word::binary("1011010100010")), 7u);  // 1|0|11|01|010|00|10
  EXPECT_EQ(lz78_phrase_count(Word::binary("0000")), 3u);            // 0|00|0
  for (std::uint64_t k = 0; k < 5000; ++k) {
    const Word w = bitstrings::lex_string(k);
    ASSERT_EQ(lz78_phrase_count(w), phrases_oracle(w.str())) << w.str();
  }
  const Word c = coin(1, 20000);
  EXPECT_EQ(lz78_phrase_count(c), phrases_oracle(c.str()));
}

TEST(Lz78, RateFormulaAndClamp) {
  for (const Word& w : {coin(2, 100000), repeat("0", 10000), repeat("01", 10000), coin(3, 50)}) {
    const auto r = lz78_rate(w);
    EXPECT_EQ(r.phrases, phrases_oracle(w.str()));
    EXPECT_EQ(r.length, w.size());
    EXPECT_EQ(r.method, Method::LZ78);
    EXPECT_DOUBLE_EQ(r.epsilon, rate_epsilon(w.size()));
    const double raw = rate_oracle(r.phrases, w.size());
    EXPECT_DOUBLE_EQ(r.value, std::min(raw, 1 + r.epsilon));
    EXPECT_GE(r.value, 0.0);
  }
  EXPECT_THROW(lz78_rate(Word::binary("1")), PreconditionError);
}

TEST(Lz78, OrderingOfSources) {
  const double z = lz78_rate(repeat("0", 10000)).value;
  const double p = lz78_rate(repeat("01", 10000)).value;
  const double f = lz78_rate(coin(4, 10000)).value;
  EXPECT_LT(z, 0.2);
  EXPECT_LT(p, 0.2);
  EXPECT_GT(f, 0.9);
  // Constant words parse into phrases of lengths 1, 2, 3, ...
  EXPECT_EQ(lz78_rate(repeat("0", 10000)).phrases, 141u);
}

TEST(Lz78, NonBinaryAlphabetNormalized) {
  auto eng = rng::engine(5, rng::kFixtureStream, 4);
  Word w{bitstrings::Alphabet(4)};
  for (int i = 0; i < 20000; ++i) w.push_back(eng() % 4);
  const auto r = lz78_rate(w);
  const double c = static_cast<double>(r.phrases);
  EXPECT_NEAR(r.value, std::min(c * (std::log2(c) + 2) / (20000.0 * 2), 1 + r.epsilon), 1e-12);
}

TEST(BoundedK, Curve) {
  const auto& t = table16();
  const Word w = Word::binary("01101001");
  const auto r = boundedK_rate(w, t);
  ASSERT_EQ(r.curve.size(), 8u);
  EXPECT_FALSE(r.truncated);
  for (std::size_t n = 1; n <= 8; ++n) {
    const auto k = t.K_bound(bitstrings::prefix(w, n));
    ASSERT_TRUE(k);
    EXPECT_DOUBLE_EQ(r.curve[n - 1], static_cast<double>(*k) / n);
    // Print bound on the plain side.
    EXPECT_LE(r.curve[n - 1], (constants::kCLit * n + constants::kC0) / static_cast<double>(n));
  }
  EXPECT_GE(r.curve.back(), (8.0 - 2) / 8);
  EXPECT_DOUBLE_EQ(r.value, std::min(r.curve.back(), 1 + r.epsilon));
}

TEST(BoundedK, TruncatesBeyondCoverage) {
  const Word w = coin(6, 40);
  const auto r = boundedK_rate(w, table16());
  EXPECT_TRUE(r.truncated);
  EXPECT_LT(r.curve.size(), 40u);
  EXPECT_THROW(estimate(w, EstimatorOptions{Method::BoundedK, 10, nullptr}), PreconditionError);
}

TEST(BlockRate, FairAndPeriodic) {
  const auto f = block_rate(coin(7, 100000), 8);
  EXPECT_NEAR(f.value, 1.0, 0.02);
  EXPECT_EQ(f.curve.size(), 8u);
  EXPECT_EQ(f.method, Method::BlockEntropy);
  EXPECT_NEAR(block_rate(repeat("01", 10000), 6).value, 0.0, 1e-9);
}

TEST(BinaryCoding, IdentityOnBinaryAndDroppedCount) {
  std::uint64_t dropped = 99;
  const Word b = Word::binary("0110");
  EXPECT_EQ(binary_coding(b, &dropped), b);
  EXPECT_EQ(dropped, 0u);
  Word q{bitstrings::Alphabet(4)};
  for (unsigned d : {1u, 3u, 0u, 2u}) q.push_back(d);
  EXPECT_EQ(binary_coding(q).str(), "01110010");
  Word t{bitstrings::Alphabet(3)};
  for (int i = 0; i < 30; ++i) t.push_back(i % 3);
  const Word tb = binary_coding(t, &dropped);
  EXPECT_EQ(tb.size() + dropped, bitstrings::nominal_digits(30, 3, 2));
}

TEST(BrudnoEntropy, DyadicStartGivesLowRate) {
  const auto d = dynsys::doubling_map();
  const auto x0 = dynsys::make_point(*d, bitstrings::parse_rational("3/8"), 20000);
  const auto r = brudno_entropy(*d, Partition::halves(), x0, 20000);
  EXPECT_LT(r.value, 0.1);
  EXPECT_EQ(r.length, 20000u);
}

TEST(BrudnoEntropy, DoublingTypicalAndRotation) {
  const auto d = dynsys::doubling_map();
  const auto xd = dynsys::sample_trajectory(*d, Partition::halves(), 100000, 3, 0).symbols;
  EXPECT_EQ(lz78_rate(xd).value, std::min(rate_oracle(phrases_oracle(xd.str()), xd.size()),
                                          1 + rate_epsilon(xd.size())));
  EXPECT_GT(lz78_rate(xd).value, 0.9);
  EXPECT_NEAR(block_rate(xd, 10).value, 1.0, 0.03);

  const auto r = dynsys::rotation();
  const auto xr = dynsys::sample_trajectory(*r, Partition::halves(), 100000, 3, 0).symbols;
  EXPECT_LE(lz78_rate(xr).value, 0.4);
  EXPECT_LE(block_rate(xr, 16).value, 0.2);
}

TEST(BrudnoSup, FamilyMaximum) {
  const auto d = dynsys::doubling_map();
  rng::Engine eng = rng::engine(8, rng::kOrbitStream, 0);
  const auto x0 = d->sample(eng, d->required_precision(5000));
  const auto triv = brudno_sup(*d, {Partition::trivial()}, x0, 5000, {Method::BlockEntropy, 8});
  EXPECT_EQ(triv.best.value, 0.0);
  const auto sup = brudno_sup(*d, {Partition::trivial(), Partition::halves(), Partition::uniform(4)},
                              x0, 5000, {Method::BlockEntropy, 6});
  EXPECT_TRUE(sup.lower_bound);
  EXPECT_NE(sup.maximizer, 0u);
  EXPECT_NEAR(sup.best.value, 1.0, 0.1);
  for (const auto& m : sup.members) EXPECT_GE(sup.best.value, m.value);
  EXPECT_THROW(brudno_sup(*d, {}, x0, 5000), PreconditionError);
}

// Reference vectors for the three battery tests, computed by hand from the
// standard statistics.
TEST(Battery, ReferenceVectors) {
  EXPECT_NEAR(monobit_test(Word::binary("1011010101"), 0.01).p_value, 0.527089, 1e-6);
  EXPECT_NEAR(block_frequency_test(Word::binary("0110011010"), 3, 0.01).p_value, 0.801252, 1e-6);
  EXPECT_NEAR(runs_test(Word::binary("1001101011"), 0.01).p_value, 0.147232, 1e-6);
  EXPECT_FALSE(monobit_test(repeat("1", 1000), 0.01).passed);
  EXPECT_FALSE(runs_test(repeat("01", 1000), 0.01).passed);
  EXPECT_THROW(monobit_test(Word::binary("1"), 0.01), PreconditionError);
  const auto b = randomness_battery(coin(9, 100000), 0.01);
  ASSERT_EQ(b.size(), 3u);
  EXPECT_EQ(b[0].name, "monobit");
  EXPECT_EQ(b[1].name, "block_frequency");
  EXPECT_EQ(b[2].name, "runs");
}

TEST(Classifier, Verdicts) {
  const std::vector<Partition> fam{Partition::halves()};
  const auto d = classify_algorithmic_chaoticity(*dynsys::doubling_map(), fam, 30, 100000, 1);
  EXPECT_NE(d.verdict, Chaoticity::None);
  EXPECT_EQ(d.orbits.size(), 30u);
  EXPECT_GE(d.weak_fraction, 0.9);
  const auto r = classify_algorithmic_chaoticity(*dynsys::rotation(), fam, 30, 100000, 1);
  EXPECT_EQ(r.verdict, Chaoticity::None);
  const auto i = classify_algorithmic_chaoticity(*dynsys::identity_map(), fam, 30, 100000, 1);
  EXPECT_EQ(i.verdict, Chaoticity::None);
  EXPECT_THROW(classify_algorithmic_chaoticity(*dynsys::doubling_map(), fam, 29, 1000, 1),
               PreconditionError);
  EXPECT_EQ(to_string(Chaoticity::StrongProxy), "STRONG_PROXY");
}

TEST(Classifier, WorkerIndependent) {
  const std::vector<Partition> fam{Partition::halves(), Partition::uniform(3)};
  const auto a = classify_algorithmic_chaoticity(*dynsys::doubling_map(), fam, 30, 4000, 5, {}, {}, 1);
  const auto b = classify_algorithmic_chaoticity(*dynsys::doubling_map(), fam, 30, 4000, 5, {}, {}, 4);
  ASSERT_EQ(a.orbits.size(), b.orbits.size());
  for (std::size_t k = 0; k < a.orbits.size(); ++k) {
    EXPECT_EQ(a.orbits[k].rate, b.orbits[k].rate);
    EXPECT_EQ(a.orbits[k].maximizer, b.orbits[k].maximizer);
  }
  EXPECT_EQ(a.verdict, b.verdict);
}

TEST(Profile, DoublingIsShallow) {
  const auto p = trajectory_depth_profile(*dynsys::doubling_map(), Partition::halves(), 100, 8,
                                          2, table16(), 1, constants::kCSlack);
  EXPECT_EQ(p.per_orbit.size(), 100u);
  EXPECT_GE(p.shallow_fraction, 0.95);
  EXPECT_EQ(p.system, "doubling");
  for (const auto& o : p.per_orbit) {
    EXPECT_EQ(o.coding.size(), 8u);
    EXPECT_EQ(o.T_print, constants::kTPrint);
    ASSERT_TRUE(o.I_bound);
    EXPECT_TRUE(o.incompressible);
  }
}

TEST(Profile, IdentityRuns) {
  const auto p = trajectory_depth_profile(*dynsys::identity_map(), Partition::halves(), 30, 8, 2,
                                          table16(), 1, constants::kCSlack);
  for (const auto& o : p.per_orbit) {
    const std::string s = o.coding.str();
    EXPECT_TRUE(s == "00000000" || s == "11111111") << s;
  }
}

TEST(Profile, Preconditions) {
  EXPECT_THROW(trajectory_depth_profile(*dynsys::doubling_map(), Partition::halves(), 29, 8, 2,
                                        table16(), 1, 0),
               PreconditionError);
  EXPECT_THROW(trajectory_depth_profile(*dynsys::doubling_map(), Partition::halves(), 30, 9, 2,
                                        table16(), 1, 0),
               PreconditionError);
}

TEST(Profile, DepthNonincreasingInS) {
  const auto& t = table16();
  std::vector<Word> words;
  for (std::uint64_t k = 0; k < 511; ++k) words.push_back(bitstrings::lex_string(k));
  std::vector<DepthProfile> ps;
  for (std::uint64_t s = 0; s <= 4; ++s) ps.push_back(depth_profile_of_words(words, s, t, 0));
  for (std::size_t s = 1; s < ps.size(); ++s) {
    for (std::size_t i = 0; i < words.size(); ++i) {
      const auto& a = ps[s - 1].per_orbit[i].depth;
      const auto& b = ps[s].per_orbit[i].depth;
      if (a && b) {
        EXPECT_LE(*b, *a) << words[i].str();
      }
      if (a) {
        EXPECT_TRUE(b) << words[i].str();
      }
    }
  }
}

TEST(Profile, InformationPrefixMonotone) {
  const auto& t = table16();
  for (std::uint64_t i = 0; i < 30; ++i) {
    const Word w = dynsys::sample_trajectory(*dynsys::doubling_map(), Partition::halves(), 8, 2, i)
                       .symbols;
    for (std::size_t n = 1; n < w.size(); ++n) {
      const auto a = t.I_bound(bitstrings::prefix(w, n));
      const auto b = t.I_bound(bitstrings::prefix(w, n + 1));
      ASSERT_TRUE(a && b);
      EXPECT_GE(*b + constants::kC0, *a);
    }
  }
}

// 0^13 is printed only by REP 13; OUT0; HALT (18 bits, 15 steps) within L = 20
// since its literal print program needs 21 bits.
TEST(Profile, PlantedSlowLoopIsNotShallow) {
  const auto t = aic::enumerate(aic::Bounds{20, 32});
  const Word slow = machine::repeat_program(13, 0);
  ASSERT_EQ(slow.size(), 18u);
  const Word z = Word::binary(std::string(13, '0'));
  ASSERT_GT(machine::print_program(z).size(), 20u);
  const Word r = Word::binary("10110010");
  const auto p = depth_profile_of_words({z, r}, 2, t, constants::kCSlack);
  ASSERT_TRUE(p.per_orbit[0].depth);
  EXPECT_GE(*p.per_orbit[0].depth, 13u);
  EXPECT_FALSE(p.per_orbit[0].shallow);
  EXPECT_TRUE(p.per_orbit[1].shallow);
  EXPECT_DOUBLE_EQ(p.shallow_fraction, 0.5);
}

TEST(Profile, JsonAndCsv) {
  const auto p = trajectory_depth_profile(*dynsys::doubling_map(), Partition::uniform(3), 30, 8, 1,
                                          table16(), 4, 0);
  const auto j = report::Json::parse(profile_to_json(p));
  EXPECT_EQ(j["per_orbit"].size(), 30u);
  EXPECT_EQ(j["bounds"]["L"], 16);
  EXPECT_EQ(j["seed"], 4);
  EXPECT_EQ(j["partition"], Partition::uniform(3).str());
  for (const char* key : {"machine", "system", "s", "summary"}) EXPECT_TRUE(j.contains(key)) << key;
  for (const char* key : {"coding", "I_bound", "K_bound", "depth", "T_print", "shallow"}) {
    EXPECT_TRUE(j["per_orbit"][0].contains(key)) << key;
  }
  std::istringstream csv(profile_to_csv(p));
  std::string line;
  std::size_t rows = 0;
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, 31u);
  // Same seed, same profile.
  const auto q = trajectory_depth_profile(*dynsys::doubling_map(), Partition::uniform(3), 30, 8, 1,
                                          table16(), 4, 0);
  EXPECT_EQ(profile_to_json(p), profile_to_json(q));
}
