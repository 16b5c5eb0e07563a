#include <gtest/gtest.h>

#include <bit>
#include <set>
#include <thread>

#include "depthlab/constants.hpp"
#include "depthlab/error.hpp"
#include "depthlab/machine.hpp"
#include "depthlab/rng.hpp"

using namespace depthlab;
using namespace depthlab::machine;
namespace as = depthlab::machine::assemble;
using bitstrings::Word;

namespace {

// Reference interpreter written from docs/isa.md alone. Slow and literal.
class RefMachine {
 public:
  RefMachine(const std::string& bits, bool plain, std::uint64_t budget)
      : bits_(bits), plain_(plain), budget_(budget) {}

  ExecOutcome run() {
    std::uint64_t pc = 0;
    for (;;) {
      if (steps_ >= budget_) return stop(RunStatus::OutOfBudget);
      if (!ensure(pc)) return stop(status_);
      const auto r = exec(pc);
      if (r.kind == 1) {
        ExecOutcome o;
        o.halted = true;
        o.output = Word::binary(out_);
        o.steps = steps_;
        o.consumed = cur_;
        o.status = RunStatus::Halted;
        return o;
      }
      if (r.kind == 2) return stop(status_);
      pc = r.pc;
    }
  }

 private:
  struct Ins {
    char op;  // L H O I D R Z J B C N
    int a = 0, b = 0;
    bool back = false;
    std::uint64_t n = 0;
    std::string lit;
  };
  struct Res {
    int kind;  // 0 next, 1 halt, 2 stop, 3 jump
    std::uint64_t pc;
  };

  int bit() {
    if (cur_ >= bits_.size()) {
      status_ = RunStatus::Starved;
      return -1;
    }
    return bits_[cur_++] - '0';
  }
  bool reg(int& r) {
    int h = bit(), l = h < 0 ? -1 : bit();
    if (l < 0) return false;
    r = h * 2 + l;
    return true;
  }
  bool gamma(std::uint64_t& v) {
    int z = 0, b;
    while ((b = bit()) == 0) {
      if (++z > 62) {
        status_ = RunStatus::Fault;
        return false;
      }
    }
    if (b < 0) return false;
    v = 1;
    for (int i = 0; i < z; ++i) {
      if ((b = bit()) < 0) return false;
      v = v * 2 + b;
    }
    return true;
  }
  bool decode(Ins& in) {
    int b;
    if ((b = bit()) < 0) return false;
    if (b == 0) {
      in.op = 'L';
      if (plain_) {
        in.lit = bits_.substr(cur_);
        cur_ = bits_.size();
        return true;
      }
      if (!gamma(in.n)) return false;
      for (std::uint64_t i = 0; i < in.n; ++i) {
        if ((b = bit()) < 0) return false;
        in.lit.push_back('0' + b);
      }
      return true;
    }
    // Count leading ones after the first 1.
    int ones = 1;
    while (ones < 8) {
      if ((b = bit()) < 0) return false;
      if (b == 0) break;
      ++ones;
    }
    switch (ones) {
      case 1: {  // 10x
        if ((b = bit()) < 0) return false;
        if (b == 0) {
          in.op = 'H';
          return true;
        }
        in.op = 'O';
        if ((b = bit()) < 0) return false;
        in.a = b;
        return true;
      }
      case 2: {  // 110x rr
        if ((b = bit()) < 0) return false;
        in.op = b == 0 ? 'I' : 'D';
        return reg(in.a);
      }
      case 3:
        in.op = 'R';
        return gamma(in.n);
      case 4:
        in.op = 'Z';
        if (!reg(in.a) || (b = bit()) < 0) return false;
        in.back = b;
        return gamma(in.n);
      case 5:
        in.op = 'J';
        if ((b = bit()) < 0) return false;
        in.back = b;
        return gamma(in.n);
      case 6:
        in.op = 'B';
        return reg(in.a);
      case 7:
        in.op = 'C';
        return reg(in.a) && reg(in.b);
      default:
        in.op = 'N';
        return true;
    }
  }
  bool ensure(std::uint64_t i) {
    while (cache_.size() <= i) {
      Ins in;
      if (!decode(in)) return false;
      cache_.push_back(in);
    }
    return true;
  }
  std::uint64_t target(std::uint64_t i, const Ins& in) {
    return in.back ? (i >= in.n ? i - in.n : 0) : i + in.n;
  }
  Res exec(std::uint64_t i) {
    if (steps_ >= budget_) {
      status_ = RunStatus::OutOfBudget;
      return {2, 0};
    }
    ++steps_;
    const Ins in = cache_[i];
    switch (in.op) {
      case 'L': out_ += in.lit; return {1, 0};
      case 'H': return {1, 0};
      case 'O': out_.push_back('0' + in.a); break;
      case 'I': ++reg_[in.a]; break;
      case 'D': reg_[in.a] = reg_[in.a] ? reg_[in.a] - 1 : 0; break;
      case 'B': {
        const int b = bit();
        if (b < 0) return {2, 0};
        reg_[in.a] = b;
        break;
      }
      case 'C': reg_[in.a] = reg_[in.b]; break;
      case 'N': break;
      case 'Z':
        if (reg_[in.a] == 0) return {3, target(i, in)};
        break;
      case 'J': return {3, target(i, in)};
      case 'R': {
        if (!ensure(i + 1)) return {2, 0};
        Res last{0, i + 2};
        for (std::uint64_t k = 0; k < in.n; ++k) {
          last = exec(i + 1);
          if (last.kind != 0) return last;
        }
        return last;
      }
    }
    return {0, i + 1};
  }
  ExecOutcome stop(RunStatus s) {
    ExecOutcome o;
    o.output = Word::binary(out_);
    o.steps = budget_;
    o.consumed = cur_;
    o.status = s;
    return o;
  }

  std::string bits_;
  bool plain_;
  std::uint64_t budget_;
  std::uint64_t steps_ = 0;
  std::size_t cur_ = 0;
  std::uint64_t reg_[4] = {};
  std::vector<Ins> cache_;
  std::string out_;
  RunStatus status_ = RunStatus::Starved;
};

Word random_instructions(rng::Engine& eng, int count) {
  Word w;
  for (int i = 0; i < count; ++i) {
    const unsigned r = eng() % 4;
    switch (eng() % 10) {
      case 0: w.append(as::out(eng() & 1)); break;
      case 1: w.append(as::inc(r)); break;
      case 2: w.append(as::dec(r)); break;
      case 3: w.append(as::rep(1 + eng() % 5)); break;
      case 4: w.append(as::jz(r, 1 + eng() % 4, eng() & 1)); break;
      case 5: w.append(as::jmp(1 + eng() % 4, eng() & 1)); break;
      case 6: w.append(as::readbit(r)); break;
      case 7: w.append(as::copy(r, eng() % 4)); break;
      case 8: w.append(as::nop()); break;
      default: w.append(as::out(eng() & 1)); break;
    }
  }
  if (eng() % 3) w.append(eng() & 1 ? as::halt() : as::lit(Word::binary("01")));
  for (int extra = eng() % 3; extra > 0; --extra) w.push_back(eng() & 1);
  return w;
}

}  // namespace

TEST(Machine, SpecVersionTag) { EXPECT_EQ(machine_spec().version, "depthlab-isa/1"); }

TEST(Gamma, Codes) {
  EXPECT_EQ(as::gamma(1).str(), "1");
  EXPECT_EQ(as::gamma(2).str(), "010");
  EXPECT_EQ(as::gamma(3).str(), "011");
  EXPECT_EQ(as::gamma(4).str(), "00100");
  EXPECT_EQ(as::gamma(8).str(), "0001000");
  EXPECT_THROW(as::gamma(0), PreconditionError);
}

TEST(RunPrefix, HaltExample) {
  const auto o = run_prefix(as::halt(), 10);
  EXPECT_TRUE(o.halted);
  EXPECT_EQ(o.output.str(), "");
  EXPECT_EQ(o.steps, 1u);
  EXPECT_EQ(o.consumed, 3u);
}

TEST(RunPrefix, EmptySourceStarves) {
  const auto o = run_prefix(Word(), 10);
  EXPECT_FALSE(o.halted);
  EXPECT_EQ(o.status, RunStatus::Starved);
  EXPECT_EQ(o.steps, 10u);
}

TEST(RunPrefix, OutOutHalt) {
  const Word p = as::concat({as::out(0), as::out(1), as::halt()});
  EXPECT_EQ(p.str(), "10101011100");
  const auto o = run_prefix(p, 100);
  EXPECT_TRUE(o.halted);
  EXPECT_EQ(o.output.str(), "01");
  EXPECT_EQ(o.steps, 3u);
}

TEST(RunPrefix, ReferencePrograms) {
  const Word lit = as::lit(Word::binary("10110010"));
  EXPECT_EQ(lit.str(), "0000100010110010");
  auto o = run_prefix(lit, 10);
  EXPECT_TRUE(o.halted);
  EXPECT_EQ(o.output.str(), "10110010");
  EXPECT_EQ(o.steps, constants::kTPrint);

  const Word rep = repeat_program(13, 0);
  EXPECT_EQ(rep.str(), "111000011011010100");
  o = run_prefix(rep, 100);
  EXPECT_TRUE(o.halted);
  EXPECT_EQ(o.output.str(), std::string(13, '0'));
  EXPECT_EQ(o.steps, 15u);
}

TEST(RunPrefix, UnreadTailIsNotAProgram) {
  const Word p = Word::binary("1001");
  EXPECT_TRUE(halting_time(p, 10).is_diverged());
  EXPECT_EQ(halting_time(as::halt(), 10), HaltingTime::at(1));
}

TEST(RunPlain, Examples) {
  const auto h = run_plain(as::halt(), 10);
  EXPECT_TRUE(h.halted);
  EXPECT_EQ(h.output.str(), "");
  const Word ones = Word::binary(std::string(40, '1'));
  const auto o = run_plain(ones, 50);
  EXPECT_FALSE(o.halted);
  EXPECT_EQ(o.steps, 50u);
  EXPECT_FALSE(run_prefix(ones, 50).halted);
}

TEST(RunPlain, LiteralIsTheRemainder) {
  const auto o = run_plain(Word::binary("0110"), 5);
  EXPECT_TRUE(o.halted);
  EXPECT_EQ(o.output.str(), "110");
  EXPECT_EQ(o.steps, 1u);
}

TEST(RunPlain, AgreesWithPrefixWithoutLiterals) {
  auto eng = rng::engine(3, rng::kFixtureStream, 0);
  for (int i = 0; i < 2000; ++i) {
    Word p;
    for (int k = 0; k < 1 + static_cast<int>(eng() % 8); ++k) {
      switch (eng() % 4) {
        case 0: p.append(as::out(eng() & 1)); break;
        case 1: p.append(as::inc(eng() % 4)); break;
        case 2: p.append(as::rep(1 + eng() % 3)); break;
        default: p.append(as::nop()); break;
      }
    }
    p.append(as::halt());
    const auto a = run_prefix(p, 64);
    const auto b = run_plain(p, 64);
    ASSERT_EQ(a, b) << p.str();
  }
}

TEST(HaltingTime, Examples) {
  EXPECT_EQ(halting_time(as::halt(), 10).steps(), 1u);
  EXPECT_EQ(halting_time(as::concat({as::out(0), as::halt()}), 10).steps(), 2u);
  const Word loop = as::jmp(0 + 1, true);  // JMP -1 from index 0 clamps to 0: spins
  EXPECT_TRUE(halting_time(loop, 50).is_diverged());
  EXPECT_THROW(halting_time(loop, 50).steps(), PreconditionError);
  EXPECT_TRUE(halting_time(Word::binary("1"), 50).is_diverged());
}

TEST(RunPrefix, BudgetMustBePositive) { EXPECT_THROW(run_prefix(as::halt(), 0), PreconditionError); }

TEST(RunPrefix, LongGammaFaults) {
  const Word p = Word::binary("1110" + std::string(63, '0') + "1");
  EXPECT_EQ(run_prefix(p, 10).status, RunStatus::Fault);
}

TEST(RunPrefix, DifferentialAgainstReferenceOnAllShortStrings) {
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << 15); ++k) {
    const Word p = bitstrings::lex_string(k);
    ASSERT_EQ(run_prefix(p, 64), RefMachine(p.str(), false, 64).run()) << p.str();
    ASSERT_EQ(run_plain(p, 64), RefMachine(p.str(), true, 64).run()) << p.str();
  }
}

TEST(RunPrefix, DifferentialAgainstReferenceOnAssembledPrograms) {
  auto eng = rng::engine(5, rng::kFixtureStream, 0);
  for (int i = 0; i < 5000; ++i) {
    const Word p = random_instructions(eng, 1 + static_cast<int>(eng() % 12));
    for (std::uint64_t budget : {1u, 7u, 200u}) {
      ASSERT_EQ(run_prefix(p, budget), RefMachine(p.str(), false, budget).run()) << p.str();
      ASSERT_EQ(run_plain(p, budget), RefMachine(p.str(), true, budget).run()) << p.str();
    }
  }
}

TEST(RunPrefix, PrefixFreeUpTo14) {
  std::set<std::string> halting;
  for (std::uint64_t k = 0; k < (std::uint64_t{2} << 14) - 1; ++k) {
    const Word p = bitstrings::lex_string(k);
    if (!halting_time(p, 256).is_diverged()) halting.insert(p.str());
  }
  for (const auto& p : halting) {
    for (std::size_t n = 0; n < p.size(); ++n) ASSERT_FALSE(halting.count(p.substr(0, n))) << p;
  }
}

TEST(RunPrefix, BudgetMonotonicity) {
  auto eng = rng::engine(9, rng::kFixtureStream, 0);
  for (int i = 0; i < 3000; ++i) {
    const Word p = random_instructions(eng, 1 + static_cast<int>(eng() % 10));
    const auto o = run_prefix(p, 300);
    if (!o.halted) continue;
    for (std::uint64_t b = o.steps; b < o.steps + 20; ++b) ASSERT_EQ(run_prefix(p, b), o);
    if (o.steps > 1) {
      ASSERT_FALSE(run_prefix(p, o.steps - 1).halted);
    }
  }
}

TEST(RunPrefix, OutputIsAppendOnly) {
  auto eng = rng::engine(10, rng::kFixtureStream, 0);
  for (int i = 0; i < 1000; ++i) {
    const Word p = random_instructions(eng, 1 + static_cast<int>(eng() % 10));
    Word prev;
    for (std::uint64_t b = 1; b <= 60; ++b) {
      const Word out = run_prefix(p, b).output;
      ASSERT_GE(out.size(), prev.size());
      ASSERT_EQ(bitstrings::prefix(out, prev.size()), prev);
      prev = out;
    }
  }
}

TEST(RunPrefix, ConsumedExactness) {
  auto eng = rng::engine(11, rng::kFixtureStream, 0);
  int halted = 0;
  for (int i = 0; i < 3000; ++i) {
    const Word p = random_instructions(eng, 1 + static_cast<int>(eng() % 10));
    const auto o = run_prefix(p, 300);
    if (!o.halted) continue;
    ++halted;
    const Word exact = bitstrings::prefix(p, o.consumed);
    ASSERT_EQ(run_prefix(exact, 300), o);
    for (std::size_t n = 0; n < exact.size(); ++n) {
      const auto s = run_prefix(bitstrings::prefix(exact, n), 300);
      ASSERT_FALSE(s.halted);
      ASSERT_EQ(s.status, RunStatus::Starved);
    }
  }
  EXPECT_GT(halted, 300);
}

TEST(RunPrefix, DigitSourceMatchesWord) {
  // The data bit read by READBIT sits right after the READBIT instruction.
  std::size_t pos = 0;
  const Word full = as::concat({as::readbit(1), Word::binary("1"), as::copy(0, 1), as::out(1),
                                as::halt()});
  bitstrings::DigitSource src(bitstrings::Alphabet(2), [&]() {
    return pos < full.size() ? full[pos++] : 0u;
  });
  const auto a = run_prefix(src, 100);
  const auto b = run_prefix(full, 100);
  EXPECT_TRUE(b.halted);
  EXPECT_EQ(a, b);
}

TEST(RunPrefix, FetchCapFaults) {
  bitstrings::DigitSource ones(bitstrings::Alphabet(2), []() { return 1u; });
  const auto o = run_prefix(ones, 1000, 64);
  EXPECT_FALSE(o.halted);
  // An all-ones source is a NOP chain: it either runs out of budget or hits the cap.
  EXPECT_TRUE(o.status == RunStatus::Fault || o.status == RunStatus::OutOfBudget);
}

TEST(RunPrefix, ConcurrentRunsAreIdentical) {
  auto eng = rng::engine(12, rng::kFixtureStream, 0);
  std::vector<Word> progs;
  for (int i = 0; i < 400; ++i) progs.push_back(random_instructions(eng, 8));
  std::vector<ExecOutcome> serial;
  for (const auto& p : progs) serial.push_back(run_prefix(p, 500));
  std::vector<ExecOutcome> a(progs.size()), b(progs.size());
  std::thread t1([&] { for (std::size_t i = 0; i < progs.size(); ++i) a[i] = run_prefix(progs[i], 500); });
  std::thread t2([&] { for (std::size_t i = 0; i < progs.size(); ++i) b[i] = run_prefix(progs[i], 500); });
  t1.join();
  t2.join();
  EXPECT_EQ(a, serial);
  EXPECT_EQ(b, serial);
}

// Universality fixtures: literal printing in c_lit |w| + c0 bits, and
// n-fold loops in O(log n) bits.
TEST(Universality, LiteralPrintFamily) {
  for (std::uint64_t k = 0; k < 511; ++k) {
    const Word w = bitstrings::lex_string(k);
    const Word p = print_program(w);
    ASSERT_LE(p.size(), constants::kCLit * w.size() + constants::kC0);
    ASSERT_EQ(p.size(), w.size() + print_overhead_bits(w.size()));
    const auto o = run_prefix(p, 10);
    ASSERT_TRUE(o.halted);
    ASSERT_EQ(o.output, w);
    ASSERT_EQ(o.consumed, p.size());
    ASSERT_EQ(o.steps, constants::kTPrint);
  }
}

TEST(Universality, LoopFamily) {
  for (std::uint64_t n = 1; n <= 4096; n = n * 3 + 1) {
    const Word p = repeat_program(n, 1);
    const auto o = run_prefix(p, n + 10);
    ASSERT_TRUE(o.halted);
    ASSERT_EQ(o.output.str(), std::string(n, '1'));
    ASSERT_EQ(o.steps, n + 2);
    ASSERT_EQ(p.size(), 4 + 2 * (std::bit_width(n) - 1) + 1 + 4 + 3);

    const Word c = counter_loop_program(n, 0);
    const auto oc = run_prefix(c, 5 * n + 10);
    ASSERT_TRUE(oc.halted);
    ASSERT_EQ(oc.output.str(), std::string(n, '0'));
    ASSERT_EQ(oc.steps, 5 * n + 2);
  }
}

TEST(Disassemble, Names) {
  const std::string d = disassemble(repeat_program(13, 0));
  EXPECT_NE(d.find("REP 13"), std::string::npos) << d;
  EXPECT_NE(d.find("HALT"), std::string::npos) << d;
}
