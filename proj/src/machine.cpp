#include "depthlab/machine.hpp"

#include <sstream>

#include "depthlab/error.hpp"

namespace depthlab::machine {

namespace {

constexpr unsigned kMaxGammaZeros = 62;
constexpr std::uint64_t kMaxLiteral = std::uint64_t{1} << 32;

// Finite program held in memory. In plain mode a LIT swallows the remainder.
class WordSource {
 public:
  explicit WordSource(const Word& bits) : bits_(bits) {}
  int next() { return pos_ < bits_.size() ? bits_[pos_++] : -1; }
  std::uint64_t position() const { return pos_; }
  bool bounded() const { return true; }
  Word rest() {
    Word w(bits_.alphabet(), bits_.raw().substr(pos_));
    pos_ = bits_.size();
    return w;
  }

 private:
  const Word& bits_;
  std::size_t pos_ = 0;
};

class StreamSource {
 public:
  StreamSource(bitstrings::DigitSource& source, std::uint64_t cap) : source_(source), cap_(cap) {}
  int next() {
    if (pos_ >= cap_) {
      capped_ = true;
      return -1;
    }
    ++pos_;
    return source_.next() & 1;
  }
  std::uint64_t position() const { return pos_; }
  bool capped() const { return capped_; }
  Word rest() { return Word(); }

 private:
  bitstrings::DigitSource& source_;
  std::uint64_t cap_;
  std::uint64_t pos_ = 0;
  bool capped_ = false;
};

enum class Flow { Next, Jump, Halt, Stop };

struct Step {
  Flow flow;
  std::uint64_t target = 0;
};

template <class Source>
class Runner {
 public:
  Runner(Source& source, bool plain, std::uint64_t budget)
      : source_(source), plain_(plain), budget_(budget) {}

  ExecOutcome run() {
    std::uint64_t pc = 0;
    for (;;) {
      if (steps_ >= budget_) return stop(RunStatus::OutOfBudget);
      if (!ensure(pc)) return stop(status_);
      const Step r = exec(pc);
      switch (r.flow) {
        case Flow::Next:
        case Flow::Jump:
          pc = r.target;
          break;
        case Flow::Halt: {
          ExecOutcome o;
          o.halted = true;
          o.output = std::move(output_);
          o.steps = steps_;
          o.consumed = source_.position();
          o.status = RunStatus::Halted;
          return o;
        }
        case Flow::Stop:
          return stop(status_);
      }
    }
  }

  // Decodes one instruction at the current fetch position.
  bool fetch(Instruction& ins) {
    int b;
    if ((b = bit()) < 0) return false;
    if (b == 0) {
      ins.op = Opcode::Lit;
      if (plain_) {
        ins.literal = source_.rest();
        return true;
      }
      std::uint64_t n;
      if (!gamma(n)) return false;
      if (n > kMaxLiteral) return fault();
      ins.literal = Word();
      for (std::uint64_t i = 0; i < n; ++i) {
        if ((b = bit()) < 0) return false;
        ins.literal.push_back(static_cast<unsigned>(b));
      }
      return true;
    }
    if ((b = bit()) < 0) return false;
    if (b == 0) {
      if ((b = bit()) < 0) return false;
      if (b == 0) {
        ins.op = Opcode::Halt;
        return true;
      }
      ins.op = Opcode::Out;
      if ((b = bit()) < 0) return false;
      ins.reg = static_cast<std::uint8_t>(b);
      return true;
    }
    if ((b = bit()) < 0) return false;
    if (b == 0) {
      if ((b = bit()) < 0) return false;
      ins.op = b == 0 ? Opcode::Inc : Opcode::Dec;
      return reg(ins.reg);
    }
    if ((b = bit()) < 0) return false;
    if (b == 0) {
      ins.op = Opcode::Rep;
      return gamma(ins.arg);
    }
    if ((b = bit()) < 0) return false;
    if (b == 0) {
      ins.op = Opcode::Jz;
      if (!reg(ins.reg)) return false;
      if ((b = bit()) < 0) return false;
      ins.backward = b == 1;
      return gamma(ins.arg);
    }
    if ((b = bit()) < 0) return false;
    if (b == 0) {
      ins.op = Opcode::Jmp;
      if ((b = bit()) < 0) return false;
      ins.backward = b == 1;
      return gamma(ins.arg);
    }
    if ((b = bit()) < 0) return false;
    if (b == 0) {
      ins.op = Opcode::ReadBit;
      return reg(ins.reg);
    }
    if ((b = bit()) < 0) return false;
    if (b == 0) {
      ins.op = Opcode::Copy;
      return reg(ins.reg) && reg(ins.src);
    }
    ins.op = Opcode::Nop;
    return true;
  }

  RunStatus status() const { return status_; }

 private:
  int bit() {
    const int b = source_.next();
    if (b < 0) {
      if constexpr (requires(Source s) { s.capped(); }) {
        status_ = source_.capped() ? RunStatus::Fault : RunStatus::Starved;
      } else {
        status_ = RunStatus::Starved;
      }
    }
    return b;
  }

  bool fault() {
    status_ = RunStatus::Fault;
    return false;
  }

  bool reg(std::uint8_t& r) {
    const int hi = bit();
    if (hi < 0) return false;
    const int lo = bit();
    if (lo < 0) return false;
    r = static_cast<std::uint8_t>((hi << 1) | lo);
    return true;
  }

  bool gamma(std::uint64_t& value) {
    unsigned zeros = 0;
    int b;
    while ((b = bit()) == 0) {
      if (++zeros > kMaxGammaZeros) return fault();
    }
    if (b < 0) return false;
    value = 1;
    for (unsigned i = 0; i < zeros; ++i) {
      if ((b = bit()) < 0) return false;
      value = (value << 1) | static_cast<std::uint64_t>(b);
    }
    return true;
  }

  bool ensure(std::uint64_t index) {
    while (cache_.size() <= index) {
      Instruction ins;
      if (!fetch(ins)) return false;
      cache_.push_back(std::move(ins));
    }
    return true;
  }

  Step exec(std::uint64_t i) {
    if (steps_ >= budget_) {
      status_ = RunStatus::OutOfBudget;
      return {Flow::Stop};
    }
    ++steps_;
    // Copy out the fields: REP may grow the cache and invalidate references.
    const Opcode op = cache_[i].op;
    const std::uint8_t r = cache_[i].reg;
    const std::uint64_t arg = cache_[i].arg;
    const bool backward = cache_[i].backward;
    switch (op) {
      case Opcode::Halt:
        return {Flow::Halt};
      case Opcode::Lit:
        output_.append(cache_[i].literal);
        return {Flow::Halt};
      case Opcode::Out:
        output_.push_back(r);
        break;
      case Opcode::Inc:
        ++regs_[r];
        break;
      case Opcode::Dec:
        if (regs_[r] > 0) --regs_[r];
        break;
      case Opcode::Copy:
        regs_[r] = regs_[cache_[i].src];
        break;
      case Opcode::Nop:
        break;
      case Opcode::ReadBit: {
        const int b = bit();
        if (b < 0) return {Flow::Stop};
        regs_[r] = static_cast<std::uint64_t>(b);
        break;
      }
      case Opcode::Jz:
        if (regs_[r] != 0) break;
        return {Flow::Jump, jump_target(i, arg, backward)};
      case Opcode::Jmp:
        return {Flow::Jump, jump_target(i, arg, backward)};
      case Opcode::Rep: {
        if (!ensure(i + 1)) return {Flow::Stop};
        Step last{Flow::Next, i + 2};
        for (std::uint64_t k = 0; k < arg; ++k) {
          last = exec(i + 1);
          if (last.flow != Flow::Next) return last;
        }
        return last;
      }
    }
    return {Flow::Next, i + 1};
  }

  static std::uint64_t jump_target(std::uint64_t i, std::uint64_t d, bool backward) {
    if (backward) return i >= d ? i - d : 0;
    return i + d;
  }

  ExecOutcome stop(RunStatus status) {
    ExecOutcome o;
    o.halted = false;
    o.output = std::move(output_);
    o.steps = budget_;
    o.consumed = source_.position();
    o.status = status;
    return o;
  }

  Source& source_;
  bool plain_;
  std::uint64_t budget_;
  std::uint64_t steps_ = 0;
  std::uint64_t regs_[kRegisterCount] = {};
  std::vector<Instruction> cache_;
  Word output_;
  RunStatus status_ = RunStatus::Starved;
};

void require_budget(std::uint64_t budget) {
  if (budget < 1) throw PreconditionError("step budget must be at least 1");
}

std::string register_name(unsigned r) { return "r" + std::to_string(r); }

}  // namespace

const MachineSpec& machine_spec() {
  static const MachineSpec spec{
      "depthlab-isa/1",
      {
          "0 g(n) w         LIT w      emit the n literal bits w and halt",
          "100              HALT",
          "101 b            OUT b      append bit b to the output tape",
          "1100 rr          INC r",
          "1101 rr          DEC r      floor at 0",
          "1110 g(k)        REP k      execute the next instruction k times",
          "11110 rr s g(d)  JZ r d     if r = 0 jump d instructions (s=1 backward)",
          "111110 s g(d)    JMP d      jump d instructions (s=1 backward)",
          "1111110 rr       READBIT r  r <- next program bit",
          "11111110 rr ss   COPY r s   r <- s",
          "11111111         NOP",
      },
      "g(n) is the Elias gamma code of n >= 1 (z zeros, then the z+1 bit binary form of n); "
      "register indices are 2 bits MSB first; in plain mode LIT is '0' followed by the rest of the "
      "program"};
  return spec;
}

ExecOutcome run_prefix(const Word& program, std::uint64_t budget) {
  require_budget(budget);
  WordSource src(program);
  return Runner<WordSource>(src, false, budget).run();
}

ExecOutcome run_prefix(bitstrings::DigitSource& source, std::uint64_t budget,
                       std::uint64_t fetch_cap) {
  require_budget(budget);
  if (source.alphabet().size() != 2) throw PreconditionError("program source must be binary");
  StreamSource src(source, fetch_cap);
  return Runner<StreamSource>(src, false, budget).run();
}

ExecOutcome run_plain(const Word& program, std::uint64_t budget) {
  require_budget(budget);
  WordSource src(program);
  return Runner<WordSource>(src, true, budget).run();
}

std::uint64_t HaltingTime::steps() const {
  if (diverged_) throw PreconditionError("halting time is DIVERGED");
  return steps_;
}

HaltingTime halting_time(const Word& program, std::uint64_t budget) {
  const ExecOutcome o = run_prefix(program, budget);
  if (o.halted && o.consumed == program.size()) return HaltingTime::at(o.steps);
  return HaltingTime::diverged();
}

std::string disassemble(const Word& program) {
  WordSource src(program);
  Runner<WordSource> decoder(src, false, 1);
  std::ostringstream os;
  bool first = true;
  while (src.position() < program.size()) {
    Instruction ins;
    if (!decoder.fetch(ins)) {
      os << (first ? "" : "; ") << "<incomplete>";
      break;
    }
    if (!first) os << "; ";
    first = false;
    const char* dir = ins.backward ? "-" : "+";
    switch (ins.op) {
      case Opcode::Lit: os << "LIT " << ins.literal.str(); break;
      case Opcode::Halt: os << "HALT"; break;
      case Opcode::Out: os << "OUT" << unsigned(ins.reg); break;
      case Opcode::Inc: os << "INC " << register_name(ins.reg); break;
      case Opcode::Dec: os << "DEC " << register_name(ins.reg); break;
      case Opcode::Rep: os << "REP " << ins.arg; break;
      case Opcode::Jz: os << "JZ " << register_name(ins.reg) << " " << dir << ins.arg; break;
      case Opcode::Jmp: os << "JMP " << dir << ins.arg; break;
      case Opcode::ReadBit: os << "READBIT " << register_name(ins.reg); break;
      case Opcode::Copy:
        os << "COPY " << register_name(ins.reg) << " " << register_name(ins.src);
        break;
      case Opcode::Nop: os << "NOP"; break;
    }
  }
  return os.str();
}

namespace assemble {

namespace {

void put_reg(Word& w, unsigned r) {
  if (r >= kRegisterCount) throw PreconditionError("register index out of range");
  w.push_back((r >> 1) & 1);
  w.push_back(r & 1);
}

Word bits(std::string_view text) { return Word::binary(text); }

}  // namespace

Word gamma(std::uint64_t n) {
  if (n == 0) throw PreconditionError("gamma code needs n >= 1");
  int top = 63;
  while (!((n >> top) & 1)) --top;
  Word w;
  for (int i = 0; i < top; ++i) w.push_back(0);
  for (int i = top; i >= 0; --i) w.push_back((n >> i) & 1);
  return w;
}

Word lit(const Word& literal) {
  if (literal.empty()) throw PreconditionError("LIT needs a nonempty literal");
  Word w = bits("0");
  w.append(gamma(literal.size()));
  w.append(literal);
  return w;
}

Word halt() { return bits("100"); }

Word out(unsigned bit) {
  Word w = bits("101");
  w.push_back(bit & 1);
  return w;
}

Word inc(unsigned r) {
  Word w = bits("1100");
  put_reg(w, r);
  return w;
}

Word dec(unsigned r) {
  Word w = bits("1101");
  put_reg(w, r);
  return w;
}

Word rep(std::uint64_t k) {
  Word w = bits("1110");
  w.append(gamma(k));
  return w;
}

Word jz(unsigned r, std::uint64_t distance, bool backward) {
  Word w = bits("11110");
  put_reg(w, r);
  w.push_back(backward ? 1 : 0);
  w.append(gamma(distance));
  return w;
}

Word jmp(std::uint64_t distance, bool backward) {
  Word w = bits("111110");
  w.push_back(backward ? 1 : 0);
  w.append(gamma(distance));
  return w;
}

Word readbit(unsigned r) {
  Word w = bits("1111110");
  put_reg(w, r);
  return w;
}

Word copy(unsigned r, unsigned s) {
  Word w = bits("11111110");
  put_reg(w, r);
  put_reg(w, s);
  return w;
}

Word nop() { return bits("11111111"); }

Word concat(std::initializer_list<Word> parts) {
  Word w;
  for (const auto& p : parts) w.append(p);
  return w;
}

}  // namespace assemble

Word print_program(const Word& x) {
  return x.empty() ? assemble::halt() : assemble::lit(x);
}

Word repeat_program(std::uint64_t n, unsigned bit) {
  return assemble::concat({assemble::rep(n), assemble::out(bit), assemble::halt()});
}

Word counter_loop_program(std::uint64_t n, unsigned bit) {
  Word w;
  for (std::uint64_t i = 0; i < n; ++i) w.append(assemble::inc(0));
  w.append(assemble::jz(0, 4, false));
  w.append(assemble::out(bit));
  w.append(assemble::dec(0));
  w.append(assemble::jmp(3, true));
  w.append(assemble::halt());
  return w;
}

std::uint64_t print_overhead_bits(std::uint64_t n) {
  if (n == 0) return assemble::halt().size();
  return 1 + assemble::gamma(n).size();
}

}  // namespace depthlab::machine
