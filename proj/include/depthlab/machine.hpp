#pragma once

// The reference universal machine: a four-register machine with a
// write-only binary output tape and an on-demand instruction fetch unit.
// docs/isa.md is the normative description of the bit patterns.

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "depthlab/bitstrings.hpp"

namespace depthlab::machine {

using bitstrings::Word;

inline constexpr unsigned kRegisterCount = 4;

enum class Opcode : std::uint8_t { Lit, Halt, Out, Inc, Dec, Rep, Jz, Jmp, ReadBit, Copy, Nop };

struct Instruction {
  Opcode op = Opcode::Nop;
  std::uint8_t reg = 0;  // target register; output bit for OUT
  std::uint8_t src = 0;  // source register for COPY
  bool backward = false;
  std::uint64_t arg = 0;  // repeat count for REP, displacement for jumps
  Word literal;
};

struct MachineSpec {
  std::string version;
  std::vector<std::string> opcode_table;
  std::string operand_encoding;
};

/// The single machine this library computes relative to.
const MachineSpec& machine_spec();

enum class RunStatus : std::uint8_t {
  Halted,
  OutOfBudget,
  Starved,  // the fetch unit asked for a bit past the end of the source
  Fault,    // malformed operand (gamma prefix too long, fetch cap exceeded)
};

struct ExecOutcome {
  bool halted = false;
  Word output;
  /// Executed instructions when halted; the supplied budget otherwise.
  std::uint64_t steps = 0;
  /// Program bits read, code and data together.
  std::uint64_t consumed = 0;
  RunStatus status = RunStatus::Starved;

  bool operator==(const ExecOutcome&) const = default;
};

/// Self-delimiting run: bits are fetched one at a time on demand, so a
/// program halts only if it reads exactly its own bits.
ExecOutcome run_prefix(const Word& program, std::uint64_t budget);

/// Prefix run over an unbounded bit source. `fetch_cap` bounds the bits read.
ExecOutcome run_prefix(bitstrings::DigitSource& source, std::uint64_t budget,
                       std::uint64_t fetch_cap = std::uint64_t{1} << 24);

/// Plain run: the program length is known, so LIT takes the remainder of the
/// program as its literal. Every other instruction behaves as in run_prefix.
ExecOutcome run_plain(const Word& program, std::uint64_t budget);

/// Halting time, or DIVERGED when the program does not halt within budget.
class HaltingTime {
 public:
  static HaltingTime at(std::uint64_t steps) { return HaltingTime(steps, false); }
  static HaltingTime diverged() { return HaltingTime(0, true); }
  bool is_diverged() const { return diverged_; }
  /// Throws PreconditionError on DIVERGED.
  std::uint64_t steps() const;
  bool operator==(const HaltingTime&) const = default;

 private:
  HaltingTime(std::uint64_t steps, bool diverged) : steps_(steps), diverged_(diverged) {}
  std::uint64_t steps_;
  bool diverged_;
};

/// Prefix-mode halting time of exactly this program (all bits consumed).
HaltingTime halting_time(const Word& program, std::uint64_t budget);

/// Decodes the instructions of a program in fetch order, for display.
std::string disassemble(const Word& program);

// Assembler. Each function returns the encoding of one instruction.
namespace assemble {

Word gamma(std::uint64_t n);
Word lit(const Word& literal);
Word halt();
Word out(unsigned bit);
Word inc(unsigned r);
Word dec(unsigned r);
Word rep(std::uint64_t k);
Word jz(unsigned r, std::uint64_t distance, bool backward);
Word jmp(std::uint64_t distance, bool backward);
Word readbit(unsigned r);
Word copy(unsigned r, unsigned s);
Word nop();

Word concat(std::initializer_list<Word> parts);

}  // namespace assemble

/// The literal-print program for x: LIT x, or HALT for the empty word.
Word print_program(const Word& x);

/// REP n; OUT bit; HALT. Size grows as 2 log2 n.
Word repeat_program(std::uint64_t n, unsigned bit);

/// n INCs followed by an OUT/DEC/JZ/JMP counting loop. Size grows linearly.
Word counter_loop_program(std::uint64_t n, unsigned bit);

/// Bits of the literal print overhead for words of length n: |print_program| - n.
std::uint64_t print_overhead_bits(std::uint64_t n);

}  // namespace depthlab::machine
