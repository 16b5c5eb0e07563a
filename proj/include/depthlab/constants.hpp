#pragma once

// Pinned constants. Every report echoes the ones its verdicts use.

#include <cstdint>

namespace depthlab::constants {

// Literal printing on depthlab-isa/1: |print_program(x)| <= c_lit |x| + c0 for |x| <= 8.
inline constexpr std::uint64_t kCLit = 1;
inline constexpr std::uint64_t kC0 = 8;
// |I_bound(x) - K_bound(x)| <= 2 log2(|x| + 1) + c_gap for |x| <= 8 at (16, 256).
inline constexpr double kCGap = 2;
// Halting time of every literal print program.
inline constexpr std::uint64_t kTPrint = 1;
// depth(x, s) <= T_print(x) + c_slack is the shallow criterion.
inline constexpr std::uint64_t kCSlack = 0;

inline constexpr double kWeakThreshold = 0.5;
inline constexpr double kChaoticFraction = 0.9;
inline constexpr double kProxyAlpha = 0.01;
inline constexpr unsigned kBlockFrequencyM = 128;
inline constexpr double kChaosThreshold = 0.1;

}  // namespace depthlab::constants
