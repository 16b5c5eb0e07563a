#include "depthlab/error.hpp"

namespace depthlab {

namespace {

std::string join_items(const std::vector<std::string>& items) {
  std::string msg = "validation failed";
  for (const auto& item : items) msg += "\n  - " + item;
  return msg;
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> items)
    : Error(join_items(items)), items_(std::move(items)) {}

WorkCeilingExceeded::WorkCeilingExceeded(double estimated_cost, double ceiling)
    : Error("enumeration cost estimate " + std::to_string(estimated_cost) +
            " exceeds work ceiling " + std::to_string(ceiling)),
      estimated_cost_(estimated_cost),
      ceiling_(ceiling) {}

PrecisionError::PrecisionError(std::uint64_t required_bits, std::uint64_t available_bits)
    : Error("insufficient precision: " + std::to_string(required_bits) + " bits required, " +
            std::to_string(available_bits) + " available"),
      required_(required_bits) {}

}  // namespace depthlab
