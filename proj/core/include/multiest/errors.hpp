#pragma once

#include <stdexcept>
#include <string>

namespace multiest {

// Invalid configuration / precondition violations (CLI exit code 2).
struct config_error : std::invalid_argument {
  explicit config_error(const std::string& what) : std::invalid_argument(what) {}
};

// Work-budget and numerical guard violations (CLI exit code 3).
struct guard_error : std::runtime_error {
  explicit guard_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace multiest
