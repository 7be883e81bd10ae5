#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace momnes {

using Vec = std::vector<double>;
using ConstSpan = std::span<const double>;
using MutSpan = std::span<double>;

// Thrown on contract violations (bad dimensions, parameters out of domain).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Thrown when an iterative routine exhausts its iteration cap.
class NoConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace momnes
