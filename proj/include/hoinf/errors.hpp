#pragma once

#include <stdexcept>

namespace hoinf {

/// An exhaustive routine refused an input above its enumeration guard.
class GuardExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hoinf
