#pragma once

#include <stdexcept>
#include <string>

namespace cf {

// Input outside an operation's mathematical domain.
struct domain_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Request exceeds a configured enumeration or size guard.
struct capacity_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A truncated oracle cannot represent the request exactly.
struct precision_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or divergent field model.
struct model_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A numeric check could not be carried out reliably
// (oracle noise, non-convexity, non-contraction).
struct diagnostic_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cf
