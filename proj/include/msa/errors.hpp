#pragma once

#include <stdexcept>

namespace msa {

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BracketError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// A design threshold fell outside its validity window (success floor vs the
// noise-only success probability, delay ceiling vs the noise-only delay).
struct WindowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EmptyInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoDeliveredPackets : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateVariance : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace msa
