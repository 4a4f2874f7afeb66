#pragma once

#include <stdexcept>
#include <string>

namespace vela {

enum class AbortReason { density, cfl, pressure };

/// A run stopped because the discrete solution left its admissible regime.
class NumericalAbort : public std::runtime_error {
 public:
  NumericalAbort(AbortReason reason, const std::string& detail)
      : std::runtime_error(label(reason) + (detail.empty() ? "" : ": " + detail)), reason_(reason) {}

  AbortReason reason() const { return reason_; }

  static std::string label(AbortReason r) {
    switch (r) {
      case AbortReason::density: return "density positivity lost";
      case AbortReason::cfl: return "CFL abort";
      case AbortReason::pressure: return "pressure iteration diverged";
    }
    return "numerical abort";
  }

 private:
  AbortReason reason_;
};

/// Invalid run configuration; the message names the key and line.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vela
