#pragma once

#include "jordantp/core.hpp"

#include <string>
#include <vector>

namespace jordantp {

/// Outcome of one verifier. `defect` is the measured quantity and
/// `tolerance` its bound; passed is exactly defect <= tolerance.
struct Check {
  std::string name;
  bool passed = true;
  double defect = 0.0;
  double tolerance = 0.0;
  std::optional<Element> witness;
  std::string note;

  static Check measure(std::string name, double defect, double tolerance, std::string note = {},
                       std::optional<Element> witness = std::nullopt) {
    Check c{std::move(name), false, defect, tolerance, std::move(witness), std::move(note)};
    c.passed = std::isfinite(defect) && defect <= tolerance;
    return c;
  }

  /// A check whose hypotheses do not apply to the model.
  static Check skipped(std::string name, std::string reason) {
    return Check{std::move(name), true, 0.0, 0.0, std::nullopt, "skipped: " + std::move(reason)};
  }
};

struct VerificationReport {
  ModelDescriptor model;
  std::string suite;
  std::uint64_t seed = 0;
  int trials = 0;
  std::vector<Check> checks;
  std::int64_t wall_time_ms = 0;

  bool all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
  }
  const Check* find(std::string_view name) const {
    for (const auto& c : checks) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }
};

}  // namespace jordantp
