#pragma once

#include "jordantp/model.hpp"

#include <catch_amalgamated.hpp>

#include <string>
#include <vector>

namespace testutil {

using namespace jordantp;

/// Model specs exercised by the sweeps: one small and one larger instance
/// of every backend.
inline const std::vector<std::string>& sweep_specs() {
  static const std::vector<std::string> specs{"classical:1", "classical:5", "spin:1",    "spin:4",    "sym:2",
                                              "sym:4",       "herm:2",      "herm:3",    "lpq:2:1.5", "lpq:3:2",
                                              "lpq:2:3",     "lpq:4:4",     "polytope:2", "polytope:3"};
  return specs;
}

inline const std::vector<std::string>& symmetric_specs() {
  static const std::vector<std::string> specs{"classical:4", "spin:3", "sym:3", "herm:2", "herm:3", "lpq:2:2", "polytope:3"};
  return specs;
}

inline Rng rng_for(const std::string& label, int trial = 0) {
  return trial_rng(1234, stream_id("tests." + label), static_cast<std::uint64_t>(trial));
}

inline double max_abs_diff(const Element& a, const Element& b) { return (a.coords - b.coords).cwiseAbs().maxCoeff(); }

}  // namespace testutil
