#pragma once

#include <cstdint>
#include <vector>

#include "bttb/induction.hpp"
#include "bttb/oracle.hpp"
#include "bttb/predictor.hpp"

namespace bttb {

struct LeafCheck {
  NodeId leaf = 0;
  bool pass = false;
  Prediction tree_result;
  OracleResult oracle_result;
};

/// Cross-checks the backtrack resolution of every leaf against the
/// brute-force oracle run on the same path constraints. Both sides get
/// identically seeded rng streams, so labels must match when resolution is
/// deterministic, and the surviving candidate sets must match when both fall
/// back to a random pick.
std::vector<LeafCheck> verify_against_oracle(const Tree& tree, const Dataset& dataset,
                                             std::uint64_t seed);

}  // namespace bttb
