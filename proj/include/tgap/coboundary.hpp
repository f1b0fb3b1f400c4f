#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tgap/cocycle.hpp"

namespace tgap {

struct CoboundaryOptions {
  std::uint64_t max_unknowns = 2000;
  /// On abelian groups, return NotCoboundary(SymmetryViolation) without
  /// solving when an asymmetric pair exists.
  bool use_symmetry_fast_path = true;
};

enum class NotCoboundaryReason { SymmetryViolation, UnsolvableSystem };

struct CoboundaryCertificate {
  bool is_coboundary = false;

  /// Coboundary verdicts carry a witness b per element index with
  /// b(g) + b(h) - b(gh) == c(g,h) mod L on every pair, re-verified after
  /// solving.
  std::vector<std::int64_t> witness;
  bool witness_verified = false;

  std::optional<NotCoboundaryReason> reason;
  std::optional<std::pair<GroupElement, GroupElement>> symmetry_pair;

  std::string summary(const IndexedGroup& G) const;
};

/// Exact decision of 2-coboundary membership over Z/L: the linear system
/// b(g) + b(h) - b(gh) == c(g,h) (mod L) in unknowns b (gauge b(e) = 0 after
/// normalizing c) is assembled over all |G|^2 pairs, reduced by unimodular
/// integer row operations, and decided through the Smith normal form of the
/// reduced coefficient matrix lifted over Z. The reduction and SNF depend
/// only on the group, so they are cached per group and reused across
/// cocycles; each decision replays only the right-hand side.
CoboundaryCertificate coboundary_decide(const PhaseCocycle& c, const CoboundaryOptions& opts = {});

}  // namespace tgap
