#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

#include "tgap/group.hpp"

namespace tgap {

/// A normalized 2-cocycle with values in the coefficient ring (trivial group
/// action). Values are evaluated on demand; tables are only materialized for
/// export.
struct AdditiveCocycle {
  std::shared_ptr<const IndexedGroup> group;
  std::function<RingElement(const GroupElement&, const GroupElement&)> value;
  std::string name;
};

/// An additive homomorphism (R, +) -> Z/L. Validated at construction.
struct Character {
  std::shared_ptr<const FiniteRing> ring;
  std::uint64_t order = 1;
  std::function<std::int64_t(RingElement)> map;
  std::string name;

  /// Z/N only: x -> x, order N.
  static Character canonical(std::shared_ptr<const FiniteRing> ring);
  static Character trivial(std::shared_ptr<const FiniteRing> ring);
  /// Polynomial quotients: x -> scale * coeff_j(x) in Z/p.
  static Character coefficient(std::shared_ptr<const FiniteRing> ring, std::size_t j,
                               std::uint32_t scale = 1);
};

/// A 2-cocycle with values in Z/L, interpreted as the phase
/// exp(2*pi*i*value/L). All algebra on phases is exact.
struct PhaseCocycle {
  std::shared_ptr<const IndexedGroup> group;
  std::uint64_t order = 1;
  std::function<std::int64_t(const GroupElement&, const GroupElement&)> value;
  std::string name;
};

/// The symplectic form c((x,y),(z,t)) = x*t - y*z on the translation group
/// R^2, which is a 2-cocycle and SL2(R)-invariant.
AdditiveCocycle symplectic_cocycle(std::shared_ptr<const FiniteRing> ring,
                                   const BuildLimits& limits = {});

/// Extension of an SL2-invariant cocycle on R^2 to R^2 x| SL2(R) by
/// c((a,g),(b,h)) = c(a, g.b). The invariance precondition is checked
/// (exhaustively for small rings, sampled above).
AdditiveCocycle extend_to_semidirect(const AdditiveCocycle& c,
                                     std::shared_ptr<const IndexedGroup> G);

/// Compose an additive cocycle with a character of its coefficient ring.
PhaseCocycle character_compose(const AdditiveCocycle& c, const Character& chi);

/// The order-k family over Z/k: character_compose with the canonical
/// character, i.e. phase exp(2*pi*i*c(g,h)/k).
PhaseCocycle phase_family(const AdditiveCocycle& c);

PhaseCocycle trivial_phase_cocycle(std::shared_ptr<const IndexedGroup> group);

/// Cocycle backed by an explicit row-major table (fixtures, fault injection).
PhaseCocycle table_cocycle(std::shared_ptr<const IndexedGroup> group, std::uint64_t order,
                           std::shared_ptr<const std::vector<std::int64_t>> values,
                           std::string name = "table");

/// The coboundary of b: (g,h) -> b(g) + b(h) - b(gh) mod L, with b given per
/// element index.
PhaseCocycle coboundary_of(std::shared_ptr<const IndexedGroup> group, std::uint64_t order,
                           std::shared_ptr<const std::vector<std::int64_t>> b);

struct CheckMode {
  enum class Type { Exhaustive, Sampled };
  Type type = Type::Exhaustive;
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 1;

  static CheckMode exhaustive() { return {}; }
  static CheckMode sampled(std::uint64_t n, std::uint64_t seed) {
    return {Type::Sampled, n, seed};
  }
};

struct IdentityCheckReport {
  bool ok = true;
  std::string mode;
  std::uint64_t checked = 0;
  std::optional<std::array<GroupElement, 3>> violation;
};

/// Verify c(g,h) + c(gh,k) == c(g,hk) + c(h,k) in Z/L. Exhaustive mode
/// requires |G|^3 <= cap. The reported violation, if any, is the first in
/// row-major triple order regardless of thread count.
IdentityCheckReport cocycle_identity_check(const PhaseCocycle& c, const CheckMode& mode = {},
                                           std::uint64_t exhaustive_cap = 100'000'000);

enum class SubgroupKind { Translations, Linear };
using SubgroupSpec = std::variant<SubgroupKind, std::vector<GroupElement>>;

/// Restriction to a named subgroup or an explicit closed element list.
PhaseCocycle restrict_cocycle(const PhaseCocycle& c, const SubgroupSpec& spec,
                              const BuildLimits& limits = {});

struct SymmetryResult {
  bool symmetric = true;
  /// Present when asymmetric; ordered so that value(first,second) <
  /// value(second,first).
  std::optional<std::pair<GroupElement, GroupElement>> witness;
};

/// On an abelian group every 2-coboundary (trivial action) is symmetric, so
/// an asymmetric pair certifies that c is not a coboundary. Requires an
/// abelian group.
SymmetryResult symmetry_test(const PhaseCocycle& c);

/// The cocycle of a tensor product pi_a (x) conj(pi_b), evaluated on a
/// pullback group over Z/lcm whose coordinatewise reductions land in the two
/// factor groups. Value: (O/Oa)*a - (O/Ob)*b mod O with O = lcm of the
/// orders. Both factor rings must be Z/N with N dividing the pullback
/// modulus.
PhaseCocycle tensor_cocycle(const PhaseCocycle& a, const PhaseCocycle& b,
                            std::shared_ptr<const IndexedGroup> pullback);

/// {"order": L, "group": descriptor, "values": row-major |G|x|G| array}.
nlohmann::ordered_json cocycle_table_json(const PhaseCocycle& c,
                                          std::uint64_t max_entries = 10'000'000);

}  // namespace tgap
