#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "tgap/cocycle.hpp"

namespace tgap {

using cdouble = std::complex<double>;

/// A unitary with exactly one nonzero entry per row and column: basis vector
/// j maps to exp(2*pi*i*phase[j]/order) times basis vector perm[j]. Phases
/// are exact Z/order values; products, adjoints and scalings stay in this
/// class and never touch floating point.
struct GenPermOperator {
  std::uint32_t dim = 0;
  std::uint64_t order = 1;
  std::vector<std::uint32_t> perm;   // source j -> target perm[j]
  std::vector<std::int64_t> phase;   // in [0, order)

  static GenPermOperator identity(std::uint32_t dim, std::uint64_t order = 1);
  void validate() const;
};

/// Composition A*B as matrices (first apply B).
GenPermOperator op_compose(const GenPermOperator& A, const GenPermOperator& B);
GenPermOperator op_adjoint(const GenPermOperator& A);
/// Multiply by the global phase q over q_order.
GenPermOperator op_scale_phase(const GenPermOperator& A, std::int64_t q, std::uint64_t q_order);
/// Entrywise complex conjugate (phases negated).
GenPermOperator op_conj(const GenPermOperator& A);

/// Equality as operators (phases compared after lifting to a common order).
bool op_equal(const GenPermOperator& A, const GenPermOperator& B);

/// Shared exp(2*pi*i*q/L) table for an order L; one table per order, so
/// identical phases convert to bitwise-identical complex values everywhere.
std::shared_ptr<const std::vector<cdouble>> phase_table(std::uint64_t order);

std::vector<cdouble> op_apply(const GenPermOperator& A, std::span<const cdouble> v);

Eigen::MatrixXcd op_dense(const GenPermOperator& A);

/// Number of diagonal entries and whether all of them carry phase 0 —
/// enough to evaluate the normalized trace exactly.
struct TraceInfo {
  std::uint64_t fixed_points = 0;
  bool all_fixed_phases_zero = true;
  cdouble value{0.0, 0.0};
};
TraceInfo op_trace(const GenPermOperator& A);

/// The twisted regular representation pi_c(g) delta_h = c(g,h) delta_{gh},
/// materialized one operator at a time.
struct ProjectiveRep {
  std::shared_ptr<const IndexedGroup> group;
  PhaseCocycle cocycle;

  GenPermOperator op(const GroupElement& g) const;
  GenPermOperator op_index(std::uint32_t i) const { return op(group->at(i)); }
};

ProjectiveRep regular_rep(std::shared_ptr<const IndexedGroup> G, PhaseCocycle c);

/// The one-dimensional trivial representation (used as the right factor for
/// single-group operator sums).
ProjectiveRep trivial_rep();

}  // namespace tgap
