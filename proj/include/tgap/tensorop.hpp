#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "tgap/genperm.hpp"

namespace tgap {

/// A matrix-free handle: dimension plus apply / adjoint-apply kernels.
struct LinearOperatorHandle {
  std::uint64_t dim = 0;
  std::function<void(std::span<const cdouble>, std::span<cdouble>)> apply;
  std::function<void(std::span<const cdouble>, std::span<cdouble>)> apply_adjoint;
};

/// sum_i A_i (x) conj(B_i) on a d1*d2-dimensional space, never materialized
/// as a matrix. Index convention: component (r, s) lives at r*d2 + s.
///
/// Applying costs O(terms * d1 * d2). Every output entry accumulates its
/// term contributions in ascending term order no matter how the row loop is
/// scheduled, so the parallel kernel, the serial reference kernel, and any
/// thread count produce bitwise-identical results.
class TensorSumOperator {
 public:
  /// Right factors enter conjugated (phases negated at apply time).
  TensorSumOperator(std::vector<GenPermOperator> left, std::vector<GenPermOperator> right);

  std::uint32_t d1() const { return d1_; }
  std::uint32_t d2() const { return d2_; }
  std::uint64_t dim() const { return std::uint64_t(d1_) * d2_; }
  std::size_t terms() const { return fwd_.size(); }

  void apply(std::span<const cdouble> in, std::span<cdouble> out) const;
  void apply_serial(std::span<const cdouble> in, std::span<cdouble> out) const;
  void apply_adjoint(std::span<const cdouble> in, std::span<cdouble> out) const;
  void apply_adjoint_serial(std::span<const cdouble> in, std::span<cdouble> out) const;

  LinearOperatorHandle handle() const;
  LinearOperatorHandle handle_serial() const;

  /// Entrywise complex conjugate of the whole sum (same singular values).
  TensorSumOperator conjugated() const;

  /// The explicit Kronecker-sum matrix; guarded by dim() <= cap (the full
  /// matrix has dim()^2 entries).
  Eigen::MatrixXcd dense(std::uint64_t cap = 2048) const;

  const std::vector<GenPermOperator>& left_ops() const { return left_; }
  const std::vector<GenPermOperator>& right_ops() const { return right_; }

 private:
  struct Term {
    std::vector<std::uint32_t> inv_left;     // output row -> source row
    std::vector<std::uint32_t> perm_right;   // source col -> output col
    std::vector<cdouble> phase_left;         // indexed by source row
    std::vector<cdouble> phase_right;        // indexed by source col (conj applied)
  };

  template <bool Parallel>
  void run(const std::vector<Term>& terms, std::span<const cdouble> in,
           std::span<cdouble> out) const;

  std::uint32_t d1_ = 0, d2_ = 0;
  std::vector<GenPermOperator> left_, right_;
  std::vector<Term> fwd_, adj_;
};

/// sum_i pi_a(w_i) (x) conj(pi_b(w_i)) with the words reduced in each group.
TensorSumOperator tensor_sum(const ProjectiveRep& a, const ProjectiveRep& b,
                             const std::vector<Word>& words);

/// Single-group sum sum_i pi(w_i) (trivial right factor).
TensorSumOperator operator_sum(const ProjectiveRep& a, const std::vector<Word>& words);

}  // namespace tgap
