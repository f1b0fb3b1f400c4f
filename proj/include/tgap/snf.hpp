#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace tgap {

/// Smith normal form U*A*V = D of a dense integer matrix, with U and V
/// unimodular and D diagonal with d_1 | d_2 | ... All arithmetic is exact;
/// intermediates outside the int64 range raise OverflowError.
struct SmithNormalForm {
  std::size_t rows = 0, cols = 0, rank = 0;
  std::vector<std::int64_t> divisors;            // positive, size == rank
  std::vector<std::vector<std::int64_t>> U, V;   // rows x rows, cols x cols
};

SmithNormalForm smith_normal_form(std::vector<std::vector<std::int64_t>> A);

/// Incremental integer row echelon over Z. Rows are inserted one at a time
/// and reduced against the current pivot rows with unimodular operations, so
/// the row lattice of everything inserted is preserved exactly. The sequence
/// of operations depends only on the inserted coefficient rows; it is logged
/// so that a right-hand side can be pushed through the same reduction later
/// (replay_rhs), which is what lets one reduction be reused for many
/// right-hand sides.
class StreamingEchelon {
 public:
  explicit StreamingEchelon(std::size_t ncols);

  using SparseRow = std::vector<std::pair<std::uint32_t, std::int64_t>>;
  void insert(const SparseRow& row);

  std::size_t ncols() const { return ncols_; }
  std::size_t pivot_count() const { return pivot_order_.size(); }

  /// Pivot rows in pivot-column order: a full-row-rank matrix H with the
  /// same row lattice as the inserted rows.
  std::vector<std::vector<std::int64_t>> pivot_matrix() const;

  struct ReplayResult {
    /// RHS entries attached to the pivot rows, in pivot-column order
    /// (aligned with pivot_matrix()).
    std::vector<std::int64_t> pivot_rhs;
    /// RHS entries of inserted rows whose coefficients reduced to zero;
    /// each is a consistency requirement "== 0" for the reduced system.
    std::vector<std::int64_t> zero_rhs;
  };

  /// Push per-inserted-row RHS values through the logged reduction. `rhs`
  /// must list one value per insert() call, in insertion order.
  ReplayResult replay_rhs(const std::vector<std::int64_t>& rhs) const;

 private:
  enum class OpKind : std::uint8_t { Reduce, Combine, Negate, Install, Zero, RowStart };
  struct Op {
    OpKind kind;
    std::uint32_t slot;      // pivot slot (by pivot column)
    std::int64_t a, b;       // Reduce: a = multiplier; Combine: bezout s,t
    std::int64_t c, d;       // Combine: a/g, b/g
  };

  std::size_t ncols_;
  // slot per column (or -1); pivot rows stored per slot
  std::vector<std::int32_t> slot_of_col_;
  std::vector<std::vector<std::int64_t>> pivot_rows_;
  std::vector<std::uint32_t> pivot_col_of_slot_;
  std::vector<std::uint32_t> pivot_order_;  // slots sorted by column, rebuilt lazily
  std::vector<Op> log_;
};

/// Solve a*t == y (mod L) for t; returns (solvable, t). L >= 1, a >= 0.
std::pair<bool, std::int64_t> solve_scalar_mod(std::int64_t a, std::int64_t y, std::uint64_t L);

}  // namespace tgap
