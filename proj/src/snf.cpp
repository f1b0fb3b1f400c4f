#include "tgap/snf.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

#include "tgap/error.hpp"

namespace tgap {

namespace {

std::int64_t checked(__int128 v, const char* where) {
  if (v > INT64_MAX || v < INT64_MIN) throw OverflowError(std::string("integer overflow in ") + where);
  return static_cast<std::int64_t>(v);
}

std::int64_t mul_add(std::int64_t x, std::int64_t a, std::int64_t y) {
  // x + a*y
  return checked(static_cast<__int128>(a) * y + x, "mul_add");
}

// g = s*a + t*b, g > 0 (a, b not both zero)
void xgcd(std::int64_t a, std::int64_t b, std::int64_t& g, std::int64_t& s, std::int64_t& t) {
  std::int64_t r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
  while (r1 != 0) {
    const std::int64_t q = r0 / r1;
    std::int64_t tmp = checked(static_cast<__int128>(r0) - static_cast<__int128>(q) * r1, "xgcd");
    r0 = r1; r1 = tmp;
    tmp = checked(static_cast<__int128>(s0) - static_cast<__int128>(q) * s1, "xgcd");
    s0 = s1; s1 = tmp;
    tmp = checked(static_cast<__int128>(t0) - static_cast<__int128>(q) * t1, "xgcd");
    t0 = t1; t1 = tmp;
  }
  g = r0; s = s0; t = t0;
  if (g < 0) { g = -g; s = -s; t = -t; }
}

}  // namespace

SmithNormalForm smith_normal_form(std::vector<std::vector<std::int64_t>> A) {
  const std::size_t R = A.size();
  const std::size_t C = R ? A[0].size() : 0;
  SmithNormalForm out;
  out.rows = R;
  out.cols = C;
  out.U.assign(R, std::vector<std::int64_t>(R, 0));
  out.V.assign(C, std::vector<std::int64_t>(C, 0));
  for (std::size_t i = 0; i < R; ++i) out.U[i][i] = 1;
  for (std::size_t j = 0; j < C; ++j) out.V[j][j] = 1;
  if (R == 0 || C == 0) return out;

  auto row_axpy = [&](std::size_t dst, std::size_t src, std::int64_t a) {
    for (std::size_t j = 0; j < C; ++j) A[dst][j] = mul_add(A[dst][j], a, A[src][j]);
    for (std::size_t j = 0; j < R; ++j) out.U[dst][j] = mul_add(out.U[dst][j], a, out.U[src][j]);
  };
  auto col_axpy = [&](std::size_t dst, std::size_t src, std::int64_t a) {
    for (std::size_t i = 0; i < R; ++i) A[i][dst] = mul_add(A[i][dst], a, A[i][src]);
    for (std::size_t i = 0; i < C; ++i) out.V[i][dst] = mul_add(out.V[i][dst], a, out.V[i][src]);
  };
  auto row_swap = [&](std::size_t i, std::size_t j) {
    std::swap(A[i], A[j]);
    std::swap(out.U[i], out.U[j]);
  };
  auto col_swap = [&](std::size_t i, std::size_t j) {
    for (std::size_t r = 0; r < R; ++r) std::swap(A[r][i], A[r][j]);
    for (std::size_t r = 0; r < C; ++r) std::swap(out.V[r][i], out.V[r][j]);
  };
  auto row_negate = [&](std::size_t i) {
    for (auto& v : A[i]) v = -v;
    for (auto& v : out.U[i]) v = -v;
  };

  const std::size_t tmax = std::min(R, C);
  auto diagonalize_at = [&](std::size_t t) -> bool {
    // returns false when the trailing submatrix is zero
    std::size_t pi = t, pj = t;
    std::int64_t best = 0;
    for (std::size_t i = t; i < R; ++i)
      for (std::size_t j = t; j < C; ++j)
        if (A[i][j] != 0 && (best == 0 || std::abs(A[i][j]) < best)) {
          best = std::abs(A[i][j]);
          pi = i;
          pj = j;
        }
    if (best == 0) return false;
    if (pi != t) row_swap(t, pi);
    if (pj != t) col_swap(t, pj);
    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < R; ++i) {
        if (A[i][t] == 0) continue;
        if (A[i][t] % A[t][t] != 0) {
          std::int64_t g, s, u;
          xgcd(A[t][t], A[i][t], g, s, u);
          // replace row t by the gcd combination, row i by the complement
          const std::int64_t at = A[t][t] / g, ai = A[i][t] / g;
          for (std::size_t j = 0; j < C; ++j) {
            const std::int64_t rt = checked(static_cast<__int128>(s) * A[t][j] +
                                                static_cast<__int128>(u) * A[i][j], "snf");
            const std::int64_t ri = checked(static_cast<__int128>(at) * A[i][j] -
                                                static_cast<__int128>(ai) * A[t][j], "snf");
            A[t][j] = rt;
            A[i][j] = ri;
          }
          for (std::size_t j = 0; j < R; ++j) {
            const std::int64_t rt = checked(static_cast<__int128>(s) * out.U[t][j] +
                                                static_cast<__int128>(u) * out.U[i][j], "snf");
            const std::int64_t ri = checked(static_cast<__int128>(at) * out.U[i][j] -
                                                static_cast<__int128>(ai) * out.U[t][j], "snf");
            out.U[t][j] = rt;
            out.U[i][j] = ri;
          }
        }
        row_axpy(i, t, -(A[i][t] / A[t][t]));
        clean = false;
      }
      for (std::size_t j = t + 1; j < C; ++j) {
        if (A[t][j] == 0) continue;
        if (A[t][j] % A[t][t] != 0) {
          std::int64_t g, s, u;
          xgcd(A[t][t], A[t][j], g, s, u);
          const std::int64_t at = A[t][t] / g, aj = A[t][j] / g;
          for (std::size_t i = 0; i < R; ++i) {
            const std::int64_t ct = checked(static_cast<__int128>(s) * A[i][t] +
                                                static_cast<__int128>(u) * A[i][j], "snf");
            const std::int64_t cj = checked(static_cast<__int128>(at) * A[i][j] -
                                                static_cast<__int128>(aj) * A[i][t], "snf");
            A[i][t] = ct;
            A[i][j] = cj;
          }
          for (std::size_t i = 0; i < C; ++i) {
            const std::int64_t ct = checked(static_cast<__int128>(s) * out.V[i][t] +
                                                static_cast<__int128>(u) * out.V[i][j], "snf");
            const std::int64_t cj = checked(static_cast<__int128>(at) * out.V[i][j] -
                                                static_cast<__int128>(aj) * out.V[i][t], "snf");
            out.V[i][t] = ct;
            out.V[i][j] = cj;
          }
        }
        col_axpy(j, t, -(A[t][j] / A[t][t]));
        clean = false;
      }
      bool zeroed = true;
      for (std::size_t i = t + 1; i < R && zeroed; ++i) zeroed = A[i][t] == 0;
      for (std::size_t j = t + 1; j < C && zeroed; ++j) zeroed = A[t][j] == 0;
      if (clean || zeroed) {
        if (zeroed) break;
      }
    }
    if (A[t][t] < 0) row_negate(t);
    return true;
  };

  std::size_t rank = 0;
  for (std::size_t t = 0; t < tmax; ++t) {
    if (!diagonalize_at(t)) break;
    rank = t + 1;
  }

  // enforce the divisibility chain d_t | d_{t+1}
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t t = 0; t + 1 < rank; ++t) {
      if (A[t + 1][t + 1] % A[t][t] != 0) {
        col_axpy(t, t + 1, 1);
        for (std::size_t u = t; u < rank; ++u) diagonalize_at(u);
        changed = true;
      }
    }
  }

  out.rank = rank;
  out.divisors.resize(rank);
  for (std::size_t t = 0; t < rank; ++t) out.divisors[t] = A[t][t];
  return out;
}

StreamingEchelon::StreamingEchelon(std::size_t ncols)
    : ncols_(ncols), slot_of_col_(ncols, -1) {}

void StreamingEchelon::insert(const SparseRow& row) {
  log_.push_back({OpKind::RowStart, 0, 0, 0, 0, 0});
  std::vector<std::int64_t> r(ncols_, 0);
  for (const auto& [col, val] : row) r[col] = mul_add(r[col], 1, val);

  std::size_t j = 0;
  for (;;) {
    while (j < ncols_ && r[j] == 0) ++j;
    if (j == ncols_) {
      log_.push_back({OpKind::Zero, 0, 0, 0, 0, 0});
      return;
    }
    const std::int32_t slot = slot_of_col_[j];
    if (slot < 0) {
      if (r[j] < 0) {
        for (auto& v : r) v = -v;
        log_.push_back({OpKind::Negate, 0, 0, 0, 0, 0});
      }
      const std::uint32_t s = static_cast<std::uint32_t>(pivot_rows_.size());
      pivot_rows_.push_back(std::move(r));
      pivot_col_of_slot_.push_back(static_cast<std::uint32_t>(j));
      slot_of_col_[j] = static_cast<std::int32_t>(s);
      pivot_order_.clear();
      log_.push_back({OpKind::Install, s, 0, 0, 0, 0});
      return;
    }
    auto& p = pivot_rows_[slot];
    const std::int64_t a = p[j], b = r[j];
    if (b % a == 0) {
      const std::int64_t mu = b / a;
      for (std::size_t k = j; k < ncols_; ++k) r[k] = mul_add(r[k], -mu, p[k]);
      log_.push_back({OpKind::Reduce, static_cast<std::uint32_t>(slot), mu, 0, 0, 0});
    } else {
      std::int64_t g, s, t;
      xgcd(a, b, g, s, t);
      const std::int64_t ag = a / g, bg = b / g;
      for (std::size_t k = j; k < ncols_; ++k) {
        const std::int64_t np = checked(static_cast<__int128>(s) * p[k] +
                                            static_cast<__int128>(t) * r[k], "echelon");
        const std::int64_t nr = checked(static_cast<__int128>(ag) * r[k] -
                                            static_cast<__int128>(bg) * p[k], "echelon");
        p[k] = np;
        r[k] = nr;
      }
      log_.push_back({OpKind::Combine, static_cast<std::uint32_t>(slot), s, t, ag, bg});
    }
  }
}

std::vector<std::vector<std::int64_t>> StreamingEchelon::pivot_matrix() const {
  std::vector<std::uint32_t> order(pivot_rows_.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::uint32_t x, std::uint32_t y) {
    return pivot_col_of_slot_[x] < pivot_col_of_slot_[y];
  });
  std::vector<std::vector<std::int64_t>> H;
  H.reserve(order.size());
  for (const std::uint32_t s : order) H.push_back(pivot_rows_[s]);
  return H;
}

StreamingEchelon::ReplayResult StreamingEchelon::replay_rhs(
    const std::vector<std::int64_t>& rhs) const {
  std::vector<std::int64_t> slot_rhs(pivot_rows_.size(), 0);
  ReplayResult out;
  std::size_t row_idx = 0;
  std::int64_t cur = 0;
  for (const Op& op : log_) {
    switch (op.kind) {
      case OpKind::RowStart:
        if (row_idx >= rhs.size()) throw PreconditionError("replay_rhs: too few rhs values");
        cur = rhs[row_idx++];
        break;
      case OpKind::Reduce:
        cur = mul_add(cur, -op.a, slot_rhs[op.slot]);
        break;
      case OpKind::Combine: {
        const std::int64_t np = checked(static_cast<__int128>(op.a) * slot_rhs[op.slot] +
                                            static_cast<__int128>(op.b) * cur, "replay");
        const std::int64_t nr = checked(static_cast<__int128>(op.c) * cur -
                                            static_cast<__int128>(op.d) * slot_rhs[op.slot], "replay");
        slot_rhs[op.slot] = np;
        cur = nr;
        break;
      }
      case OpKind::Negate:
        cur = -cur;
        break;
      case OpKind::Install:
        slot_rhs[op.slot] = cur;
        break;
      case OpKind::Zero:
        out.zero_rhs.push_back(cur);
        break;
    }
  }
  if (row_idx != rhs.size()) throw PreconditionError("replay_rhs: too many rhs values");

  std::vector<std::uint32_t> order(pivot_rows_.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::uint32_t x, std::uint32_t y) {
    return pivot_col_of_slot_[x] < pivot_col_of_slot_[y];
  });
  out.pivot_rhs.reserve(order.size());
  for (const std::uint32_t s : order) out.pivot_rhs.push_back(slot_rhs[s]);
  return out;
}

std::pair<bool, std::int64_t> solve_scalar_mod(std::int64_t a, std::int64_t y, std::uint64_t L) {
  const std::int64_t l = static_cast<std::int64_t>(L);
  a = ((a % l) + l) % l;
  y = ((y % l) + l) % l;
  const std::int64_t g = a == 0 ? l : std::gcd(a, l);
  if (y % g != 0) return {false, 0};
  const std::int64_t lp = l / g;
  if (lp == 1) return {true, 0};
  std::int64_t gg, s, t;
  xgcd(a / g, lp, gg, s, t);  // gg == 1
  (void)gg;
  const std::int64_t inv = ((s % lp) + lp) % lp;
  const std::int64_t tval = checked(static_cast<__int128>((y / g) % lp) * inv, "solve_scalar_mod") % lp;
  return {true, tval};
}

}  // namespace tgap
