#include "tgap/genperm.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>

#include "tgap/error.hpp"

namespace tgap {

namespace {

std::int64_t mod_pos(std::int64_t v, std::uint64_t L) {
  const std::int64_t l = static_cast<std::int64_t>(L);
  return ((v % l) + l) % l;
}

std::uint64_t unify_order(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t l = std::lcm(a, b);
  if (l > 1'000'000'000ull) throw CapExceededError("phase order lcm too large");
  return l;
}

}  // namespace

GenPermOperator GenPermOperator::identity(std::uint32_t dim, std::uint64_t order) {
  GenPermOperator a;
  a.dim = dim;
  a.order = order;
  a.perm.resize(dim);
  for (std::uint32_t j = 0; j < dim; ++j) a.perm[j] = j;
  a.phase.assign(dim, 0);
  return a;
}

void GenPermOperator::validate() const {
  if (perm.size() != dim || phase.size() != dim)
    throw PreconditionError("GenPermOperator: inconsistent sizes");
  std::vector<bool> hit(dim, false);
  for (std::uint32_t j = 0; j < dim; ++j) {
    if (perm[j] >= dim || hit[perm[j]])
      throw PreconditionError("GenPermOperator: perm is not a bijection");
    hit[perm[j]] = true;
    if (phase[j] < 0 || static_cast<std::uint64_t>(phase[j]) >= order)
      throw PreconditionError("GenPermOperator: phase out of range");
  }
}

GenPermOperator op_compose(const GenPermOperator& A, const GenPermOperator& B) {
  if (A.dim != B.dim) throw PreconditionError("op_compose: dimension mismatch");
  const std::uint64_t L = unify_order(A.order, B.order);
  const std::int64_t la = static_cast<std::int64_t>(L / A.order);
  const std::int64_t lb = static_cast<std::int64_t>(L / B.order);
  GenPermOperator C;
  C.dim = A.dim;
  C.order = L;
  C.perm.resize(A.dim);
  C.phase.resize(A.dim);
  for (std::uint32_t j = 0; j < A.dim; ++j) {
    const std::uint32_t mid = B.perm[j];
    C.perm[j] = A.perm[mid];
    C.phase[j] = mod_pos(lb * B.phase[j] + la * A.phase[mid], L);
  }
  return C;
}

GenPermOperator op_adjoint(const GenPermOperator& A) {
  GenPermOperator C;
  C.dim = A.dim;
  C.order = A.order;
  C.perm.resize(A.dim);
  C.phase.resize(A.dim);
  for (std::uint32_t j = 0; j < A.dim; ++j) {
    C.perm[A.perm[j]] = j;
    C.phase[A.perm[j]] = mod_pos(-A.phase[j], A.order);
  }
  return C;
}

GenPermOperator op_scale_phase(const GenPermOperator& A, std::int64_t q, std::uint64_t q_order) {
  const std::uint64_t L = unify_order(A.order, q_order);
  const std::int64_t la = static_cast<std::int64_t>(L / A.order);
  const std::int64_t lq = static_cast<std::int64_t>(L / q_order);
  GenPermOperator C = A;
  C.order = L;
  for (auto& p : C.phase) p = mod_pos(la * p + lq * q, L);
  return C;
}

GenPermOperator op_conj(const GenPermOperator& A) {
  GenPermOperator C = A;
  for (auto& p : C.phase) p = mod_pos(-p, A.order);
  return C;
}

bool op_equal(const GenPermOperator& A, const GenPermOperator& B) {
  if (A.dim != B.dim || A.perm != B.perm) return false;
  const std::uint64_t L = unify_order(A.order, B.order);
  const std::int64_t la = static_cast<std::int64_t>(L / A.order);
  const std::int64_t lb = static_cast<std::int64_t>(L / B.order);
  for (std::uint32_t j = 0; j < A.dim; ++j)
    if (mod_pos(la * A.phase[j], L) != mod_pos(lb * B.phase[j], L)) return false;
  return true;
}

std::shared_ptr<const std::vector<cdouble>> phase_table(std::uint64_t order) {
  static std::mutex mu;
  static std::map<std::uint64_t, std::shared_ptr<const std::vector<cdouble>>> cache;
  std::lock_guard lock(mu);
  auto& entry = cache[order];
  if (!entry) {
    auto tab = std::make_shared<std::vector<cdouble>>(order);
    for (std::uint64_t q = 0; q < order; ++q) {
      const double ang = 2.0 * std::numbers::pi * static_cast<double>(q) / static_cast<double>(order);
      (*tab)[q] = {std::cos(ang), std::sin(ang)};
    }
    entry = std::move(tab);
  }
  return entry;
}

std::vector<cdouble> op_apply(const GenPermOperator& A, std::span<const cdouble> v) {
  if (v.size() != A.dim) throw PreconditionError("op_apply: dimension mismatch");
  const auto tab = phase_table(A.order);
  std::vector<cdouble> out(A.dim);
  for (std::uint32_t j = 0; j < A.dim; ++j) out[A.perm[j]] = (*tab)[A.phase[j]] * v[j];
  return out;
}

Eigen::MatrixXcd op_dense(const GenPermOperator& A) {
  const auto tab = phase_table(A.order);
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(A.dim, A.dim);
  for (std::uint32_t j = 0; j < A.dim; ++j) M(A.perm[j], j) = (*tab)[A.phase[j]];
  return M;
}

TraceInfo op_trace(const GenPermOperator& A) {
  TraceInfo info;
  const auto tab = phase_table(A.order);
  for (std::uint32_t j = 0; j < A.dim; ++j)
    if (A.perm[j] == j) {
      ++info.fixed_points;
      if (A.phase[j] != 0) info.all_fixed_phases_zero = false;
      info.value += (*tab)[A.phase[j]];
    }
  return info;
}

GenPermOperator ProjectiveRep::op(const GroupElement& g) const {
  const auto& G = *group;
  const std::size_t n = G.size();
  GenPermOperator A;
  A.dim = static_cast<std::uint32_t>(n);
  A.order = cocycle.order;
  A.perm.resize(n);
  A.phase.resize(n);
  for (std::uint32_t j = 0; j < n; ++j) {
    const GroupElement& h = G.at(j);
    A.perm[j] = G.index_of(G.mul(g, h));
    A.phase[j] = mod_pos(cocycle.value(g, h), cocycle.order);
  }
  return A;
}

ProjectiveRep regular_rep(std::shared_ptr<const IndexedGroup> G, PhaseCocycle c) {
  if (c.group.get() != G.get() && c.group->descriptor() != G->descriptor())
    throw PreconditionError("regular_rep: cocycle lives on a different group");
  return ProjectiveRep{std::move(G), std::move(c)};
}

ProjectiveRep trivial_rep() {
  auto G = IndexedGroup::full(FiniteRing::zmod(1));
  auto c = trivial_phase_cocycle(G);
  return ProjectiveRep{G, std::move(c)};
}

}  // namespace tgap
