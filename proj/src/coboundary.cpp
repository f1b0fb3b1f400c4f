#include "tgap/coboundary.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <shared_mutex>
#include <sstream>

#include "tgap/error.hpp"
#include "tgap/snf.hpp"

namespace tgap {

namespace {

std::int64_t mod_pos(std::int64_t v, std::uint64_t L) {
  const std::int64_t l = static_cast<std::int64_t>(L);
  return ((v % l) + l) % l;
}

// Everything about the linear system that depends only on the group: the
// product index table, the logged echelon reduction of the coefficient
// matrix, and the SNF of the reduced matrix.
struct GroupSystem {
  std::vector<std::uint32_t> prod;  // row-major |G| x |G| product indices
  StreamingEchelon echelon{0};
  SmithNormalForm snf;
  std::shared_ptr<const IndexedGroup> keepalive;
};

std::shared_ptr<const GroupSystem> group_system(const std::shared_ptr<const IndexedGroup>& G) {
  static std::shared_mutex mu;
  static std::map<const IndexedGroup*, std::shared_ptr<const GroupSystem>> cache;
  {
    std::shared_lock lock(mu);
    const auto it = cache.find(G.get());
    if (it != cache.end()) return it->second;
  }

  const std::size_t n = G->size();
  auto sys = std::make_shared<GroupSystem>();
  sys->keepalive = G;
  sys->prod.resize(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      sys->prod[i * n + j] = G->index_of(G->mul(G->at(i), G->at(j)));

  // unknowns are b on the non-identity elements (column = index - 1)
  sys->echelon = StreamingEchelon(n - 1);
  StreamingEchelon::SparseRow row;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      row.clear();
      if (i > 0) row.emplace_back(static_cast<std::uint32_t>(i - 1), 1);
      if (j > 0) row.emplace_back(static_cast<std::uint32_t>(j - 1), 1);
      const std::uint32_t p = sys->prod[i * n + j];
      if (p > 0) row.emplace_back(p - 1, -1);
      sys->echelon.insert(row);
    }
  sys->snf = smith_normal_form(sys->echelon.pivot_matrix());

  std::unique_lock lock(mu);
  cache.emplace(G.get(), sys);
  return cache.find(G.get())->second;
}

}  // namespace

std::string CoboundaryCertificate::summary(const IndexedGroup& G) const {
  if (is_coboundary) return "Coboundary";
  std::ostringstream out;
  out << "NotCoboundary(";
  if (reason == NotCoboundaryReason::SymmetryViolation) {
    out << "SymmetryViolation";
    if (symmetry_pair)
      out << " at (" << G.element_str(symmetry_pair->first) << ","
          << G.element_str(symmetry_pair->second) << ")";
  } else {
    out << "UnsolvableSystem";
  }
  out << ")";
  return out.str();
}

CoboundaryCertificate coboundary_decide(const PhaseCocycle& c, const CoboundaryOptions& opts) {
  const auto& G = *c.group;
  const std::size_t n = G.size();
  const std::uint64_t L = c.order;
  if (L < 1) throw PreconditionError("coboundary_decide: order must be >= 1");
  if (n > opts.max_unknowns) throw CapExceededError("coboundary_decide: unknown cap exceeded");

  CoboundaryCertificate cert;

  if (opts.use_symmetry_fast_path && G.is_abelian()) {
    const auto sym = symmetry_test(c);
    if (!sym.symmetric) {
      cert.is_coboundary = false;
      cert.reason = NotCoboundaryReason::SymmetryViolation;
      cert.symmetry_pair = sym.witness;
      return cert;
    }
  }

  const auto sys = group_system(c.group);

  // normalize: a cocycle has c(e,h) == c(g,e) == c(e,e) =: gamma for all g,h
  const std::int64_t gamma = mod_pos(c.value(G.identity(), G.identity()), L);

  std::vector<std::int64_t> values(n * n), rhs(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      values[i * n + j] = mod_pos(c.value(G.at(i), G.at(j)), L);
      rhs[i * n + j] = mod_pos(values[i * n + j] - gamma, L);
    }

  const auto replay = sys->echelon.replay_rhs(rhs);
  for (const std::int64_t z : replay.zero_rhs)
    if (mod_pos(z, L) != 0) {
      cert.is_coboundary = false;
      cert.reason = NotCoboundaryReason::UnsolvableSystem;
      return cert;
    }

  const auto& snf = sys->snf;
  const std::size_t r = replay.pivot_rhs.size();
  if (snf.rank != r)
    throw Error("coboundary_decide: reduced matrix unexpectedly rank-deficient");

  // y' = U * pivot_rhs, then solve D t == y' (mod L)
  std::vector<std::int64_t> t(n - 1, 0);
  for (std::size_t i = 0; i < r; ++i) {
    __int128 acc = 0;
    for (std::size_t j = 0; j < r; ++j)
      acc += static_cast<__int128>(snf.U[i][j]) * replay.pivot_rhs[j];
    const std::int64_t yi = mod_pos(static_cast<std::int64_t>(acc % static_cast<__int128>(L)), L);
    const auto [ok, ti] = solve_scalar_mod(snf.divisors[i], yi, L);
    if (!ok) {
      cert.is_coboundary = false;
      cert.reason = NotCoboundaryReason::UnsolvableSystem;
      return cert;
    }
    t[i] = ti;
  }

  // b (on non-identity elements) = V * t, then undo the normalization shift
  cert.witness.assign(n, gamma);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    __int128 acc = 0;
    for (std::size_t j = 0; j + 1 < n; ++j)
      acc += static_cast<__int128>(snf.V[i][j]) * t[j];
    cert.witness[i + 1] =
        mod_pos(static_cast<std::int64_t>(acc % static_cast<__int128>(L)) + gamma, L);
  }
  cert.is_coboundary = true;

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const std::int64_t db =
          cert.witness[i] + cert.witness[j] - cert.witness[sys->prod[i * n + j]];
      if (mod_pos(db, L) != values[i * n + j])
        throw Error("coboundary_decide: witness failed re-verification");
    }
  cert.witness_verified = true;
  return cert;
}

}  // namespace tgap
