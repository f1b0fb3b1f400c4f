#include <doctest.h>

#include "tgap/error.hpp"
#include "tgap/genperm.hpp"
#include "tgap/rng.hpp"

using namespace tgap;

namespace {

ProjectiveRep standard_rep(std::uint64_t k) {
  auto ring = FiniteRing::zmod(k);
  auto G = IndexedGroup::full(ring);
  return regular_rep(G, phase_family(extend_to_semidirect(symplectic_cocycle(ring), G)));
}

std::vector<cdouble> random_vector(std::size_t n, std::uint64_t seed) {
  std::vector<cdouble> v(n);
  PortableRng rng(seed);
  rng.fill(v);
  return v;
}

}  // namespace

TEST_CASE("op(e) is the identity and trivial cocycles give permutations") {
  const auto rep = standard_rep(3);
  const auto ide = rep.op(rep.group->identity());
  CHECK(op_equal(ide, GenPermOperator::identity(ide.dim, ide.order)));

  const auto perm_rep = regular_rep(rep.group, trivial_phase_cocycle(rep.group));
  PortableRng rng(1);
  for (int t = 0; t < 20; ++t) {
    const auto op = perm_rep.op(rep.group->at(static_cast<std::uint32_t>(rng.below(216))));
    for (const auto p : op.phase) CHECK(p == 0);
    op.validate();
  }
}

TEST_CASE("multiplication law pi(g)pi(h) = c(g,h) pi(gh)") {
  // exhaustively on Gamma_2, sampled on Gamma_3
  {
    const auto rep = standard_rep(2);
    const auto& G = *rep.group;
    std::vector<GenPermOperator> ops;
    for (std::uint32_t i = 0; i < G.size(); ++i) ops.push_back(rep.op_index(i));
    for (std::uint32_t i = 0; i < G.size(); ++i)
      for (std::uint32_t j = 0; j < G.size(); ++j) {
        const auto lhs = op_compose(ops[i], ops[j]);
        const auto rhs = op_scale_phase(ops[G.index_of(G.mul(G.at(i), G.at(j)))],
                                        rep.cocycle.value(G.at(i), G.at(j)), rep.cocycle.order);
        REQUIRE(op_equal(lhs, rhs));
      }
  }
  {
    const auto rep = standard_rep(3);
    const auto& G = *rep.group;
    PortableRng rng(12);
    for (int t = 0; t < 2000; ++t) {
      const auto& g = G.at(static_cast<std::uint32_t>(rng.below(G.size())));
      const auto& h = G.at(static_cast<std::uint32_t>(rng.below(G.size())));
      const auto lhs = op_compose(rep.op(g), rep.op(h));
      const auto rhs =
          op_scale_phase(rep.op(G.mul(g, h)), rep.cocycle.value(g, h), rep.cocycle.order);
      REQUIRE(op_equal(lhs, rhs));
    }
  }
  {
    // larger group: 10^5 random pairs against cached operators
    const auto rep = standard_rep(4);
    const auto& G = *rep.group;
    std::vector<GenPermOperator> ops;
    ops.reserve(G.size());
    for (std::uint32_t i = 0; i < G.size(); ++i) ops.push_back(rep.op_index(i));
    PortableRng rng(13);
    for (int t = 0; t < 100'000; ++t) {
      const std::uint32_t i = static_cast<std::uint32_t>(rng.below(G.size()));
      const std::uint32_t j = static_cast<std::uint32_t>(rng.below(G.size()));
      const auto lhs = op_compose(ops[i], ops[j]);
      const auto rhs = op_scale_phase(ops[G.index_of(G.mul(G.at(i), G.at(j)))],
                                      rep.cocycle.value(G.at(i), G.at(j)), rep.cocycle.order);
      REQUIRE(op_equal(lhs, rhs));
    }
  }
}

TEST_CASE("normalized trace is delta_{g,e}") {
  const auto rep = standard_rep(2);
  const auto& G = *rep.group;
  for (std::uint32_t i = 0; i < G.size(); ++i) {
    const auto tr = op_trace(rep.op_index(i));
    if (i == 0) {
      CHECK(tr.fixed_points == G.size());
      CHECK(tr.all_fixed_phases_zero);
    } else {
      CHECK(tr.fixed_points == 0);  // diagonal entries exist only for g = e
    }
  }
}

TEST_CASE("adjoint, scaling, conjugate") {
  const auto rep = standard_rep(3);
  const auto& G = *rep.group;
  PortableRng rng(3);
  for (int t = 0; t < 50; ++t) {
    const auto A = rep.op(G.at(static_cast<std::uint32_t>(rng.below(G.size()))));
    CHECK(op_equal(op_compose(A, op_adjoint(A)), GenPermOperator::identity(A.dim)));
    CHECK(op_equal(op_compose(op_adjoint(A), A), GenPermOperator::identity(A.dim)));
    CHECK(op_equal(op_scale_phase(A, 0, A.order), A));
    CHECK(op_equal(op_conj(op_conj(A)), A));
  }
}

TEST_CASE("apply: phased basis vectors and norm preservation") {
  const auto rep = standard_rep(3);
  const auto& G = *rep.group;
  const std::size_t n = G.size();
  PortableRng rng(9);

  const auto A = rep.op(G.at(17));
  // a standard basis vector maps to a single phased basis vector
  std::vector<cdouble> e(n, cdouble{0, 0});
  e[5] = 1.0;
  const auto img = op_apply(A, e);
  std::size_t nonzeros = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(img[i]) > 0) ++nonzeros;
  CHECK(nonzeros == 1);
  CHECK(std::abs(std::abs(img[A.perm[5]]) - 1.0) < 1e-15);

  // identity leaves vectors unchanged
  const auto v = random_vector(n, 21);
  const auto ide = GenPermOperator::identity(static_cast<std::uint32_t>(n));
  CHECK(op_apply(ide, v) == v);

  // unitarity: norms preserved to near machine precision
  for (int t = 0; t < 1000; ++t) {
    const auto w = random_vector(n, 1000 + t);
    const auto Aw = op_apply(A, w);
    double nw = 0, nAw = 0;
    for (std::size_t i = 0; i < n; ++i) {
      nw += std::norm(w[i]);
      nAw += std::norm(Aw[i]);
    }
    REQUIRE(std::abs(std::sqrt(nAw) - std::sqrt(nw)) <= 1e-14 * std::sqrt(nw));
  }
}

TEST_CASE("dense form has one nonzero per row and column") {
  const auto rep = standard_rep(2);
  const auto M = op_dense(rep.op(rep.group->at(7)));
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    int in_row = 0, in_col = 0;
    for (Eigen::Index c = 0; c < M.cols(); ++c) {
      if (std::abs(M(r, c)) > 0) ++in_row;
      if (std::abs(M(c, r)) > 0) ++in_col;
    }
    CHECK(in_row == 1);
    CHECK(in_col == 1);
  }
}

TEST_CASE("mixed phase orders unify to the lcm") {
  GenPermOperator a = GenPermOperator::identity(4, 2);
  a.phase = {1, 0, 1, 0};
  GenPermOperator b = GenPermOperator::identity(4, 3);
  b.phase = {1, 2, 0, 0};
  const auto c = op_compose(a, b);
  CHECK(c.order == 6);
  CHECK(c.phase == std::vector<std::int64_t>{5, 4, 3, 0});
  const auto s = op_scale_phase(a, 1, 3);
  CHECK(s.order == 6);
  CHECK(s.phase == std::vector<std::int64_t>{5, 2, 5, 2});
}

TEST_CASE("dimension mismatch is rejected") {
  const auto a = GenPermOperator::identity(3);
  const auto b = GenPermOperator::identity(4);
  CHECK_THROWS_AS(op_compose(a, b), PreconditionError);
  std::vector<cdouble> v(4);
  CHECK_THROWS_AS(op_apply(a, v), PreconditionError);
}
