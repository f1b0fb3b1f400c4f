#include "tgap/cocycle.hpp"

#include <atomic>
#include <numeric>

#include "tgap/error.hpp"
#include "tgap/rng.hpp"

namespace tgap {

namespace {

std::int64_t mod_pos(std::int64_t v, std::uint64_t L) {
  const std::int64_t l = static_cast<std::int64_t>(L);
  return ((v % l) + l) % l;
}

RingElement symplectic_value(const FiniteRing& R, const GroupElement& g, const GroupElement& h) {
  return R.sub(R.mul(g[0], h[1]), R.mul(g[1], h[0]));
}

}  // namespace

AdditiveCocycle symplectic_cocycle(std::shared_ptr<const FiniteRing> ring,
                                   const BuildLimits& limits) {
  auto group = IndexedGroup::translations(ring, limits);
  auto r = ring;
  return AdditiveCocycle{
      group,
      [r](const GroupElement& g, const GroupElement& h) { return symplectic_value(*r, g, h); },
      "symplectic"};
}

AdditiveCocycle extend_to_semidirect(const AdditiveCocycle& c,
                                     std::shared_ptr<const IndexedGroup> G) {
  auto ring = G->ring_ptr();
  if (!ring->same_as(c.group->ring()))
    throw PreconditionError("extend_to_semidirect: coefficient rings differ");

  // SL2-invariance check: c(g.a, g.b) == c(a, b).
  const auto mats = sl2_enumerate(*ring);
  const std::uint64_t s = ring->size();
  auto vec_elem = [&](RingElement x, RingElement y) {
    return make_elem(x, y, {ring->one(), ring->zero(), ring->zero(), ring->one()});
  };
  auto pair_value = [&](RingElement ax, RingElement ay, RingElement bx, RingElement by) {
    return c.value(vec_elem(ax, ay), vec_elem(bx, by));
  };
  auto act = [&](const Mat2& m, RingElement x, RingElement y) {
    return std::array<RingElement, 2>{ring->add(ring->mul(m[0], x), ring->mul(m[1], y)),
                                      ring->add(ring->mul(m[2], x), ring->mul(m[3], y))};
  };
  auto check_one = [&](const Mat2& m, RingElement ax, RingElement ay, RingElement bx,
                       RingElement by) {
    const auto ga = act(m, ax, ay);
    const auto gb = act(m, bx, by);
    return pair_value(ga[0], ga[1], gb[0], gb[1]) == pair_value(ax, ay, bx, by);
  };
  const std::uint64_t exhaustive_cost = mats.size() * s * s * s * s;
  if (exhaustive_cost <= 2'000'000) {
    for (const Mat2& m : mats)
      for (RingElement ax = 0; ax < s; ++ax)
        for (RingElement ay = 0; ay < s; ++ay)
          for (RingElement bx = 0; bx < s; ++bx)
            for (RingElement by = 0; by < s; ++by)
              if (!check_one(m, ax, ay, bx, by))
                throw PreconditionError("extend_to_semidirect: cocycle is not SL2-invariant");
  } else {
    PortableRng rng(12345);
    for (int t = 0; t < 100'000; ++t) {
      const Mat2& m = mats[rng.below(mats.size())];
      if (!check_one(m, static_cast<RingElement>(rng.below(s)),
                     static_cast<RingElement>(rng.below(s)),
                     static_cast<RingElement>(rng.below(s)),
                     static_cast<RingElement>(rng.below(s))))
        throw PreconditionError("extend_to_semidirect: cocycle is not SL2-invariant");
    }
  }

  auto inner = c.value;
  auto r = ring;
  auto vec_elem_cap = [r](RingElement x, RingElement y) {
    return make_elem(x, y, {r->one(), r->zero(), r->zero(), r->one()});
  };
  return AdditiveCocycle{
      G,
      [r, inner, vec_elem_cap](const GroupElement& x, const GroupElement& y) {
        // c((a,g),(b,h)) = c(a, g.b)
        const Mat2 g = mat_of(x);
        const RingElement bx = y[0], by = y[1];
        const RingElement gbx = r->add(r->mul(g[0], bx), r->mul(g[1], by));
        const RingElement gby = r->add(r->mul(g[2], bx), r->mul(g[3], by));
        return inner(vec_elem_cap(x[0], x[1]), vec_elem_cap(gbx, gby));
      },
      c.name + "|extended"};
}

Character Character::canonical(std::shared_ptr<const FiniteRing> ring) {
  if (ring->kind() != FiniteRing::Kind::ZmodN)
    throw PreconditionError("canonical character: ring must be Z/N");
  const std::uint64_t n = ring->modulus();
  return Character{ring, n, [](RingElement x) { return static_cast<std::int64_t>(x); },
                   "canonical"};
}

Character Character::trivial(std::shared_ptr<const FiniteRing> ring) {
  return Character{ring, 1, [](RingElement) { return std::int64_t{0}; }, "trivial"};
}

Character Character::coefficient(std::shared_ptr<const FiniteRing> ring, std::size_t j,
                                 std::uint32_t scale) {
  if (ring->kind() != FiniteRing::Kind::PolyQuotient)
    throw PreconditionError("coefficient character: ring must be a polynomial quotient");
  if (j >= ring->extension_degree())
    throw PreconditionError("coefficient character: index beyond extension degree");
  const std::uint32_t p = ring->characteristic_p();
  auto rr = ring;
  return Character{ring, p,
                   [rr, j, scale, p](RingElement x) {
                     return static_cast<std::int64_t>((std::uint64_t(rr->poly_coeff(x, j)) * scale) % p);
                   },
                   "coeff" + std::to_string(j)};
}

PhaseCocycle character_compose(const AdditiveCocycle& c, const Character& chi) {
  if (!chi.ring->same_as(c.group->ring()))
    throw PreconditionError("character_compose: character ring differs from cocycle ring");
  // additivity check
  const std::uint64_t s = chi.ring->size();
  const std::uint64_t L = chi.order;
  auto ring = chi.ring;
  auto chk = [&](RingElement x, RingElement y) {
    return mod_pos(chi.map(ring->add(x, y)), L) == mod_pos(chi.map(x) + chi.map(y), L);
  };
  if (s <= 512) {
    for (RingElement x = 0; x < s; ++x)
      for (RingElement y = 0; y < s; ++y)
        if (!chk(x, y)) throw PreconditionError("character_compose: map is not additive");
  } else {
    PortableRng rng(777);
    for (int t = 0; t < 100'000; ++t)
      if (!chk(static_cast<RingElement>(rng.below(s)), static_cast<RingElement>(rng.below(s))))
        throw PreconditionError("character_compose: map is not additive");
  }
  auto inner = c.value;
  auto map = chi.map;
  return PhaseCocycle{c.group, L,
                      [inner, map, L](const GroupElement& g, const GroupElement& h) {
                        return mod_pos(map(inner(g, h)), L);
                      },
                      c.name + "@" + chi.name};
}

PhaseCocycle phase_family(const AdditiveCocycle& c) {
  auto pc = character_compose(c, Character::canonical(c.group->ring_ptr()));
  pc.name = "c" + std::to_string(c.group->ring().modulus()) + "(" + c.name + ")";
  return pc;
}

PhaseCocycle trivial_phase_cocycle(std::shared_ptr<const IndexedGroup> group) {
  return PhaseCocycle{group, 1,
                      [](const GroupElement&, const GroupElement&) { return std::int64_t{0}; },
                      "trivial"};
}

PhaseCocycle table_cocycle(std::shared_ptr<const IndexedGroup> group, std::uint64_t order,
                           std::shared_ptr<const std::vector<std::int64_t>> values,
                           std::string name) {
  const std::size_t n = group->size();
  if (values->size() != n * n)
    throw PreconditionError("table_cocycle: table size must be |G|^2");
  auto g = group;
  auto v = values;
  return PhaseCocycle{group, order,
                      [g, v, n, order](const GroupElement& x, const GroupElement& y) {
                        const std::size_t i = g->index_of(x), j = g->index_of(y);
                        return mod_pos((*v)[i * n + j], order);
                      },
                      std::move(name)};
}

PhaseCocycle coboundary_of(std::shared_ptr<const IndexedGroup> group, std::uint64_t order,
                           std::shared_ptr<const std::vector<std::int64_t>> b) {
  if (b->size() != group->size())
    throw PreconditionError("coboundary_of: b must have one value per element");
  auto g = group;
  auto bb = b;
  return PhaseCocycle{group, order,
                      [g, bb, order](const GroupElement& x, const GroupElement& y) {
                        const std::int64_t bx = (*bb)[g->index_of(x)];
                        const std::int64_t by = (*bb)[g->index_of(y)];
                        const std::int64_t bxy = (*bb)[g->index_of(g->mul(x, y))];
                        return mod_pos(bx + by - bxy, order);
                      },
                      "coboundary"};
}

IdentityCheckReport cocycle_identity_check(const PhaseCocycle& c, const CheckMode& mode,
                                           std::uint64_t exhaustive_cap) {
  const auto& G = *c.group;
  const std::int64_t n = static_cast<std::int64_t>(G.size());
  const std::uint64_t L = c.order;
  IdentityCheckReport rep;

  auto violates = [&](const GroupElement& g, const GroupElement& h, const GroupElement& k) {
    const GroupElement gh = G.mul(g, h);
    const GroupElement hk = G.mul(h, k);
    const std::int64_t lhs = c.value(g, h) + c.value(gh, k);
    const std::int64_t rhs = c.value(g, hk) + c.value(h, k);
    return mod_pos(lhs - rhs, L) != 0;
  };

  if (mode.type == CheckMode::Type::Exhaustive) {
    const std::uint64_t total = static_cast<std::uint64_t>(n) * n * n;
    if (total > exhaustive_cap)
      throw CapExceededError("cocycle_identity_check: exhaustive cap exceeded");
    rep.mode = "exhaustive";
    rep.checked = total;
    std::atomic<std::uint64_t> first_bad{UINT64_MAX};
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n; ++i) {
      if (static_cast<std::uint64_t>(i) * n * n >= first_bad.load(std::memory_order_relaxed))
        continue;
      for (std::int64_t j = 0; j < n; ++j)
        for (std::int64_t k = 0; k < n; ++k)
          if (violates(G.at(i), G.at(j), G.at(k))) {
            const std::uint64_t idx = (std::uint64_t(i) * n + j) * n + k;
            std::uint64_t cur = first_bad.load();
            while (idx < cur && !first_bad.compare_exchange_weak(cur, idx)) {
            }
          }
    }
    if (first_bad.load() != UINT64_MAX) {
      const std::uint64_t idx = first_bad.load();
      rep.ok = false;
      rep.violation = {G.at(idx / (n * n)), G.at((idx / n) % n), G.at(idx % n)};
    }
    return rep;
  }

  rep.mode = "sampled";
  rep.checked = mode.samples;
  PortableRng rng(mode.seed);
  std::vector<std::array<std::uint32_t, 3>> triples(mode.samples);
  for (auto& t : triples)
    t = {static_cast<std::uint32_t>(rng.below(n)), static_cast<std::uint32_t>(rng.below(n)),
         static_cast<std::uint32_t>(rng.below(n))};
  std::atomic<std::uint64_t> first_bad{UINT64_MAX};
  const std::int64_t m = static_cast<std::int64_t>(triples.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t t = 0; t < m; ++t) {
    if (violates(G.at(triples[t][0]), G.at(triples[t][1]), G.at(triples[t][2]))) {
      const std::uint64_t idx = static_cast<std::uint64_t>(t);
      std::uint64_t cur = first_bad.load();
      while (idx < cur && !first_bad.compare_exchange_weak(cur, idx)) {
      }
    }
  }
  if (first_bad.load() != UINT64_MAX) {
    const auto& t = triples[first_bad.load()];
    rep.ok = false;
    rep.violation = {G.at(t[0]), G.at(t[1]), G.at(t[2])};
  }
  return rep;
}

PhaseCocycle restrict_cocycle(const PhaseCocycle& c, const SubgroupSpec& spec,
                              const BuildLimits& limits) {
  std::shared_ptr<const IndexedGroup> sub;
  std::string tag;
  if (std::holds_alternative<SubgroupKind>(spec)) {
    const auto kind = std::get<SubgroupKind>(spec);
    if (kind == SubgroupKind::Translations) {
      sub = IndexedGroup::translations(c.group->ring_ptr(), limits);
      tag = "translations";
    } else {
      sub = IndexedGroup::linear(c.group->ring_ptr(), limits);
      tag = "linear";
    }
    // named subgroups must actually sit inside the parent
    if (c.group->group_kind() != IndexedGroup::Kind::Full &&
        c.group->group_kind() != (kind == SubgroupKind::Translations
                                      ? IndexedGroup::Kind::Translations
                                      : IndexedGroup::Kind::Linear))
      throw PreconditionError("restrict_cocycle: named subgroup not contained in this group");
  } else {
    sub = IndexedGroup::subgroup(c.group->ring_ptr(), std::get<std::vector<GroupElement>>(spec),
                                 c.group.get());
    tag = "custom";
  }
  return PhaseCocycle{sub, c.order, c.value, c.name + "|" + tag};
}

SymmetryResult symmetry_test(const PhaseCocycle& c) {
  const auto& G = *c.group;
  if (!G.is_abelian()) throw PreconditionError("symmetry_test: group is not abelian");
  const std::size_t n = G.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::int64_t vij = mod_pos(c.value(G.at(i), G.at(j)), c.order);
      const std::int64_t vji = mod_pos(c.value(G.at(j), G.at(i)), c.order);
      if (vij != vji) {
        // report the orientation with the smaller phase first, matching the
        // usual presentation of the witness
        if (vij < vji) return {false, std::make_pair(G.at(i), G.at(j))};
        return {false, std::make_pair(G.at(j), G.at(i))};
      }
    }
  return {true, std::nullopt};
}

PhaseCocycle tensor_cocycle(const PhaseCocycle& a, const PhaseCocycle& b,
                            std::shared_ptr<const IndexedGroup> pullback) {
  const auto& ra = a.group->ring();
  const auto& rb = b.group->ring();
  const auto& rp = pullback->ring();
  if (ra.kind() != FiniteRing::Kind::ZmodN || rb.kind() != FiniteRing::Kind::ZmodN ||
      rp.kind() != FiniteRing::Kind::ZmodN)
    throw PreconditionError("tensor_cocycle: all rings must be Z/N reductions of the word group");
  const std::uint64_t na = ra.modulus(), nb = rb.modulus(), np = rp.modulus();
  if (np != std::lcm(na, nb))
    throw PreconditionError("tensor_cocycle: pullback modulus must be lcm of the factors");
  const std::uint64_t order = std::lcm(a.order, b.order);
  const std::int64_t sa = static_cast<std::int64_t>(order / a.order);
  const std::int64_t sb = static_cast<std::int64_t>(order / b.order);
  auto fa = a.value;
  auto fb = b.value;
  auto reduce_to = [](const GroupElement& e, std::uint64_t n) {
    GroupElement r;
    for (std::size_t i = 0; i < 6; ++i) r[i] = static_cast<RingElement>(e[i] % n);
    return r;
  };
  return PhaseCocycle{pullback, order,
                      [fa, fb, sa, sb, na, nb, order, reduce_to](const GroupElement& g,
                                                                 const GroupElement& h) {
                        const std::int64_t va = fa(reduce_to(g, na), reduce_to(h, na));
                        const std::int64_t vb = fb(reduce_to(g, nb), reduce_to(h, nb));
                        return mod_pos(sa * va - sb * vb, order);
                      },
                      a.name + "*conj(" + b.name + ")"};
}

nlohmann::ordered_json cocycle_table_json(const PhaseCocycle& c, std::uint64_t max_entries) {
  const std::size_t n = c.group->size();
  if (static_cast<std::uint64_t>(n) * n > max_entries)
    throw CapExceededError("cocycle_table_json: table too large");
  nlohmann::ordered_json out;
  out["order"] = c.order;
  out["group"] = c.group->descriptor();
  std::vector<std::int64_t> values;
  values.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      values.push_back(mod_pos(c.value(c.group->at(i), c.group->at(j)), c.order));
  out["values"] = values;
  return out;
}

}  // namespace tgap
