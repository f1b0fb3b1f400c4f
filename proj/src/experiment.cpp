#include "tgap/experiment.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "tgap/error.hpp"
#include "tgap/version.hpp"

namespace tgap {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t ms_since(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
}

std::string seeds_echo(const std::vector<std::uint64_t>& seeds) {
  std::ostringstream out;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (i) out << ",";
    out << seeds[i];
  }
  return out.str();
}

std::string num_echo(double v) { return nlohmann::json(v).dump(); }

std::string spectral_echo(const ExperimentConfig& cfg, std::uint64_t dim) {
  std::ostringstream out;
  out << " --tol " << num_echo(cfg.spectral.tol) << " --max-iters " << cfg.spectral.max_iters
      << " --seeds " << seeds_echo(cfg.spectral.seeds) << " --method "
      << (cfg.method == NormMethod::Auto
              ? "auto"
              : (cfg.method == NormMethod::Power ? "power" : "lanczos"));
  if (cfg.delta) out << " --delta " << num_echo(*cfg.delta);
  (void)dim;
  return out.str();
}

ordered_json estimate_json(const NormEstimate& e) {
  ordered_json j;
  j["value"] = e.value;
  j["residual"] = e.residual;
  j["iterations"] = e.iterations;
  j["seed"] = e.seed;
  j["converged"] = e.converged;
  return j;
}

ordered_json seed_block(const std::vector<NormEstimate>& per_seed) {
  ordered_json arr = ordered_json::array();
  double lo = 0, hi = 0;
  bool first = true;
  for (const auto& e : per_seed) {
    arr.push_back(estimate_json(e));
    if (first) {
      lo = hi = e.value;
      first = false;
    } else {
      lo = std::min(lo, e.value);
      hi = std::max(hi, e.value);
    }
  }
  ordered_json j;
  j["estimates"] = arr;
  const double spread = hi > 0 ? (hi - lo) / hi : 0.0;
  j["relative_spread"] = spread;
  j["agreement_1e-7"] = spread <= 1e-7;
  return j;
}

ordered_json identity_json(const IdentityCheckReport& rep, const IndexedGroup& G) {
  ordered_json j;
  j["ok"] = rep.ok;
  j["mode"] = rep.mode;
  j["checked"] = rep.checked;
  if (rep.violation) {
    ordered_json v = ordered_json::array();
    for (const auto& e : *rep.violation) v.push_back(G.element_str(e));
    j["violation"] = v;
  }
  return j;
}

IdentityCheckReport checked_identity(const PhaseCocycle& c, const ExperimentConfig& cfg) {
  const std::uint64_t n = c.group->size();
  if (n * n * n <= cfg.exhaustive_cap)
    return cocycle_identity_check(c, CheckMode::exhaustive(), cfg.exhaustive_cap);
  return cocycle_identity_check(c, CheckMode::sampled(cfg.samples, 1), cfg.exhaustive_cap);
}

ordered_json coboundary_json(const CoboundaryCertificate& cert, const IndexedGroup& G) {
  ordered_json j;
  j["verdict"] = cert.summary(G);
  j["is_coboundary"] = cert.is_coboundary;
  if (cert.is_coboundary) {
    j["witness_verified"] = cert.witness_verified;
    if (cert.witness.size() <= 256) j["witness"] = cert.witness;
  }
  return j;
}

struct GroupBundle {
  std::shared_ptr<const IndexedGroup> group;
  PhaseCocycle cocycle;
  ProjectiveRep rep;
};

GroupBundle zmod_bundle(std::uint64_t k, const ExperimentConfig& cfg) {
  auto ring = FiniteRing::zmod(k);
  auto G = IndexedGroup::full(ring, cfg.limits);
  auto c = phase_family(extend_to_semidirect(symplectic_cocycle(ring, cfg.limits), G));
  auto rep = regular_rep(G, c);
  return {G, rep.cocycle, rep};
}

ordered_json delta_json(const ExperimentConfig& cfg, int m) {
  ordered_json j;
  const GapBound gb = gap_bound(m, *cfg.delta);
  j["delta"] = gb.delta;
  j["D"] = gb.D;
  j["note"] = "user-supplied delta";
  return j;
}

// Shared body of `norm pair` runs and scan rows.
ordered_json pair_report(std::uint64_t k, std::uint64_t kprime, int m,
                         const ExperimentConfig& cfg, const GroupBundle& a,
                         const GroupBundle& b) {
  const auto start = Clock::now();
  const std::uint64_t d1 = a.group->size(), d2 = b.group->size();
  if (d1 * d2 > cfg.pair_cap)
    throw CapExceededError("norm pair: tensor dimension exceeds pair cap");

  const auto words = generator_words(m);
  const TensorSumOperator op = tensor_sum(a.rep, b.rep, words);
  const auto handle = op.handle();

  std::vector<NormEstimate> per_seed;
  const NormEstimate est = estimate_norm(handle, cfg.method, cfg.spectral, &per_seed);

  ordered_json rep;
  std::ostringstream echo;
  echo << "norm pair --k " << k << " --kprime " << kprime << " --m " << m
       << spectral_echo(cfg, op.dim());
  rep["command"] = echo.str();
  rep["version"] = kVersion;
  rep["k"] = k;
  rep["kprime"] = kprime;
  rep["m"] = m;
  rep["groups"] = ordered_json::array({a.group->descriptor(), b.group->descriptor()});
  rep["dims"] = ordered_json::array({d1, d2});
  rep["dim"] = op.dim();
  rep["diagonal"] = (k == kprime);
  rep["method"] = norm_method_name(cfg.method, op.dim());
  rep["norm"] = estimate_json(est);
  rep["seeds"] = seed_block(per_seed);
  rep["gap"] = m - est.value;

  rep["identity_check"] = ordered_json::object();
  rep["identity_check"]["left"] = identity_json(
      cocycle_identity_check(a.cocycle, CheckMode::sampled(100'000, 1)), *a.group);
  rep["identity_check"]["right"] = identity_json(
      cocycle_identity_check(b.cocycle, CheckMode::sampled(100'000, 1)), *b.group);

  if (k != kprime && k >= 3 && kprime >= 3) {
    const std::uint64_t l = std::lcm(k, kprime);
    auto pull = IndexedGroup::translations(FiniteRing::zmod(l), cfg.limits);
    const PhaseCocycle tc = tensor_cocycle(a.cocycle, b.cocycle, pull);
    ordered_json tj;
    tj["order"] = tc.order;
    tj["pullback"] = pull->descriptor();
    tj["identity_check"] = identity_json(checked_identity(tc, cfg), *pull);
    tj["coboundary"] = coboundary_json(coboundary_decide(tc), *pull);
    rep["tensor_cocycle"] = tj;
  }

  if (op.dim() <= cfg.dense_cap) {
    const double dn = norm_dense(op.dense(cfg.dense_cap), cfg.dense_cap);
    ordered_json dj;
    dj["value"] = dn;
    dj["abs_diff"] = std::abs(dn - est.value);
    rep["dense_check"] = dj;
  }
  if (cfg.delta) rep["delta_bound"] = delta_json(cfg, m);
  rep["wall_ms"] = ms_since(start);
  return rep;
}

}  // namespace

RingSpec RingSpec::from_k(std::uint64_t k) {
  auto ring = FiniteRing::zmod(k);
  return RingSpec{ring, Character::canonical(ring), "--k " + std::to_string(k)};
}

RingSpec RingSpec::from_json(const ordered_json& spec) {
  ordered_json ring_desc = spec.contains("ring") ? spec.at("ring") : spec;
  std::shared_ptr<const FiniteRing> ring;
  const std::string kind = ring_desc.at("kind").get<std::string>();
  if (kind == "zmod") {
    ring = FiniteRing::zmod(ring_desc.at("n").get<std::uint64_t>());
  } else if (kind == "poly") {
    ring = FiniteRing::poly_quotient(ring_desc.at("p").get<std::uint32_t>(),
                                     ring_desc.at("f").get<std::vector<std::uint32_t>>());
  } else {
    throw PreconditionError("ring descriptor: kind must be \"zmod\" or \"poly\"");
  }

  Character chi = ring->kind() == FiniteRing::Kind::ZmodN ? Character::canonical(ring)
                                                          : Character::coefficient(ring, 0);
  if (spec.contains("character")) {
    const auto& cj = spec.at("character");
    const std::string ck = cj.at("kind").get<std::string>();
    if (ck == "canonical")
      chi = Character::canonical(ring);
    else if (ck == "trivial")
      chi = Character::trivial(ring);
    else if (ck == "coeff")
      chi = Character::coefficient(ring, cj.value("j", std::size_t{0}),
                                   cj.value("scale", std::uint32_t{1}));
    else
      throw PreconditionError("character descriptor: unknown kind");
  }

  ordered_json canonical;
  canonical["ring"] = ring->descriptor();
  if (spec.contains("character")) canonical["character"] = spec.at("character");
  return RingSpec{ring, chi, "--ring '" + canonical.dump() + "'"};
}

ordered_json run_group_info(const RingSpec& spec, const ExperimentConfig& cfg) {
  const auto start = Clock::now();
  auto G = IndexedGroup::full(spec.ring, cfg.limits);
  const std::uint64_t r = spec.ring->size();
  const std::uint64_t sl2 = G->size() / (r * r);
  ordered_json rep;
  rep["command"] = "group info " + spec.echo;
  rep["version"] = kVersion;
  rep["group"] = G->descriptor();
  rep["sizes"] = {{"ring", r}, {"translations", r * r}, {"sl2", sl2}, {"group", G->size()}};
  rep["wall_ms"] = ms_since(start);
  return rep;
}

ordered_json run_cocycle(const RingSpec& spec, std::optional<SubgroupKind> subgroup, bool decide,
                         const ExperimentConfig& cfg, const std::string& export_table) {
  const auto start = Clock::now();
  auto G = IndexedGroup::full(spec.ring, cfg.limits);
  const AdditiveCocycle arc = extend_to_semidirect(symplectic_cocycle(spec.ring, cfg.limits), G);
  const PhaseCocycle c = character_compose(arc, spec.character);

  ordered_json rep;
  std::ostringstream echo;
  echo << "cocycle " << spec.echo;
  if (subgroup)
    echo << " --subgroup "
         << (*subgroup == SubgroupKind::Translations ? "translations" : "linear");
  if (decide) echo << " --decide";
  rep["command"] = echo.str();
  rep["version"] = kVersion;
  rep["group"] = G->descriptor();
  rep["cocycle"] = {{"name", c.name}, {"order", c.order}};
  rep["identity_check"] = identity_json(checked_identity(c, cfg), *G);

  const PhaseCocycle* target = &c;
  PhaseCocycle restricted;
  if (subgroup) {
    restricted = restrict_cocycle(c, *subgroup, cfg.limits);
    target = &restricted;
    rep["restriction"] = restricted.group->descriptor();
    if (restricted.group->is_abelian()) {
      const auto sym = symmetry_test(restricted);
      ordered_json sj;
      sj["symmetric"] = sym.symmetric;
      if (sym.witness)
        sj["witness"] = ordered_json::array({restricted.group->element_str(sym.witness->first),
                                             restricted.group->element_str(sym.witness->second)});
      rep["symmetry"] = sj;
    }
  }
  if (decide) rep["coboundary"] = coboundary_json(coboundary_decide(*target), *target->group);
  if (!export_table.empty()) {
    std::ofstream f(export_table);
    if (!f) throw Error("cannot open export file: " + export_table);
    f << cocycle_table_json(*target).dump() << "\n";
    rep["exported_table"] = export_table;
  }
  rep["wall_ms"] = ms_since(start);
  return rep;
}

ordered_json run_norm_single(std::uint64_t k, int m, const ExperimentConfig& cfg) {
  if (m < 2) throw PreconditionError("norm single: m must be >= 2");
  const auto start = Clock::now();
  const GroupBundle gb = zmod_bundle(k, cfg);
  const auto words = generator_words(m);
  const TensorSumOperator op = operator_sum(gb.rep, words);
  const auto handle = op.handle();

  std::vector<NormEstimate> per_seed;
  const NormEstimate est = estimate_norm(handle, cfg.method, cfg.spectral, &per_seed);

  ordered_json rep;
  std::ostringstream echo;
  echo << "norm single --k " << k << " --m " << m << spectral_echo(cfg, op.dim());
  rep["command"] = echo.str();
  rep["version"] = kVersion;
  rep["k"] = k;
  rep["m"] = m;
  rep["group"] = gb.group->descriptor();
  rep["dim"] = op.dim();
  rep["method"] = norm_method_name(cfg.method, op.dim());
  rep["norm"] = estimate_json(est);
  rep["seeds"] = seed_block(per_seed);
  rep["gap"] = m - est.value;
  rep["identity_check"] =
      identity_json(cocycle_identity_check(gb.cocycle, CheckMode::sampled(100'000, 1)), *gb.group);
  if (op.dim() <= cfg.dense_cap) {
    const double dn = norm_dense(op.dense(cfg.dense_cap), cfg.dense_cap);
    ordered_json dj;
    dj["value"] = dn;
    dj["abs_diff"] = std::abs(dn - est.value);
    rep["dense_check"] = dj;
  }
  if (cfg.delta) rep["delta_bound"] = delta_json(cfg, m);
  rep["wall_ms"] = ms_since(start);
  return rep;
}

ordered_json run_norm_pair(std::uint64_t k, std::uint64_t kprime, int m,
                           const ExperimentConfig& cfg) {
  if (m < 2) throw PreconditionError("norm pair: m must be >= 2");
  const GroupBundle a = zmod_bundle(k, cfg);
  const GroupBundle b = kprime == k ? a : zmod_bundle(kprime, cfg);
  return pair_report(k, kprime, m, cfg, a, b);
}

ordered_json run_scan(std::uint64_t kmin, std::uint64_t kmax, int m, const ExperimentConfig& cfg,
                      std::vector<ordered_json>& rows) {
  if (m < 2) throw PreconditionError("scan: m must be >= 2");
  if (kmin < 1 || kmin > kmax) throw PreconditionError("scan: empty grid (kmin > kmax)");
  const auto start = Clock::now();

  std::vector<GroupBundle> bundles;
  for (std::uint64_t k = kmin; k <= kmax; ++k) bundles.push_back(zmod_bundle(k, cfg));

  struct RowSpec {
    std::uint64_t k, kprime;
    std::size_t ia, ib;
  };
  std::vector<RowSpec> specs;
  for (std::uint64_t k = kmin; k <= kmax; ++k)
    for (std::uint64_t kp = k; kp <= kmax; ++kp)
      specs.push_back({k, kp, std::size_t(k - kmin), std::size_t(kp - kmin)});
  for (const auto& s : specs) {
    const std::uint64_t dim = bundles[s.ia].group->size() * bundles[s.ib].group->size();
    if (dim > cfg.pair_cap) throw CapExceededError("scan: tensor dimension exceeds pair cap");
  }

  rows.assign(specs.size(), ordered_json());
  std::string row_error;
  const std::int64_t nrows = static_cast<std::int64_t>(specs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < nrows; ++i) {
    try {
      const auto& s = specs[i];
      rows[i] = pair_report(s.k, s.kprime, m, cfg, bundles[s.ia], bundles[s.ib]);
    } catch (const std::exception& e) {
#pragma omp critical
      row_error = e.what();
    }
  }
  if (!row_error.empty()) throw Error("scan row failed: " + row_error);

  double max_offdiag = 0.0;
  double min_gap = m;
  double diag_max_dev = 0.0;
  bool all_converged = true;
  bool has_offdiag = false;
  for (const auto& r : rows) {
    const double v = r.at("norm").at("value").get<double>();
    all_converged = all_converged && r.at("norm").at("converged").get<bool>();
    if (r.at("diagonal").get<bool>()) {
      diag_max_dev = std::max(diag_max_dev, std::abs(v - m));
    } else {
      has_offdiag = true;
      max_offdiag = std::max(max_offdiag, v);
      min_gap = std::min(min_gap, m - v);
    }
  }

  ordered_json summary;
  std::ostringstream echo;
  echo << "scan --kmin " << kmin << " --kmax " << kmax << " --m " << m << spectral_echo(cfg, 0);
  summary["command"] = echo.str();
  summary["version"] = kVersion;
  summary["m"] = m;
  summary["kmin"] = kmin;
  summary["kmax"] = kmax;
  summary["rows"] = rows.size();
  summary["all_converged"] = all_converged;
  summary["diag_max_deviation"] = diag_max_dev;
  if (has_offdiag) {
    summary["max_offdiag_norm"] = max_offdiag;
    summary["min_gap"] = min_gap;
  }
  if (cfg.delta) summary["delta_bound"] = delta_json(cfg, m);
  summary["wall_ms"] = ms_since(start);
  return summary;
}

ordered_json strip_wall_ms(ordered_json j) {
  if (j.is_object()) {
    j.erase("wall_ms");
    for (auto& [key, value] : j.items()) value = strip_wall_ms(value);
  } else if (j.is_array()) {
    for (auto& value : j) value = strip_wall_ms(value);
  }
  return j;
}

std::string scan_csv(const std::vector<ordered_json>& rows) {
  std::ostringstream out;
  out << "k,kprime,m,dim,norm,residual,iterations,gap,coboundary_verdict,wall_ms\n";
  for (const auto& r : rows) {
    const auto& n = r.at("norm");
    std::string verdict = "none";
    if (r.contains("tensor_cocycle"))
      verdict = r.at("tensor_cocycle").at("coboundary").at("verdict").get<std::string>();
    else if (r.at("diagonal").get<bool>())
      verdict = "diagonal";
    out << r.at("k") << "," << r.at("kprime") << "," << r.at("m") << "," << r.at("dim") << ","
        << nlohmann::json(n.at("value").get<double>()).dump() << ","
        << nlohmann::json(n.at("residual").get<double>()).dump() << "," << n.at("iterations")
        << "," << nlohmann::json(r.at("gap").get<double>()).dump() << ",\"" << verdict << "\","
        << r.at("wall_ms") << "\n";
  }
  return out.str();
}

bool report_converged(const ordered_json& report) {
  if (report.contains("all_converged")) return report.at("all_converged").get<bool>();
  if (report.contains("norm")) return report.at("norm").at("converged").get<bool>();
  return true;
}

}  // namespace tgap
