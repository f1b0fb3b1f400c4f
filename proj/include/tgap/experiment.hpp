#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tgap/coboundary.hpp"
#include "tgap/spectral.hpp"

namespace tgap {

using ordered_json = nlohmann::ordered_json;

/// Coefficient ring plus the character used to turn additive cocycle values
/// into phases.
struct RingSpec {
  std::shared_ptr<const FiniteRing> ring;
  Character character;
  std::string echo;  // canonical flag text ("--k 3" or "--ring {...}")

  static RingSpec from_k(std::uint64_t k);
  /// Accepts a bare ring descriptor {"kind": ...} or a wrapped
  /// {"ring": {...}, "character": {"kind": "canonical"|"trivial"|"coeff",
  /// "j": 0, "scale": 1}}. Defaults: canonical character for Z/N, the
  /// constant-coefficient functional for polynomial quotients.
  static RingSpec from_json(const ordered_json& spec);
};

struct ExperimentConfig {
  SpectralOptions spectral;
  NormMethod method = NormMethod::Auto;
  std::uint64_t dense_cap = 2000;
  std::uint64_t pair_cap = 10'000'000;
  std::uint64_t samples = 1'000'000;
  std::uint64_t exhaustive_cap = 100'000'000;
  std::optional<double> delta;  // user-supplied; reported next to D(m, delta)
  BuildLimits limits;
};

ordered_json run_group_info(const RingSpec& spec, const ExperimentConfig& cfg);

/// When export_table is nonempty, the (restricted) cocycle's value table is
/// written there in the {"order", "group", "values"} fixture format.
ordered_json run_cocycle(const RingSpec& spec, std::optional<SubgroupKind> subgroup, bool decide,
                         const ExperimentConfig& cfg, const std::string& export_table = "");

ordered_json run_norm_single(std::uint64_t k, int m, const ExperimentConfig& cfg);

ordered_json run_norm_pair(std::uint64_t k, std::uint64_t kprime, int m,
                           const ExperimentConfig& cfg);

/// One row per pair kmin <= k <= k' <= kmax; returns the summary object and
/// fills `rows`. Rows are ordered by (k, k') regardless of scheduling.
ordered_json run_scan(std::uint64_t kmin, std::uint64_t kmax, int m, const ExperimentConfig& cfg,
                      std::vector<ordered_json>& rows);

/// Recursively drop "wall_ms" fields (reports are compared modulo timing).
ordered_json strip_wall_ms(ordered_json j);

/// CSV projection of scan rows: k,kprime,m,dim,norm,residual,iterations,gap,
/// coboundary_verdict,wall_ms.
std::string scan_csv(const std::vector<ordered_json>& rows);

/// True when the report (or summary of a scan) contains only converged norm
/// estimates.
bool report_converged(const ordered_json& report);

}  // namespace tgap
