// Command-line experiments: build groups, check/decide cocycles, run norm
// scans. Reports are JSON (JSON-lines for scans) and deterministic for a
// fixed seed set, apart from the wall_ms fields. The worker thread count
// comes from OMP_NUM_THREADS (default: all cores) and never changes results.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tgap/error.hpp"
#include "tgap/experiment.hpp"
#include "tgap/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPrecondition = 2;
constexpr int kExitNonConvergence = 3;

struct CommonArgs {
  std::uint64_t k = 3, kprime = 4;
  int m = 3;
  double tol = 1e-8;
  std::uint64_t max_iters = 20'000;
  std::vector<std::uint64_t> seeds{1, 2, 3};
  std::string method = "auto";
  std::string out;
  std::optional<double> delta;
  std::string ring_json;
  std::uint64_t pair_cap = 10'000'000;
  std::uint64_t dense_cap = 2000;
  std::uint64_t samples = 1'000'000;
};

tgap::ExperimentConfig make_config(const CommonArgs& a) {
  tgap::ExperimentConfig cfg;
  cfg.spectral.tol = a.tol;
  cfg.spectral.max_iters = a.max_iters;
  cfg.spectral.seeds = a.seeds;
  if (a.method == "power")
    cfg.method = tgap::NormMethod::Power;
  else if (a.method == "lanczos")
    cfg.method = tgap::NormMethod::Lanczos;
  else if (a.method == "auto")
    cfg.method = tgap::NormMethod::Auto;
  else
    throw tgap::PreconditionError("--method must be auto|power|lanczos");
  cfg.delta = a.delta;
  cfg.pair_cap = a.pair_cap;
  cfg.dense_cap = a.dense_cap;
  cfg.samples = a.samples;
  return cfg;
}

tgap::RingSpec ring_spec(const CommonArgs& a, bool k_given) {
  if (!a.ring_json.empty())
    return tgap::RingSpec::from_json(tgap::ordered_json::parse(a.ring_json));
  if (!k_given) throw tgap::PreconditionError("either --k or --ring is required");
  return tgap::RingSpec::from_k(a.k);
}

void emit(const tgap::ordered_json& report, const std::string& out_path) {
  const std::string text = report.dump(2);
  std::cout << text << "\n";
  if (!out_path.empty()) {
    std::ofstream f(out_path);
    if (!f) throw tgap::Error("cannot open output file: " + out_path);
    f << text << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"twisted-group cocycles, projective representations and norm gaps"};
  app.set_version_flag("--version", std::string(tgap::kVersion));
  app.require_subcommand(1);

  CommonArgs args;
  std::string subgroup_name;
  bool decide = false;
  std::string csv_path;
  std::uint64_t kmin = 3, kmax = 4;

  auto add_spectral = [&](CLI::App* cmd) {
    cmd->add_option("--tol", args.tol, "residual tolerance on the A*A eigenpair");
    cmd->add_option("--max-iters", args.max_iters, "iteration cap per seed");
    cmd->add_option("--seeds", args.seeds, "seeds for the start vectors")->delimiter(',');
    cmd->add_option("--method", args.method, "auto|power|lanczos");
    cmd->add_option("--delta", args.delta,
                    "user-supplied relative-(T) constant; reports D(m,delta)");
    cmd->add_option("--pair-cap", args.pair_cap, "max tensor dimension d1*d2");
    cmd->add_option("--dense-cap", args.dense_cap, "max dimension for the dense cross-check");
  };

  auto* group = app.add_subcommand("group", "group constructions");
  auto* info = group->add_subcommand("info", "print |R|, |SL2(R)|, |Gamma|");
  auto* info_k = info->add_option("--k", args.k, "build over Z/k");
  info->add_option("--ring", args.ring_json, "ring descriptor JSON");
  info->add_option("--out", args.out, "also write the report here");

  auto* cocycle = app.add_subcommand("cocycle", "build the 2-cocycle and check/decide it");
  auto* coc_k = cocycle->add_option("--k", args.k, "build over Z/k");
  cocycle->add_option("--ring", args.ring_json,
                      "ring descriptor JSON, optionally with a character");
  cocycle->add_option("--subgroup", subgroup_name, "restrict to {translations|linear}");
  cocycle->add_flag("--decide", decide, "run the exact coboundary decision");
  cocycle->add_option("--sample", args.samples, "sample count for large identity checks");
  std::string export_table;
  cocycle->add_option("--export-table", export_table,
                      "write the (restricted) cocycle value table as JSON");
  cocycle->add_option("--out", args.out, "also write the report here");

  auto* norm = app.add_subcommand("norm", "operator norms of generator sums");
  auto* nsingle = norm->add_subcommand("single", "|| sum_i pi_k(g_i) || on l2(Gamma_k)");
  nsingle->add_option("--k", args.k)->required();
  nsingle->add_option("--m", args.m, "tuple length (g1, g2, e, ..., e)");
  nsingle->add_option("--out", args.out);
  add_spectral(nsingle);
  auto* npair = norm->add_subcommand("pair", "|| sum_i pi_k(g_i) (x) conj(pi_k'(g_i)) ||");
  npair->add_option("--k", args.k)->required();
  npair->add_option("--kprime", args.kprime)->required();
  npair->add_option("--m", args.m);
  npair->add_option("--out", args.out);
  add_spectral(npair);

  auto* scan = app.add_subcommand("scan", "norms for all pairs kmin <= k <= k' <= kmax");
  scan->add_option("--kmin", kmin)->required();
  scan->add_option("--kmax", kmax)->required();
  scan->add_option("--m", args.m);
  scan->add_option("--out", args.out, "JSON-lines output (rows then summary)");
  scan->add_option("--csv", csv_path, "CSV projection of the rows");
  add_spectral(scan);

  try {
    app.parse(argc, argv);

    const tgap::ExperimentConfig cfg = make_config(args);

    if (info->parsed()) {
      emit(tgap::run_group_info(ring_spec(args, info_k->count() > 0), cfg), args.out);
      return kExitOk;
    }
    if (cocycle->parsed()) {
      std::optional<tgap::SubgroupKind> sub;
      if (!subgroup_name.empty()) {
        if (subgroup_name == "translations")
          sub = tgap::SubgroupKind::Translations;
        else if (subgroup_name == "linear")
          sub = tgap::SubgroupKind::Linear;
        else
          throw tgap::PreconditionError("--subgroup must be translations or linear");
      }
      emit(tgap::run_cocycle(ring_spec(args, coc_k->count() > 0), sub, decide, cfg, export_table),
           args.out);
      return kExitOk;
    }
    if (nsingle->parsed()) {
      const auto rep = tgap::run_norm_single(args.k, args.m, cfg);
      emit(rep, args.out);
      return tgap::report_converged(rep) ? kExitOk : kExitNonConvergence;
    }
    if (npair->parsed()) {
      const auto rep = tgap::run_norm_pair(args.k, args.kprime, args.m, cfg);
      emit(rep, args.out);
      return tgap::report_converged(rep) ? kExitOk : kExitNonConvergence;
    }
    if (scan->parsed()) {
      std::vector<tgap::ordered_json> rows;
      const auto summary = tgap::run_scan(kmin, kmax, args.m, cfg, rows);
      std::ostringstream lines;
      for (const auto& r : rows) lines << r.dump() << "\n";
      lines << summary.dump() << "\n";
      std::cout << lines.str();
      if (!args.out.empty()) {
        std::ofstream f(args.out);
        if (!f) throw tgap::Error("cannot open output file: " + args.out);
        f << lines.str();
      }
      if (!csv_path.empty()) {
        std::ofstream f(csv_path);
        if (!f) throw tgap::Error("cannot open output file: " + csv_path);
        f << tgap::scan_csv(rows);
      }
      return tgap::report_converged(summary) ? kExitOk : kExitNonConvergence;
    }
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return kExitPrecondition;
  } catch (const tgap::PreconditionError& e) {
    std::cerr << "precondition error: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
