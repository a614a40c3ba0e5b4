#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "subspace/bench.hpp"
#include "subspace/errors.hpp"

namespace {

using subspace::bench::ExperimentConfig;
using subspace::bench::ExperimentKind;

struct SubcommandState {
  CLI::App* app = nullptr;
  ExperimentKind kind = ExperimentKind::recover;
  std::string config_path;
  std::vector<std::string> row_flags;
  // Raw string values, applied through the same parser as config files so
  // flags and file entries behave identically.
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  bool unknown_d = false;
};

void add_option(SubcommandState& s, const std::string& flag,
                const std::string& key, const std::string& help) {
  s.options[key] = s.app->add_option(flag, s.values[key], help);
}

void add_common(SubcommandState& s) {
  s.app->add_option("--config", s.config_path,
                    "key=value config file applied before flags");
  add_option(s, "--seed", "seed", "master RNG seed (u64)");
  add_option(s, "--trials", "trials", "number of trials");
  add_option(s, "--out", "out", "output path (CSV, or scene prefix for gen)");
  add_option(s, "--workers", "workers", "worker threads for trials");
}

void add_row_params(SubcommandState& s) {
  add_option(s, "--d", "d", "subspace dimension");
  add_option(s, "--p", "p", "ambient dimension");
  add_option(s, "--m", "m", "inliers per subspace");
  add_option(s, "--m0", "m0", "outlier count");
  s.app
      ->add_option("--row", s.row_flags,
                   "parameter row d,p,m,m0[,K]; repeatable")
      ->take_all();
}

std::string default_out(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::gen: return "scene";
    case ExperimentKind::recover: return "recover.csv";
    case ExperimentKind::cluster: return "cluster.csv";
    case ExperimentKind::sweep: return "sweep.csv";
    case ExperimentKind::theory: return "theory.csv";
  }
  return "out.csv";
}

ExperimentConfig build_config(const SubcommandState& s) {
  ExperimentConfig cfg;
  if (!s.config_path.empty())
    subspace::bench::load_config_file(cfg, s.config_path);
  if (cfg.kind_from_config && cfg.kind != s.kind)
    throw subspace::ConfigError(
        "config file experiment kind conflicts with the subcommand");
  cfg.kind = s.kind;
  if (!s.row_flags.empty()) {
    std::string joined;
    for (const std::string& r : s.row_flags) {
      if (!joined.empty()) joined += ';';
      joined += r;
    }
    subspace::bench::apply_config_entry(cfg, "rows", joined);
  }
  for (const auto& [key, opt] : s.options) {
    if (opt->count() > 0)
      subspace::bench::apply_config_entry(cfg, key, s.values.at(key));
  }
  if (s.unknown_d) subspace::bench::apply_config_entry(cfg, "unknown_d", "1");
  if (cfg.out.empty()) cfg.out = default_out(s.kind);
  return cfg;
}

int run(const SubcommandState& s) {
  const ExperimentConfig cfg = build_config(s);
  const subspace::bench::ExperimentOutput out =
      subspace::bench::run_experiment(cfg);
  switch (cfg.kind) {
    case ExperimentKind::gen:
      std::cout << "scene written to " << cfg.out << ".points.txt\n";
      break;
    case ExperimentKind::recover:
    case ExperimentKind::cluster:
      std::cout << subspace::bench::summary_csv(out.summary);
      std::cout << "per-trial records: " << cfg.out << "\n";
      break;
    case ExperimentKind::sweep:
      std::cout << subspace::bench::sweep_csv(out.sweep);
      break;
    case ExperimentKind::theory:
      std::cout << subspace::bench::theory_csv(out.theory);
      break;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RANSAC-style subspace recovery and clustering benchmark"};
  app.require_subcommand(1);

  std::vector<SubcommandState> subs(5);

  subs[0].kind = ExperimentKind::gen;
  subs[0].app = app.add_subcommand("gen", "generate a scene and write it to files");
  add_common(subs[0]);
  add_row_params(subs[0]);
  add_option(subs[0], "--K", "K", "number of subspaces");
  add_option(subs[0], "--audit-samples", "audit_samples",
             "tuples sampled by the general-position audit (0 disables)");

  subs[1].kind = ExperimentKind::recover;
  subs[1].app = app.add_subcommand("recover", "single-subspace recovery trials");
  add_common(subs[1]);
  add_row_params(subs[1]);
  add_option(subs[1], "--algorithms", "algorithms", "comma list: ransac,hm");
  add_option(subs[1], "--replacement", "replacement", "'with' or 'without'");
  add_option(subs[1], "--cap", "cap", "iteration cap per run");
  add_option(subs[1], "--scene", "scene", "scene file prefix to load");
  add_option(subs[1], "--budget-per-dim", "budget_per_dim",
             "draws per candidate dimension in unknown-d mode");
  add_option(subs[1], "--audit-samples", "audit_samples",
             "tuples sampled by the general-position audit (0 disables)");
  subs[1].app->add_flag("--unknown-d", subs[1].unknown_d,
                        "escalate over candidate dimensions instead of using --d");

  subs[2].kind = ExperimentKind::cluster;
  subs[2].app = app.add_subcommand("cluster", "multi-subspace clustering trials");
  add_common(subs[2]);
  add_row_params(subs[2]);
  add_option(subs[2], "--K", "K", "number of subspaces");
  add_option(subs[2], "--algorithms", "algorithms",
             "comma list: ransac_cluster,hm_cluster,scc");
  add_option(subs[2], "--replacement", "replacement", "'with' or 'without'");
  add_option(subs[2], "--cap", "cap", "iteration cap per run");
  add_option(subs[2], "--c", "c", "tuples drawn for the scc affinity");
  add_option(subs[2], "--scene", "scene", "scene file prefix to load");
  add_option(subs[2], "--audit-samples", "audit_samples",
             "tuples sampled by the general-position audit (0 disables)");

  subs[3].kind = ExperimentKind::sweep;
  subs[3].app = app.add_subcommand(
      "sweep", "empirical vs. theoretical iteration counts over a grid");
  add_common(subs[3]);
  add_option(subs[3], "--d-grid", "d_grid", "comma list of dimensions");
  add_option(subs[3], "--ratio-grid", "ratio_grid", "comma list of n/m ratios");
  add_option(subs[3], "--m", "sweep_m", "inlier count m");
  add_option(subs[3], "--p", "sweep_p", "ambient dimension");
  add_option(subs[3], "--replacement", "replacement", "'with' or 'without'");
  add_option(subs[3], "--cap", "cap",
             "skip cells whose expected iterations exceed this");
  add_option(subs[3], "--audit-samples", "audit_samples",
             "tuples sampled by the general-position audit (0 disables)");

  subs[4].kind = ExperimentKind::theory;
  subs[4].app = app.add_subcommand("theory", "closed-form quantities for parameter rows");
  add_common(subs[4]);
  add_row_params(subs[4]);
  add_option(subs[4], "--K", "K", "number of subspaces");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    for (const SubcommandState& s : subs)
      if (s.app->parsed()) return run(s);
    std::cerr << "no subcommand given\n";
    return 2;
  } catch (const subspace::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const subspace::InvalidInputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const subspace::ContractViolationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const subspace::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const subspace::Error& e) {
    // Budget exhaustion, sampler exhaustion, degenerate scenes, infeasible
    // partitions: the run was legal but could not complete.
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
}
