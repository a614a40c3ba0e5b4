#include "subspace/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "subspace/clustering.hpp"
#include "subspace/datagen.hpp"
#include "subspace/metrics.hpp"
#include "subspace/recovery.hpp"
#include "subspace/scene_io.hpp"
#include "subspace/theory.hpp"
#include "subspace/trial_runner.hpp"

namespace subspace::bench {
namespace {

/// Angle below which a recovery counts as exact.
constexpr double kExactAngleTol = 1e-8;

// ------------------------------------------------------------ small helpers

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_elapsed(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9f", x);
  return buf;
}

std::string opt_int(const std::optional<int>& v) {
  return v ? std::to_string(*v) : std::string();
}

std::string opt_real(const std::optional<double>& v) {
  return v ? fmt17(*v) : std::string();
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

long long parse_ll(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(trim(value), &pos);
    if (pos != trim(value).size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: bad integer for '" + key + "': " + value);
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(trim(value), &pos);
    if (pos != trim(value).size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: bad unsigned integer for '" + key + "': " + value);
  }
}

int parse_int(const std::string& key, const std::string& value) {
  const long long v = parse_ll(key, value);
  if (v < -(1LL << 31) || v > (1LL << 31) - 1)
    throw ConfigError("config: value out of range for '" + key + "'");
  return static_cast<int>(v);
}

double parse_real(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(trim(value), &pos);
    if (pos != trim(value).size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: bad real for '" + key + "': " + value);
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  throw ConfigError("config: bad boolean for '" + key + "': " + value);
}

TheoryParams& first_row(ExperimentConfig& cfg) {
  if (cfg.rows.empty()) cfg.rows.emplace_back();
  return cfg.rows.front();
}

std::vector<TheoryParams> parse_rows(const std::string& value) {
  std::vector<TheoryParams> rows;
  for (const std::string& part : split(value, ';')) {
    const std::string row = trim(part);
    if (row.empty()) continue;
    const std::vector<std::string> f = split(row, ',');
    if (f.size() != 4 && f.size() != 5)
      throw ConfigError("config: row needs d,p,m,m0[,K]: " + row);
    TheoryParams tp;
    tp.d = parse_int("rows", f[0]);
    tp.p = parse_int("rows", f[1]);
    tp.m = parse_int("rows", f[2]);
    tp.m0 = parse_int("rows", f[3]);
    tp.K = f.size() == 5 ? parse_int("rows", f[4]) : 1;
    rows.push_back(tp);
  }
  if (rows.empty()) throw ConfigError("config: empty rows value");
  return rows;
}

std::string kind_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::gen: return "gen";
    case ExperimentKind::recover: return "recover";
    case ExperimentKind::cluster: return "cluster";
    case ExperimentKind::sweep: return "sweep";
    case ExperimentKind::theory: return "theory";
  }
  return "?";
}

std::string replacement_name(ReplacementMode m) {
  return m == ReplacementMode::with_replacement ? "with" : "without";
}

// --------------------------------------------------------------- statistics

double mean_of(const std::vector<double>& xs) {
  long double s = 0.0L;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : static_cast<double>(s / xs.size());
}

double standard_error(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double mu = mean_of(xs);
  long double ss = 0.0L;
  for (double x : xs) {
    const long double c = x - mu;
    ss += c * c;
  }
  const double var = static_cast<double>(ss / (xs.size() - 1));
  return std::sqrt(var / static_cast<double>(xs.size()));
}

// --------------------------------------------------------------- scenes

/// Where trials get their data: a fresh scene per trial, or one fixed scene
/// loaded from files.
struct SceneSource {
  std::optional<Scene> fixed;
  TheoryParams row;
  bool have_params = true;  // false when a bare point file was loaded
  bool have_truth = true;
  SceneOptions options;

  Scene scene_for_trial(RngStream& rng) const {
    if (fixed) return *fixed;
    return make_scene(row, rng, options);
  }
};

SceneSource scene_source_for(const ExperimentConfig& cfg,
                             const TheoryParams& row) {
  SceneSource src;
  src.row = row;
  src.options.audit_samples = cfg.audit_samples;
  if (cfg.scene_prefix.empty()) {
    src.row.validate();
    return src;
  }
  LoadedScene loaded = read_scene(cfg.scene_prefix);
  Scene scene;
  scene.points = std::move(loaded.points);
  const int n = static_cast<int>(scene.points.rows());
  const int p = static_cast<int>(scene.points.cols());
  scene.labels = std::move(loaded.labels);
  scene.subspaces = std::move(loaded.subspaces);
  src.have_truth = !scene.labels.empty() && !scene.subspaces.empty();
  if (src.have_truth) {
    TheoryParams tp;
    tp.d = scene.subspaces.front().dim();
    tp.p = p;
    tp.K = *std::max_element(scene.labels.begin(), scene.labels.end());
    tp.m = static_cast<int>(std::count(scene.labels.begin(),
                                       scene.labels.end(), 1));
    tp.m0 = static_cast<int>(std::count(scene.labels.begin(),
                                        scene.labels.end(), 0));
    if (tp.K * tp.m + tp.m0 != n)
      throw InvalidInputError(
          "scene file: labels are not K equal groups plus outliers");
    src.row = tp;
  } else {
    // Bare points: keep whatever d the caller supplied, if any.
    src.row.p = p;
    src.have_params = false;
    scene.labels.clear();
    scene.subspaces.clear();
  }
  scene.params = src.row;
  src.fixed = std::move(scene);
  return src;
}

std::vector<int> truth_inliers(const Scene& scene, int label) {
  std::vector<int> out;
  for (std::size_t i = 0; i < scene.labels.size(); ++i)
    if (scene.labels[i] == label) out.push_back(static_cast<int>(i));
  return out;
}

// ------------------------------------------------------------- CSV writing

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing", path);
  out << text;
  if (!out) throw IoError("write failed", path);
}

std::string summary_output_path(const std::string& out) {
  if (out.size() > 4 && out.substr(out.size() - 4) == ".csv")
    return out.substr(0, out.size() - 4) + ".summary.csv";
  return out + ".summary.csv";
}

SummaryRecord summarize(const std::string& experiment,
                        const std::string& algorithm, const TheoryParams& row,
                        bool have_params,
                        const std::vector<TrialRecord>& trials,
                        std::optional<double> theory_iterations) {
  SummaryRecord s;
  s.experiment = experiment;
  s.algorithm = algorithm;
  if (have_params) {
    s.d = row.d;
    s.p = row.p;
    if (experiment == "cluster") s.K = row.K;
    s.m = row.m;
    s.m0 = row.m0;
    s.n = row.n();
  } else {
    s.p = row.p;
  }
  s.trials = static_cast<int>(trials.size());
  std::vector<double> iters, angles, rands, exacts;
  for (const TrialRecord& t : trials) {
    iters.push_back(static_cast<double>(t.iterations));
    if (t.angle) angles.push_back(*t.angle);
    if (t.rand_index_value) rands.push_back(*t.rand_index_value);
    if (t.exact) exacts.push_back(static_cast<double>(*t.exact));
  }
  s.mean_iterations = mean_of(iters);
  s.se_iterations = standard_error(iters);
  s.theory_iterations = theory_iterations;
  if (!angles.empty()) s.mean_angle = mean_of(angles);
  if (!exacts.empty()) s.exact_fraction = mean_of(exacts);
  if (!rands.empty()) s.mean_rand_index = mean_of(rands);
  return s;
}

void write_trial_outputs(const ExperimentConfig& cfg,
                         const ExperimentOutput& out) {
  if (cfg.out.empty()) return;
  write_text_file(cfg.out, trial_csv(out.trials));
  write_text_file(summary_output_path(cfg.out), summary_csv(out.summary));
  write_text_file(cfg.out + ".meta", metadata_text(cfg));
}

}  // namespace

void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value) {
  const std::string k = trim(key);
  if (k == "experiment") {
    const std::string v = trim(value);
    if (v == "gen") cfg.kind = ExperimentKind::gen;
    else if (v == "recover") cfg.kind = ExperimentKind::recover;
    else if (v == "cluster") cfg.kind = ExperimentKind::cluster;
    else if (v == "sweep") cfg.kind = ExperimentKind::sweep;
    else if (v == "theory") cfg.kind = ExperimentKind::theory;
    else throw ConfigError("config: unknown experiment kind: " + v);
    cfg.kind_from_config = true;
  } else if (k == "rows") {
    cfg.rows = parse_rows(value);
  } else if (k == "d") {
    first_row(cfg).d = parse_int(k, value);
  } else if (k == "p") {
    first_row(cfg).p = parse_int(k, value);
  } else if (k == "m") {
    first_row(cfg).m = parse_int(k, value);
  } else if (k == "m0") {
    first_row(cfg).m0 = parse_int(k, value);
  } else if (k == "K") {
    first_row(cfg).K = parse_int(k, value);
  } else if (k == "trials") {
    cfg.trials = parse_int(k, value);
    if (cfg.trials < 1) throw ConfigError("config: trials must be >= 1");
  } else if (k == "seed") {
    cfg.seed = parse_u64(k, value);
  } else if (k == "algorithms") {
    cfg.algorithms.clear();
    for (const std::string& a : split(value, ','))
      if (!trim(a).empty()) cfg.algorithms.push_back(trim(a));
    if (cfg.algorithms.empty()) throw ConfigError("config: empty algorithms");
  } else if (k == "out") {
    cfg.out = trim(value);
  } else if (k == "workers") {
    cfg.workers = parse_int(k, value);
    if (cfg.workers < 1) throw ConfigError("config: workers must be >= 1");
  } else if (k == "replacement") {
    const std::string v = trim(value);
    if (v == "with") cfg.replacement = ReplacementMode::with_replacement;
    else if (v == "without") cfg.replacement = ReplacementMode::without_replacement;
    else throw ConfigError("config: replacement must be 'with' or 'without'");
  } else if (k == "cap") {
    cfg.iteration_cap = parse_ll(k, value);
    if (cfg.iteration_cap < 1) throw ConfigError("config: cap must be >= 1");
  } else if (k == "unknown_d") {
    cfg.unknown_dimension = parse_bool(k, value);
  } else if (k == "budget_per_dim") {
    cfg.budget_per_dim = parse_ll(k, value);
    if (cfg.budget_per_dim < 1)
      throw ConfigError("config: budget_per_dim must be >= 1");
  } else if (k == "c") {
    cfg.affinity_tuples = parse_int(k, value);
    if (cfg.affinity_tuples < 1) throw ConfigError("config: c must be >= 1");
  } else if (k == "d_grid") {
    cfg.sweep_d.clear();
    for (const std::string& v : split(value, ','))
      cfg.sweep_d.push_back(parse_int(k, v));
  } else if (k == "ratio_grid") {
    cfg.sweep_ratio.clear();
    for (const std::string& v : split(value, ','))
      cfg.sweep_ratio.push_back(parse_real(k, v));
  } else if (k == "sweep_m") {
    cfg.sweep_m = parse_int(k, value);
  } else if (k == "sweep_p") {
    cfg.sweep_p = parse_int(k, value);
  } else if (k == "scene") {
    cfg.scene_prefix = trim(value);
  } else if (k == "audit_samples") {
    cfg.audit_samples = parse_int(k, value);
    if (cfg.audit_samples < 0)
      throw ConfigError("config: audit_samples must be >= 0");
  } else {
    throw ConfigError("config: unknown key: " + k);
  }
}

void load_config_file(ExperimentConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file", path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string s = trim(line);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(lineno) +
                        " is not key=value: " + s);
    apply_config_entry(cfg, s.substr(0, eq), s.substr(eq + 1));
  }
}

std::string trial_csv(const std::vector<TrialRecord>& rows) {
  std::ostringstream out;
  out << "experiment,algorithm,d,p,K,m,m0,n,trial,seed,iterations,angle,"
         "rand_index,exact,elapsed_s,replacement_mode\n";
  for (const TrialRecord& r : rows) {
    out << r.experiment << ',' << r.algorithm << ',' << opt_int(r.d) << ','
        << opt_int(r.p) << ',' << opt_int(r.K) << ',' << opt_int(r.m) << ','
        << opt_int(r.m0) << ',' << opt_int(r.n) << ',' << r.trial << ','
        << r.seed << ',' << r.iterations << ',' << opt_real(r.angle) << ','
        << opt_real(r.rand_index_value) << ',' << opt_int(r.exact) << ','
        << fmt_elapsed(r.elapsed_s) << ',' << r.replacement_mode << '\n';
  }
  return out.str();
}

std::string summary_csv(const std::vector<SummaryRecord>& rows) {
  std::ostringstream out;
  out << "experiment,algorithm,d,p,K,m,m0,n,mean_iterations,se_iterations,"
         "theory_iterations,mean_angle,exact_fraction,mean_rand_index\n";
  for (const SummaryRecord& r : rows) {
    out << r.experiment << ',' << r.algorithm << ',' << opt_int(r.d) << ','
        << opt_int(r.p) << ',' << opt_int(r.K) << ',' << opt_int(r.m) << ','
        << opt_int(r.m0) << ',' << opt_int(r.n) << ','
        << fmt17(r.mean_iterations) << ',' << fmt17(r.se_iterations) << ','
        << opt_real(r.theory_iterations) << ',' << opt_real(r.mean_angle)
        << ',' << opt_real(r.exact_fraction) << ','
        << opt_real(r.mean_rand_index) << '\n';
  }
  return out.str();
}

std::string sweep_csv(const std::vector<SweepCell>& cells) {
  std::ostringstream out;
  out << "d,ratio,empirical_mean,theory_mean,se,trials,skip_reason\n";
  for (const SweepCell& c : cells) {
    out << c.d << ',' << fmt17(c.ratio) << ',' << opt_real(c.empirical_mean)
        << ',' << fmt17(c.theory_mean) << ',' << opt_real(c.se) << ','
        << c.trials << ',' << c.skip_reason << '\n';
  }
  return out.str();
}

std::string theory_csv(const std::vector<TheoryRecord>& rows) {
  std::ostringstream out;
  out << "d,p,K,m,m0,n,theta1,theta2,expected_iterations_ransac,"
         "expected_iterations_without_replacement,expected_iterations_hm,"
         "expected_iterations_clustering,negative_binomial_bound\n";
  for (const TheoryRecord& r : rows) {
    out << r.params.d << ',' << r.params.p << ',' << r.params.K << ','
        << r.params.m << ',' << r.params.m0 << ',' << r.params.n() << ','
        << fmt17(r.theta1_value) << ',' << opt_real(r.theta2_value) << ','
        << fmt17(r.expected_ransac) << ','
        << fmt17(r.expected_without_replacement) << ','
        << opt_real(r.expected_hm) << ',' << fmt17(r.expected_clustering)
        << ',' << fmt17(r.negative_binomial_bound) << '\n';
  }
  return out.str();
}

std::string metadata_text(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "rng = " << RngStream::kAlgorithm << '\n';
  out << "seed = " << cfg.seed << '\n';
  out << "experiment = " << kind_name(cfg.kind) << '\n';
  if (!cfg.algorithms.empty()) {
    out << "algorithms = ";
    for (std::size_t i = 0; i < cfg.algorithms.size(); ++i)
      out << (i ? "," : "") << cfg.algorithms[i];
    out << '\n';
  }
  out << "trials = " << cfg.trials << '\n';
  out << "workers = " << cfg.workers << '\n';
  out << "replacement_mode = " << replacement_name(cfg.replacement) << '\n';
  out << "iteration_cap = " << cfg.iteration_cap << '\n';
  out << "scene_source = "
      << (cfg.scene_prefix.empty() ? std::string("generated-per-trial")
                                   : "file:" + cfg.scene_prefix)
      << '\n';
  out << "audit_samples = " << cfg.audit_samples << '\n';
  out << "rand_index_outlier_convention = outliers-form-one-group\n";
  if (cfg.unknown_dimension)
    out << "unknown_d = 1\nbudget_per_dim = " << cfg.budget_per_dim << '\n';
  if (!cfg.rows.empty()) {
    out << "rows = ";
    for (std::size_t i = 0; i < cfg.rows.size(); ++i) {
      const TheoryParams& r = cfg.rows[i];
      out << (i ? "; " : "") << r.d << ',' << r.p << ',' << r.m << ',' << r.m0
          << ',' << r.K;
    }
    out << '\n';
  }
  return out.str();
}

ExperimentOutput run_recovery_experiment(const ExperimentConfig& cfg) {
  ExperimentConfig run = cfg;
  if (run.trials == 0) run.trials = 1000;
  if (run.algorithms.empty()) run.algorithms = {"ransac", "hm"};
  if (run.rows.empty() && run.scene_prefix.empty())
    throw ConfigError("recover: no parameter rows given");
  if (run.rows.empty()) run.rows.emplace_back();
  for (const std::string& a : run.algorithms)
    if (a != "ransac" && a != "hm")
      throw ConfigError("recover: unsupported algorithm: " + a);

  ExperimentOutput out;
  for (const TheoryParams& row_in : run.rows) {
    if (row_in.K != 1)
      throw ConfigError("recover: rows must have K = 1");
    const SceneSource src = scene_source_for(run, row_in);
    const TheoryParams row = src.row;
    for (const std::string& alg : run.algorithms) {
      RansacConfig rc;
      rc.max_iterations = run.iteration_cap;
      rc.replacement = run.replacement;

      std::vector<TrialRecord> trials = run_trials(
          run.trials, run.workers, [&](int t) -> TrialRecord {
            RngStream rng(run.seed, static_cast<std::uint64_t>(t));
            const Scene scene = src.scene_for_trial(rng);
            RecoveryResult rr =
                alg == "hm"
                    ? hardt_moitra_recover(scene.points, rc, rng)
                    : (run.unknown_dimension
                           ? ransac_recover_unknown_dimension(
                                 scene.points, run.budget_per_dim, rc, rng)
                           : ransac_recover(scene.points, row.d, rc, rng));
            TrialRecord rec;
            rec.experiment = "recover";
            rec.algorithm = alg;
            if (src.have_params) {
              rec.d = row.d;
              rec.m = row.m;
              rec.m0 = row.m0;
              rec.n = row.n();
            }
            rec.p = row.p;
            rec.trial = t;
            rec.seed = run.seed;
            rec.iterations = rr.iterations;
            rec.elapsed_s = rr.elapsed_s;
            rec.replacement_mode = replacement_name(run.replacement);
            if (src.have_truth) {
              rec.angle = recovery_angle(rr.subspace, scene.subspaces.front());
              const std::vector<int> truth = truth_inliers(scene, 1);
              rec.exact = (*rec.angle <= kExactAngleTol &&
                           rr.inlier_indices == truth)
                              ? 1
                              : 0;
            }
            return rec;
          });

      std::optional<double> theory;
      if (src.have_params && !run.unknown_dimension) {
        theory = alg == "hm"
                     ? 1.0 / theta2(row.n(), row.m, row.d, row.p)
                     : expected_iterations_recovery(row.n(), row.m, row.d);
      }
      out.summary.push_back(summarize("recover", alg, row, src.have_params,
                                      trials, theory));
      for (TrialRecord& t : trials) out.trials.push_back(std::move(t));
    }
  }
  write_trial_outputs(run, out);
  return out;
}

ExperimentOutput run_clustering_experiment(const ExperimentConfig& cfg) {
  ExperimentConfig run = cfg;
  if (run.trials == 0) run.trials = 500;
  if (run.algorithms.empty()) run.algorithms = {"ransac_cluster"};
  if (run.rows.empty() && run.scene_prefix.empty())
    throw ConfigError("cluster: no parameter rows given");
  if (run.rows.empty()) run.rows.emplace_back();
  for (const std::string& a : run.algorithms)
    if (a != "ransac_cluster" && a != "hm_cluster" && a != "scc")
      throw ConfigError("cluster: unsupported algorithm: " + a);

  ExperimentOutput out;
  for (const TheoryParams& row_in : run.rows) {
    const SceneSource src = scene_source_for(run, row_in);
    const TheoryParams row = src.row;
    for (const std::string& alg : run.algorithms) {
      RansacConfig rc;
      rc.max_iterations = run.iteration_cap;
      rc.replacement = run.replacement;

      std::vector<TrialRecord> trials = run_trials(
          run.trials, run.workers, [&](int t) -> TrialRecord {
            RngStream rng(run.seed, static_cast<std::uint64_t>(t));
            const Scene scene = src.scene_for_trial(rng);
            TrialRecord rec;
            rec.experiment = "cluster";
            rec.algorithm = alg;
            if (src.have_params) {
              rec.d = row.d;
              rec.K = row.K;
              rec.m = row.m;
              rec.m0 = row.m0;
              rec.n = row.n();
            }
            rec.p = row.p;
            rec.trial = t;
            rec.seed = run.seed;
            rec.replacement_mode = replacement_name(run.replacement);

            std::vector<int> labels;
            if (alg == "scc") {
              const auto start = std::chrono::steady_clock::now();
              const AffinityMatrix aff =
                  scc_affinity(scene.points, row.d, run.affinity_tuples,
                               rc.rel_tol, rng, 1);
              labels = spectral_partition(aff, row.K, rng.next_u64());
              rec.iterations = run.affinity_tuples;
              rec.elapsed_s = std::chrono::duration<double>(
                                  std::chrono::steady_clock::now() - start)
                                  .count();
            } else if (alg == "hm_cluster") {
              ClusteringResult cr = hm_cluster(scene.points, row.K, rc, rng);
              labels = std::move(cr.labels);
              rec.iterations = cr.iterations;
              rec.elapsed_s = cr.elapsed_s;
            } else {
              ClusteringResult cr =
                  ransac_cluster(scene.points, row.d, row.K, rc, rng);
              labels = std::move(cr.labels);
              rec.iterations = cr.iterations;
              rec.elapsed_s = cr.elapsed_s;
            }
            if (src.have_truth) {
              rec.rand_index_value = rand_index(labels, scene.labels);
              rec.exact = *rec.rand_index_value == 1.0 ? 1 : 0;
            }
            return rec;
          });

      std::optional<double> theory;
      if (src.have_params && alg == "ransac_cluster")
        theory = expected_iterations_clustering(row).expected;
      out.summary.push_back(summarize("cluster", alg, row, src.have_params,
                                      trials, theory));
      for (TrialRecord& t : trials) out.trials.push_back(std::move(t));
    }
  }
  write_trial_outputs(run, out);
  return out;
}

ExperimentOutput run_complexity_sweep(const ExperimentConfig& cfg) {
  ExperimentConfig run = cfg;
  if (run.trials == 0) run.trials = 1000;
  if (run.sweep_m < 2) throw ConfigError("sweep: m must be >= 2");
  if (run.sweep_d.empty() || run.sweep_ratio.empty())
    throw ConfigError("sweep: empty grid");

  ExperimentOutput out;
  for (int d : run.sweep_d) {
    for (double ratio : run.sweep_ratio) {
      SweepCell cell;
      cell.d = d;
      cell.ratio = ratio;
      const int m = run.sweep_m;
      const int n = static_cast<int>(std::llround(ratio * m));
      const int m0 = n - m;
      TheoryParams row;
      row.d = d;
      row.p = run.sweep_p;
      row.m = m;
      row.m0 = m0;
      row.K = 1;
      if (m0 < 0 || d >= run.sweep_p || m < d + 1) {
        cell.skip_reason = "infeasible_parameters";
        out.sweep.push_back(cell);
        continue;
      }
      cell.theory_mean = expected_iterations_recovery(n, m, d);
      if (!(cell.theory_mean <= static_cast<double>(run.iteration_cap))) {
        cell.skip_reason = "expected_iterations_exceed_cap";
        out.sweep.push_back(cell);
        continue;
      }

      RansacConfig rc;
      rc.max_iterations = run.iteration_cap;
      rc.replacement = run.replacement;
      SceneOptions opts;
      opts.audit_samples = run.audit_samples;
      const std::vector<long long> iters = run_trials(
          run.trials, run.workers, [&](int t) -> long long {
            RngStream rng(run.seed, static_cast<std::uint64_t>(t));
            const Scene scene = make_scene(row, rng, opts);
            return ransac_recover(scene.points, d, rc, rng).iterations;
          });
      std::vector<double> xs(iters.begin(), iters.end());
      cell.empirical_mean = mean_of(xs);
      cell.se = standard_error(xs);
      cell.trials = run.trials;
      out.sweep.push_back(cell);
    }
  }
  if (!run.out.empty()) {
    write_text_file(run.out, sweep_csv(out.sweep));
    write_text_file(run.out + ".meta", metadata_text(run));
  }
  return out;
}

ExperimentOutput run_theory_table(const ExperimentConfig& cfg) {
  if (cfg.rows.empty()) throw ConfigError("theory: no parameter rows given");
  ExperimentOutput out;
  for (const TheoryParams& row : cfg.rows) {
    row.validate();
    TheoryRecord r;
    r.params = row;
    const long long n = row.n();
    r.theta1_value = theta1(n, row.m, row.d);
    r.expected_ransac = expected_iterations_recovery(n, row.m, row.d);
    r.expected_without_replacement =
        mean_iterations_without_replacement(n, row.m, row.d);
    try {
      r.theta2_value = theta2(n, row.m, row.d, row.p);
      r.expected_hm = *r.theta2_value > 0.0
                          ? std::optional<double>(1.0 / *r.theta2_value)
                          : std::nullopt;
    } catch (const InvalidInputError&) {
      // p >= n: the dimension-free tuple draw is undefined there.
    }
    const ClusteringIterations ci = expected_iterations_clustering(row);
    r.expected_clustering = ci.expected;
    r.negative_binomial_bound = ci.negative_binomial_bound;
    out.theory.push_back(r);
  }
  if (!cfg.out.empty()) {
    write_text_file(cfg.out, theory_csv(out.theory));
    write_text_file(cfg.out + ".meta", metadata_text(cfg));
  }
  return out;
}

void run_generate(const ExperimentConfig& cfg) {
  if (cfg.rows.size() != 1)
    throw ConfigError("gen: exactly one parameter row is required");
  if (cfg.out.empty()) throw ConfigError("gen: output prefix required");
  TheoryParams row = cfg.rows.front();
  row.validate();
  SceneOptions opts;
  opts.audit_samples = cfg.audit_samples;
  RngStream rng(cfg.seed, 0);
  const Scene scene = make_scene(row, rng, opts);
  write_scene(cfg.out, scene);
  write_text_file(cfg.out + ".meta", metadata_text(cfg));
}

ExperimentOutput run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.kind) {
    case ExperimentKind::gen:
      run_generate(cfg);
      return {};
    case ExperimentKind::recover:
      return run_recovery_experiment(cfg);
    case ExperimentKind::cluster:
      return run_clustering_experiment(cfg);
    case ExperimentKind::sweep:
      return run_complexity_sweep(cfg);
    case ExperimentKind::theory:
      return run_theory_table(cfg);
  }
  throw ConfigError("unknown experiment kind");
}

}  // namespace subspace::bench
