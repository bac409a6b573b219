#include "igenkrylov/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "igenkrylov/errors.hpp"
#include "igenkrylov/io.hpp"
#include "igenkrylov/random.hpp"

namespace igenkrylov {

using nlohmann::json;

namespace {

const std::vector<std::string> kExperiments = {"verify-relations", "reconstruct", "compare-reg",
                                               "inexact-angles"};

std::uint64_t matvec_seed(const ExperimentConfig& cfg) {
  return rng::derive(cfg.seed, "matvec-error");
}

std::uint64_t angle_seed(const ExperimentConfig& cfg) { return rng::derive(cfg.seed, "angles"); }

void check_keys(const json& obj, const std::vector<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

template <class T>
void read_field(const json& obj, const char* key, T& out, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError("wrong type for '" + std::string(key) + "' in " + where);
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  if (schema_version != kSchemaVersion) {
    throw ConfigError("unsupported schema_version " + std::to_string(schema_version));
  }
  if (std::find(kExperiments.begin(), kExperiments.end(), experiment) == kExperiments.end()) {
    throw ConfigError("unknown experiment '" + experiment + "'");
  }
  if (n < 16) throw ConfigError("problem.n must be at least 16");
  if (angles.empty()) throw ConfigError("problem.angles must not be empty");
  for (double a : angles) {
    if (!std::isfinite(a)) throw ConfigError("problem.angles must be finite");
  }
  if (nrays < 0) throw ConfigError("problem.nrays must be nonnegative");
  if (!(prior_nu > 0.0) || !std::isfinite(prior_nu)) throw ConfigError("prior.nu must be positive");
  if (!(prior_ell > 0.0) || !std::isfinite(prior_ell)) throw ConfigError("prior.ell must be positive");
  if (!(prior_variance > 0.0) || !std::isfinite(prior_variance)) {
    throw ConfigError("prior.variance must be positive");
  }
  if (prior_backend != "fft" && prior_backend != "dense" && prior_backend != "identity") {
    throw ConfigError("prior.backend must be fft, dense or identity");
  }
  if (!(noise_level >= 0.0) || !std::isfinite(noise_level)) {
    throw ConfigError("noise_level must be finite and nonnegative");
  }
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw ConfigError("inexactness.beta must be >= 0");
  for (double b : betas) {
    if (!(b >= 0.0) || !std::isfinite(b)) throw ConfigError("inexactness.betas must be >= 0");
  }
  for (const auto& [a0, a1] : angle_schedules) {
    AngleSchedule s;
    s.alpha_start = a0;
    s.alpha_end = a1;
    s.validate();
  }
  if (angle_iters < 0) throw ConfigError("inexactness.angle_iters must be nonnegative");
  parse_mode(mode);
  const auto kind = parse_reg_kind(reg);
  if (kind == RegRule::Kind::fixed && !reg_lambda) {
    throw ConfigError("reg_rule.lambda is required for the fixed rule");
  }
  if (reg_lambda && (!(*reg_lambda >= 0.0) || !std::isfinite(*reg_lambda))) {
    throw ConfigError("reg_rule.lambda must be finite and nonnegative");
  }
  if (!(nu_dp > 0.0)) throw ConfigError("reg_rule.nu_dp must be positive");
  if (!(omega > 0.0 && omega <= 1.0)) throw ConfigError("reg_rule.omega must lie in (0, 1]");
  if (omega_mode != "fixed" && omega_mode != "adaptive") {
    throw ConfigError("reg_rule.omega_mode must be fixed or adaptive");
  }
  if (max_iter < 1) throw ConfigError("max_iter must be at least 1");
  if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
}

CTGeometry ExperimentConfig::geometry() const {
  CTGeometry g;
  g.n = n;
  g.angles_deg = angles;
  g.nrays = nrays > 0 ? nrays : CTGeometry::default_nrays(n);
  g.validate();
  return g;
}

ExperimentConfig make_preset(const std::string& name) {
  ExperimentConfig cfg;
  apply_preset(cfg, name);
  return cfg;
}

void apply_preset(ExperimentConfig& cfg, const std::string& name) {
  if (name == "desk") {
    cfg.n = 64;
    cfg.max_iter = 50;
    cfg.angle_iters = 50;
  } else if (name == "paper") {
    cfg.n = 128;
    cfg.max_iter = 50;
    cfg.angle_iters = 50;
  } else if (name == "paper-long") {
    cfg.n = 128;
    cfg.max_iter = 100;
    cfg.angle_iters = 100;
  } else {
    throw ConfigError("unknown preset '" + name + "' (expected desk, paper or paper-long)");
  }
  cfg.angles = CTGeometry::default_angles();
  cfg.nrays = 0;
  cfg.prior_nu = 1.5;
  cfg.prior_ell = 0.01;
  cfg.noise_level = 0.04;
  cfg.beta = 1e-2;
}

ExperimentConfig config_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(doc,
             {"schema_version", "experiment", "problem", "prior", "noise_level", "inexactness",
              "mode", "reg_rule", "max_iter", "seed", "output_dir"},
             "config");
  ExperimentConfig cfg;
  read_field(doc, "schema_version", cfg.schema_version, "config");
  read_field(doc, "experiment", cfg.experiment, "config");
  read_field(doc, "noise_level", cfg.noise_level, "config");
  read_field(doc, "mode", cfg.mode, "config");
  read_field(doc, "max_iter", cfg.max_iter, "config");
  read_field(doc, "seed", cfg.seed, "config");
  read_field(doc, "output_dir", cfg.output_dir, "config");
  if (auto it = doc.find("problem"); it != doc.end()) {
    check_keys(*it, {"n", "angles", "nrays"}, "problem");
    read_field(*it, "n", cfg.n, "problem");
    read_field(*it, "angles", cfg.angles, "problem");
    read_field(*it, "nrays", cfg.nrays, "problem");
  }
  if (auto it = doc.find("prior"); it != doc.end()) {
    check_keys(*it, {"nu", "ell", "variance", "backend"}, "prior");
    read_field(*it, "nu", cfg.prior_nu, "prior");
    read_field(*it, "ell", cfg.prior_ell, "prior");
    read_field(*it, "variance", cfg.prior_variance, "prior");
    read_field(*it, "backend", cfg.prior_backend, "prior");
  }
  if (auto it = doc.find("inexactness"); it != doc.end()) {
    check_keys(*it, {"beta", "betas", "angle_schedules", "angle_iters"}, "inexactness");
    read_field(*it, "beta", cfg.beta, "inexactness");
    read_field(*it, "betas", cfg.betas, "inexactness");
    read_field(*it, "angle_schedules", cfg.angle_schedules, "inexactness");
    read_field(*it, "angle_iters", cfg.angle_iters, "inexactness");
  }
  if (auto it = doc.find("reg_rule"); it != doc.end()) {
    check_keys(*it, {"kind", "lambda", "nu_dp", "omega", "omega_mode"}, "reg_rule");
    read_field(*it, "kind", cfg.reg, "reg_rule");
    if (auto l = it->find("lambda"); l != it->end() && !l->is_null()) {
      double v = 0.0;
      read_field(*it, "lambda", v, "reg_rule");
      cfg.reg_lambda = v;
    }
    read_field(*it, "nu_dp", cfg.nu_dp, "reg_rule");
    read_field(*it, "omega", cfg.omega, "reg_rule");
    read_field(*it, "omega_mode", cfg.omega_mode, "reg_rule");
  }
  return cfg;
}

namespace {

json config_json(const ExperimentConfig& cfg) {
  json reg = {{"kind", cfg.reg},
              {"nu_dp", cfg.nu_dp},
              {"omega", cfg.omega},
              {"omega_mode", cfg.omega_mode}};
  reg["lambda"] = cfg.reg_lambda ? json(*cfg.reg_lambda) : json(nullptr);
  return {{"schema_version", cfg.schema_version},
          {"experiment", cfg.experiment},
          {"problem", {{"n", cfg.n}, {"angles", cfg.angles}, {"nrays", cfg.nrays}}},
          {"prior",
           {{"nu", cfg.prior_nu},
            {"ell", cfg.prior_ell},
            {"variance", cfg.prior_variance},
            {"backend", cfg.prior_backend}}},
          {"noise_level", cfg.noise_level},
          {"inexactness",
           {{"beta", cfg.beta},
            {"betas", cfg.betas},
            {"angle_schedules", cfg.angle_schedules},
            {"angle_iters", cfg.angle_iters}}},
          {"mode", cfg.mode},
          {"reg_rule", reg},
          {"max_iter", cfg.max_iter},
          {"seed", cfg.seed},
          {"output_dir", cfg.output_dir}};
}

}  // namespace

std::string config_to_json(const ExperimentConfig& cfg, int indent) {
  return config_json(cfg).dump(indent);
}

CtProblem build_problem(const ExperimentConfig& cfg) {
  cfg.validate();
  CtProblem p;
  p.geometry = cfg.geometry();
  p.radon = std::make_shared<const RadonOperator>(p.geometry);
  p.s_true = make_phantom(cfg.n);
  p.obs = synthesize_observation(*p.radon, p.s_true, cfg.noise_level, cfg.seed);
  const double m = static_cast<double>(p.geometry.rows());
  p.sigma = p.obs.noise_norm > 0.0 ? p.obs.noise_norm / std::sqrt(m) : 1.0;

  const Grid grid = Grid::square(cfg.n);
  const auto kernel = MaternKernel::from_length(cfg.prior_nu, cfg.prior_ell, cfg.prior_variance);
  if (cfg.prior_backend == "fft") {
    p.cov = std::make_shared<const FftCovariance>(grid, kernel);
  } else if (cfg.prior_backend == "dense") {
    p.cov = std::make_shared<const DenseCovariance>(grid, kernel);
  } else {
    p.cov = std::make_shared<const IdentityCovariance>(grid.size());
  }
  return p;
}

ModeSetup mode_setup(const ExperimentConfig& cfg, const CtProblem& prob, DecompositionMode mode,
                     const std::string& reg_kind) {
  const Index n = prob.geometry.cols();
  const Index m = prob.geometry.rows();
  const bool generalized = mode == DecompositionMode::gengk || mode == DecompositionMode::igengk;
  const double sigma = generalized ? prob.sigma : 1.0;

  RegRule rule;
  switch (parse_reg_kind(reg_kind)) {
    case RegRule::Kind::none:
      rule = RegRule::none();
      break;
    case RegRule::Kind::fixed:
      if (!cfg.reg_lambda) throw ConfigError("reg_rule.lambda is required for the fixed rule");
      rule = RegRule::fixed(*cfg.reg_lambda);
      break;
    case RegRule::Kind::optimal:
      rule = RegRule::optimal();
      break;
    case RegRule::Kind::dp:
      // In the R^-1 norm the noise has size ||eps|| / sigma.
      rule = RegRule::dp(prob.obs.noise_norm / sigma, cfg.nu_dp);
      break;
    case RegRule::Kind::wgcv:
      rule = RegRule::wgcv(cfg.omega, cfg.omega_mode == "adaptive" ? RegRule::OmegaMode::adaptive
                                                                   : RegRule::OmegaMode::fixed);
      break;
  }
  return {generalized ? PriorModel(Vector::Zero(n), prob.cov) : PriorModel::identity(n),
          NoiseModel(sigma, m), rule,
          mode == DecompositionMode::igk || mode == DecompositionMode::igengk};
}

unsigned worker_limit() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("IGENKRYLOV_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<unsigned>(v);
  }
  return hw;
}

void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t)>& fn) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(count)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

namespace {

std::shared_ptr<const InexactOperator> gaussian_operator(const ExperimentConfig& cfg,
                                                         const CtProblem& prob, double beta) {
  const auto model = beta > 0.0 ? InexactnessModel::gaussian(beta, matvec_seed(cfg))
                                : InexactnessModel::exact();
  return std::make_shared<const PerturbedOperator>(prob.radon, model);
}

SolveConfig solve_config(const ExperimentConfig& cfg, const CtProblem& prob, const RegRule& rule) {
  SolveConfig sc;
  sc.max_iter = cfg.max_iter;
  sc.rule = rule;
  sc.s_true = prob.s_true;
  return sc;
}

}  // namespace

VerifyResult run_verify_relations(const ExperimentConfig& cfg, const CtProblem& prob) {
  if (cfg.betas.empty()) throw ConfigError("inexactness.betas must not be empty");
  const auto mode = parse_mode(cfg.mode);
  const ModeSetup setup = mode_setup(cfg, prob, mode, "none");
  VerifyResult out;
  out.rows.resize(cfg.betas.size());
  parallel_for(cfg.betas.size(), worker_limit(), [&](std::size_t i) {
    const double beta = cfg.betas[i];
    const auto a = gaussian_operator(cfg, prob, beta);
    BidiagState st =
        igenGK_init(mode, *a, setup.prior.Q(), setup.noise, prob.obs.d, cfg.max_iter);
    for (int k = 0; k < cfg.max_iter; ++k) {
      if (igenGK_step(st, *a, setup.prior.Q(), setup.noise) == StepStatus::breakdown) break;
    }
    out.rows[i] = {beta, relation_diagnostics(st, *prob.radon, setup.prior.Q(), setup.noise)};
  });

  out.orthogonality_ok = true;
  for (const auto& r : out.rows) {
    if (!(r.report.err_Vorth <= kOrthTol) || !(r.report.err_Uorth <= kOrthTol)) {
      out.orthogonality_ok = false;
    }
  }
  std::vector<RelationRow> sorted = out.rows;
  std::sort(sorted.begin(), sorted.end(),
            [](const RelationRow& x, const RelationRow& y) { return x.beta > y.beta; });
  out.scaling_ok = true;
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    const auto& hi = sorted[i];
    const auto& lo = sorted[i + 1];
    if (!(lo.beta > 0.0) || hi.beta == lo.beta) continue;
    const double expected = hi.beta / lo.beta;
    for (const char* metric : {"err_adjoint", "err_forward"}) {
      const bool adj = std::string(metric) == "err_adjoint";
      const double e_hi = adj ? hi.report.err_adjoint : hi.report.err_forward;
      const double e_lo = adj ? lo.report.err_adjoint : lo.report.err_forward;
      ScalingRow row{hi.beta, lo.beta, metric, e_hi / e_lo, expected, 0.0};
      row.rel_dev = std::abs(row.ratio / expected - 1.0);
      if (!(row.rel_dev <= kScalingTol)) out.scaling_ok = false;
      out.scaling.push_back(row);
    }
  }
  return out;
}

ReconRecord run_reconstruct(const ExperimentConfig& cfg, const CtProblem& prob) {
  const auto mode = parse_mode(cfg.mode);
  const ModeSetup setup = mode_setup(cfg, prob, mode, cfg.reg);
  const auto a = gaussian_operator(cfg, prob, setup.inexact ? cfg.beta : 0.0);
  return run_iterative_solve(mode, *a, setup.prior, setup.noise, prob.obs.d,
                             solve_config(cfg, prob, setup.rule));
}

CompareResult run_compare_reg(const ExperimentConfig& cfg, const CtProblem& prob) {
  const auto mode = parse_mode(cfg.mode);
  CompareResult out;
  out.rules = {"opt", "dp", "wgcv"};
  std::vector<RegRule> rules;
  ModeSetup setup = mode_setup(cfg, prob, mode, "none");
  for (const auto& r : out.rules) rules.push_back(mode_setup(cfg, prob, mode, r).rule);
  const auto a = gaussian_operator(cfg, prob, setup.inexact ? cfg.beta : 0.0);
  out.records = run_iterative_solve(mode, *a, setup.prior, setup.noise, prob.obs.d,
                                    solve_config(cfg, prob, rules.front()), rules);
  return out;
}

AngleResult run_inexact_angles(const ExperimentConfig& cfg, const CtProblem& prob) {
  const auto mode = parse_mode(cfg.mode);
  const ModeSetup setup = mode_setup(cfg, prob, mode, cfg.reg);
  const SolveConfig sc = solve_config(cfg, prob, setup.rule);
  const int iters = cfg.angle_iters > 0 ? cfg.angle_iters : cfg.max_iter;

  AngleResult out;
  out.runs.resize(cfg.angle_schedules.size());
  parallel_for(cfg.angle_schedules.size() + 1, worker_limit(), [&](std::size_t i) {
    if (i == 0) {
      const PerturbedOperator exact(prob.radon, InexactnessModel::exact());
      out.baseline = run_iterative_solve(mode, exact, setup.prior, setup.noise, prob.obs.d, sc);
      return;
    }
    AngleSchedule sched;
    sched.alpha_start = cfg.angle_schedules[i - 1].first;
    sched.alpha_end = cfg.angle_schedules[i - 1].second;
    sched.num_iters = iters;
    sched.seed = angle_seed(cfg);
    const AngleInexactRadon a(prob.geometry, sched);
    out.runs[i - 1] = run_iterative_solve(mode, a, setup.prior, setup.noise, prob.obs.d, sc);
  });
  return out;
}

namespace {

json summary_json(const ExperimentConfig& cfg, const ReconRecord& rec) {
  auto num = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
  return {{"schema_version", kSchemaVersion},
          {"config", config_json(cfg)},
          {"final_relerr", num(rec.final_relerr())},
          {"min_relerr", num(rec.min_relerr())},
          {"argmin_iter", rec.argmin_iter()},
          {"iterations", rec.iterations()},
          {"stop_reason", rec.stop_reason},
          {"lambda_final", rec.lambda.empty() ? json(nullptr) : num(rec.lambda.back())}};
}

json timing_json(const ReconRecord& rec) {
  return {{"decomposition_s", rec.timings.decomposition},
          {"projected_solve_s", rec.timings.projected_solve},
          {"parameter_selection_s", rec.timings.parameter_selection},
          {"recovery_s", rec.timings.recovery}};
}

void write_json(const std::filesystem::path& path, const json& j) {
  io::write_text(path, j.dump(2) + "\n");
}

void write_wide_csv(const std::filesystem::path& path, const std::vector<std::string>& names,
                    const std::vector<const ReconRecord*>& recs) {
  std::ostringstream out;
  out << "iter";
  for (const auto& name : names) out << ",relerr_" << name << ",lambda_" << name;
  out << '\n';
  int rows = 0;
  for (const auto* r : recs) rows = std::max(rows, r->iterations());
  for (int i = 0; i < rows; ++i) {
    out << (i + 1);
    for (const auto* r : recs) {
      const auto u = static_cast<std::size_t>(i);
      if (i < r->iterations()) {
        out << ',' << io::format_double(r->relerr[u]) << ',' << io::format_double(r->lambda[u]);
      } else {
        out << ",,";
      }
    }
    out << '\n';
  }
  io::write_text(path, out.str());
}

std::string schedule_name(const std::pair<double, double>& s) {
  return "alpha_" + io::format_double(s.first) + "_to_" + io::format_double(s.second);
}

}  // namespace

int run_command(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::filesystem::path dir(cfg.output_dir);
  std::filesystem::create_directories(dir);
  const CtProblem prob = build_problem(cfg);
  io::write_text(dir / "config.json", config_to_json(cfg) + "\n");

  if (cfg.experiment == "verify-relations") {
    const VerifyResult res = run_verify_relations(cfg, prob);
    std::ostringstream csv;
    csv << "beta,err_adjoint,err_forward,err_Vorth,err_Uorth\n";
    for (const auto& r : res.rows) {
      csv << io::format_double(r.beta) << ',' << io::format_double(r.report.err_adjoint) << ','
          << io::format_double(r.report.err_forward) << ',' << io::format_double(r.report.err_Vorth)
          << ',' << io::format_double(r.report.err_Uorth) << '\n';
    }
    io::write_text(dir / "relations.csv", csv.str());
    std::ostringstream sc;
    sc << "beta_hi,beta_lo,metric,ratio,expected,rel_dev\n";
    for (const auto& s : res.scaling) {
      sc << io::format_double(s.beta_hi) << ',' << io::format_double(s.beta_lo) << ','
         << s.metric << ',' << io::format_double(s.ratio) << ','
         << io::format_double(s.expected) << ',' << io::format_double(s.rel_dev) << '\n';
    }
    io::write_text(dir / "scaling.csv", sc.str());
    write_json(dir / "summary.json", {{"schema_version", kSchemaVersion},
                                      {"config", config_json(cfg)},
                                      {"orthogonality_ok", res.orthogonality_ok},
                                      {"scaling_ok", res.scaling_ok}});
    return res.orthogonality_ok && res.scaling_ok ? 0 : 1;
  }

  if (cfg.experiment == "reconstruct") {
    const ReconRecord rec = run_reconstruct(cfg, prob);
    io::write_history_csv(dir / "history.csv", rec);
    io::write_pgm16(dir / "final.pgm", rec.final_solution, cfg.n);
    io::write_pgm16(dir / "true.pgm", prob.s_true, cfg.n);
    io::write_sinogram_csv(dir / "sinogram.csv", prob.obs.d, prob.geometry);
    write_json(dir / "summary.json", summary_json(cfg, rec));
    write_json(dir / "timing.json", timing_json(rec));
    return 0;
  }

  if (cfg.experiment == "compare-reg") {
    const CompareResult res = run_compare_reg(cfg, prob);
    json summary = {{"schema_version", kSchemaVersion}, {"config", config_json(cfg)}};
    json timing = json::object();
    std::vector<const ReconRecord*> recs;
    for (std::size_t i = 0; i < res.rules.size(); ++i) {
      io::write_history_csv(dir / ("history_" + res.rules[i] + ".csv"), res.records[i]);
      io::write_pgm16(dir / ("final_" + res.rules[i] + ".pgm"), res.records[i].final_solution,
                      cfg.n);
      json s = summary_json(cfg, res.records[i]);
      s.erase("config");
      summary["runs"][res.rules[i]] = s;
      timing[res.rules[i]] = timing_json(res.records[i]);
      recs.push_back(&res.records[i]);
    }
    write_wide_csv(dir / "compare.csv", res.rules, recs);
    write_json(dir / "summary.json", summary);
    write_json(dir / "timing.json", timing);
    return 0;
  }

  // inexact-angles
  const AngleResult res = run_inexact_angles(cfg, prob);
  std::vector<std::string> names{"exact"};
  std::vector<const ReconRecord*> recs{&res.baseline};
  for (std::size_t i = 0; i < res.runs.size(); ++i) {
    names.push_back(schedule_name(cfg.angle_schedules[i]));
    recs.push_back(&res.runs[i]);
  }
  json summary = {{"schema_version", kSchemaVersion}, {"config", config_json(cfg)}};
  json timing = json::object();
  for (std::size_t i = 0; i < names.size(); ++i) {
    io::write_history_csv(dir / ("history_" + names[i] + ".csv"), *recs[i]);
    json s = summary_json(cfg, *recs[i]);
    s.erase("config");
    summary["runs"][names[i]] = s;
    timing[names[i]] = timing_json(*recs[i]);
  }
  write_wide_csv(dir / "angles_compare.csv", names, recs);
  write_json(dir / "summary.json", summary);
  write_json(dir / "timing.json", timing);
  return 0;
}

}  // namespace igenkrylov
