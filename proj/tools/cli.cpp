#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "elsgd/akaike.hpp"
#include "elsgd/objective.hpp"
#include "elsgd/parallel.hpp"
#include "elsgd/phase_retrieval.hpp"
#include "elsgd/quadratic.hpp"
#include "elsgd/roc.hpp"
#include "elsgd/rosenbrock.hpp"
#include "elsgd/version.hpp"

namespace elsgd::cli {
namespace {

using nlohmann::json;

std::vector<double> parse_list(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    double v = 0.0;
    const char* first = item.data();
    const char* last = item.data() + item.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) {
      throw UsageError(std::string(flag) + ": cannot parse '" + item + "' as a number");
    }
    out.push_back(v);
  }
  return out;
}

// --lambda l1,l2,... or --n N --a A [--alpha a2,...,a_{n-1}].
struct SpectrumArgs {
  std::string lambda;
  std::size_t n = 0;
  double a = 0.0;
  std::string alpha;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--lambda", lambda, "Eigenvalues, strictly decreasing, comma separated");
    cmd.add_option("--n", n, "Dimension (with --a)");
    cmd.add_option("--a", a, "Inverse condition number lambda_n / lambda_1 (with --n)");
    cmd.add_option("--alpha", alpha,
                   "Intermediate weights alpha_2..alpha_{n-1} (default: evenly spaced)");
  }

  json to_json() const {
    return json{{"lambda", lambda}, {"n", n}, {"a", a}, {"alpha", alpha}};
  }
};

std::vector<double> spectrum_from(std::size_t n, double a, const std::vector<double>& alphas) {
  if (n < 2) throw UsageError("--n must be at least 2");
  if (!(a > 0.0 && a < 1.0)) throw UsageError("--a must lie in (0, 1)");
  std::vector<double> al = alphas;
  if (al.empty()) {
    for (std::size_t i = 1; i + 1 < n; ++i) {
      al.push_back(static_cast<double>(n - 1 - i) / static_cast<double>(n - 1));
    }
  }
  if (al.size() != n - 2) throw UsageError("--alpha needs exactly n - 2 values");
  std::vector<double> values{1.0};
  for (double w : al) {
    if (!(w > 0.0 && w < 1.0)) throw UsageError("--alpha values must lie in (0, 1)");
    values.push_back(w + (1.0 - w) * a);
  }
  values.push_back(a);
  return values;
}

Spectrum build_spectrum(const SpectrumArgs& args) {
  std::vector<double> values;
  if (!args.lambda.empty()) {
    if (args.n != 0 || args.a != 0.0 || !args.alpha.empty()) {
      throw UsageError("--lambda cannot be combined with --n/--a/--alpha");
    }
    values = parse_list(args.lambda, "--lambda");
  } else if (args.n != 0 && args.a != 0.0) {
    values = spectrum_from(args.n, args.a, parse_list(args.alpha, "--alpha"));
  } else {
    throw UsageError("give either --lambda or both --n and --a");
  }
  try {
    return Spectrum::make(values);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

json spectrum_json(const Spectrum& s) {
  std::vector<double> v(s.values().data(), s.values().data() + s.size());
  return json{{"values", v}, {"a", s.a()}, {"alphas", s.alphas()}};
}

// ---------------------------------------------------------------- roc-trace

struct RocTraceArgs {
  SpectrumArgs spectrum;
  std::string x0;
  std::uint64_t seed = 1;
  std::size_t max_k = 1000;
  double tol = 1e-12;
};

Report roc_trace(const RocTraceArgs& args) {
  const Spectrum spec = build_spectrum(args.spectrum);
  StateVector x0;
  std::string seed_source;
  if (args.x0 == "worst") {
    if (spec.size() < 2) throw UsageError("--x0 worst needs at least two eigenvalues");
    x0 = worst_seed(spec);
    seed_source = "worst";
  } else if (!args.x0.empty()) {
    const auto v = parse_list(args.x0, "--x0");
    if (v.size() != spec.size()) throw UsageError("--x0 must have one entry per eigenvalue");
    x0 = Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
    if (x0.cwiseAbs().maxCoeff() == 0.0) throw UsageError("--x0 must be nonzero");
    seed_source = "explicit";
  } else {
    Rng rng = make_stream(args.seed, 0);
    x0 = sample_unit_sphere(spec.size(), rng);
    seed_source = "uniform-sphere";
  }

  const Trajectory traj = els_gd_run(x0, spec, args.max_k, args.tol);
  Report r;
  r.columns = {"k", "a_norm", "rho_k", "s_k"};
  r.column_docs = {{"k", "iteration index (GD steps taken before this state)"},
                   {"a_norm", "||x_k||_A = sqrt(x_k^T A x_k), units of x * sqrt(lambda)"},
                   {"rho_k", "shrinking factor ||x_{k+1}||_A / ||x_k||_A (dimensionless)"},
                   {"s_k", "exact line search step x_k^T A^2 x_k / x_k^T A^3 x_k (units 1/lambda)"}};
  for (std::size_t k = 0; k < traj.steps(); ++k) {
    r.rows.push_back({std::to_string(k), fmt(a_norm(traj.states[k], spec)),
                      fmt(traj.shrink_factors[k]), fmt(traj.step_sizes[k])});
  }
  r.config = {{"spectrum", args.spectrum.to_json()}, {"x0", args.x0}, {"seed", args.seed},
              {"max_k", args.max_k}, {"tol", args.tol}};
  const double final_norm = a_norm(traj.states.back(), spec);
  const double start_norm = a_norm(x0, spec);
  r.converged = final_norm <= args.tol * start_norm || final_norm < 1e-280;
  std::vector<double> x0v(x0.data(), x0.data() + x0.size());
  r.results = {{"spectrum", spectrum_json(spec)},
               {"x0", x0v},
               {"x0_source", seed_source},
               {"steps", traj.steps()},
               {"final_a_norm", final_norm},
               {"worst_case_roc", worst_case_roc(spec)},
               {"converged", r.converged}};
  if (spec.size() >= 3) r.results["akaike_lower_bound"] = akaike_lower_bound(spec);
  if (spec.size() >= 2) r.results["rho_star"] = estimate_roc(x0, spec).rho_star;
  return r;
}

// -------------------------------------------------------------- average-roc

struct AverageRocArgs {
  SpectrumArgs spectrum;
  std::string a_list;
  int sweep = -1;
  std::string method;
  std::size_t samples = 100'000;
  std::uint64_t seed = 1;
  double tol = 1e-10;
};

Report average_roc(const AverageRocArgs& args) {
  std::vector<double> as;
  std::optional<Spectrum> fixed;
  std::size_t n = args.spectrum.n == 0 ? 2 : args.spectrum.n;
  if (!args.spectrum.lambda.empty()) {
    if (!args.a_list.empty() || args.sweep >= 0) {
      throw UsageError("--lambda cannot be combined with --a/--sweep");
    }
    fixed = build_spectrum(args.spectrum);
    n = fixed->size();
    as.push_back(fixed->a());
  } else if (args.sweep >= 0) {
    if (!args.a_list.empty()) throw UsageError("--sweep cannot be combined with --a");
    for (int k = 0; k <= args.sweep; ++k) as.push_back(std::pow(10.0, -k / 4.0));
  } else if (!args.a_list.empty()) {
    as = parse_list(args.a_list, "--a");
  } else {
    throw UsageError("give --a, --sweep or --lambda");
  }
  if (as.empty()) throw UsageError("no values of a given");
  for (double a : as) {
    if (!(a > 0.0 && a <= 1.0)) throw UsageError("every a must lie in (0, 1]");
  }
  if (n < 2) throw UsageError("average ROC needs n >= 2");
  std::string method = args.method.empty() ? (n == 2 ? "quad" : "mc") : args.method;
  if (method != "quad" && method != "mc") throw UsageError("--method must be quad or mc");
  if (method == "quad" && n != 2) throw UsageError("--method quad is only available for n = 2; use mc");
  if (method == "mc" && args.samples < 100) throw UsageError("--samples must be at least 100");

  Report r;
  r.columns = {"a", "worst", "average", "sqrt_avg_square", "std_error"};
  r.column_docs = {
      {"a", "lambda_n / lambda_1 (dimensionless)"},
      {"worst", "(1 - a) / (1 + a)"},
      {"average", "mean of rho* over x0 uniform on the unit sphere"},
      {"sqrt_avg_square",
       "sqrt of the mean of rho*^2 (closed form for quad, sample mean for mc)"},
      {"std_error", "Monte Carlo standard error of 'average' (0 for quadrature)"}};
  json per_a = json::array();
  for (double a : as) {
    double avg = 0.0;
    double sq = 0.0;
    double se = 0.0;
    std::size_t nonconv = 0;
    if (a == 1.0) {
      // every direction is an eigenvector
    } else if (method == "quad") {
      avg = average_roc_quadrature_2d(a, Moment::First, args.tol).mean;
      sq = std::sqrt(average_sq_roc_closed_form_2d(a));
    } else {
      const Spectrum spec =
          fixed ? *fixed
                : Spectrum::make(spectrum_from(n, a, parse_list(args.spectrum.alpha, "--alpha")));
      const auto mc = average_roc_monte_carlo(spec, args.samples, args.seed);
      avg = mc.mean;
      sq = std::sqrt(mc.mean_square);
      se = mc.std_error;
      nonconv = mc.nonconverged;
      if (nonconv > 0) r.converged = false;
    }
    r.rows.push_back({fmt(a), fmt(worst_case_roc(a)), fmt(avg), fmt(sq), fmt(se)});
    per_a.push_back({{"a", a}, {"nonconverged", nonconv}});
  }
  r.config = {{"spectrum", args.spectrum.to_json()}, {"a", args.a_list}, {"sweep", args.sweep},
              {"method", method}, {"samples", args.samples}, {"seed", args.seed},
              {"tol", args.tol}, {"n", n}};
  r.results = {{"rows", per_a}, {"method", method}};
  return r;
}

// ------------------------------------------------------------- limit-angles

struct LimitAnglesArgs {
  SpectrumArgs spectrum;
  std::size_t samples = 100'000;
  std::size_t bins = 200;
  std::uint64_t seed = 1;
  double tol = 1e-12;
  std::size_t max_iter = 1'000'000;
};

Report limit_angles(const LimitAnglesArgs& args) {
  const Spectrum spec = build_spectrum(args.spectrum);
  if (spec.size() < 3) throw UsageError("limit-angles needs n >= 3 (an intermediate eigenvalue)");
  if (args.bins == 0) throw UsageError("--bins must be positive");
  if (args.samples == 0) throw UsageError("--samples must be positive");
  const LimitOptions lim{args.tol, args.max_iter};
  const AngleHistogram h = limit_angle_histogram(spec, args.samples, args.bins, args.seed, lim);
  const double a = spec.a();
  const double slowest = std::atan(1.0 / a);

  Report r;
  r.columns = {"quantity", "angle", "value"};
  r.column_docs = {
      {"quantity",
       "density: probability density of the limit angle at the bin center (1/rad); "
       "roc: limiting rate for that angle; akaike_bound, worst_roc: horizontal reference "
       "levels; slowest_angle: atan(1/a) with the worst rate as value"},
      {"angle", "limit angle theta in radians, empty for scalar rows"},
      {"value", "see quantity"}};
  for (std::size_t i = 0; i < h.densities.size(); ++i) {
    r.rows.push_back({"density", fmt(h.bin_center(i)), fmt(h.densities[i])});
  }
  for (std::size_t i = 0; i < h.densities.size(); ++i) {
    const double theta = h.bin_center(i);
    r.rows.push_back({"roc", fmt(theta), fmt(roc_from_s(s_from_theta(theta, a), a))});
  }
  r.rows.push_back({"akaike_bound", "", fmt(akaike_lower_bound(spec))});
  r.rows.push_back({"worst_roc", "", fmt(worst_case_roc(spec))});
  r.rows.push_back({"slowest_angle", fmt(slowest), fmt(worst_case_roc(spec))});

  const Interval interval = attracting_interval(spec);
  const std::size_t mode = h.mode_bin();
  r.converged = h.nonconverged == 0;
  r.config = {{"spectrum", args.spectrum.to_json()}, {"samples", args.samples},
              {"bins", args.bins}, {"seed", args.seed}, {"tol", args.tol},
              {"max_iter", args.max_iter}};
  r.results = {{"spectrum", spectrum_json(spec)},
               {"akaike_lower_bound", akaike_lower_bound(spec)},
               {"worst_case_roc", worst_case_roc(spec)},
               {"slowest_angle", slowest},
               {"mode_bin", {h.bin_edges[mode], h.bin_edges[mode + 1]}},
               {"attracting_interval", {interval.lo, interval.hi}},
               {"outside_interval", h.outside_interval},
               {"nonconverged", h.nonconverged}};
  return r;
}

// ---------------------------------------------------------- phase-retrieval

struct PhaseRetrievalArgs {
  std::size_t n = 100;
  std::size_t m = 0;
  std::uint64_t seed = 1;
  std::string method = "both";
  double step = 0.1;
  double tol = 1e-10;
  std::size_t max_k = 100'000;
  std::string init = "spectral";
};

Report phase_retrieval(const PhaseRetrievalArgs& args) {
  if (args.n == 0) throw UsageError("--n must be positive");
  if (args.n > 1000) throw UsageError("--n above 1000 is outside the desk-scale range");
  const std::size_t m = args.m == 0 ? 10 * args.n : args.m;
  if (args.method != "els" && args.method != "const" && args.method != "both") {
    throw UsageError("--method must be els, const or both");
  }
  if (args.init != "spectral" && args.init != "truth") {
    throw UsageError("--init must be spectral or truth");
  }
  if (!(args.step > 0.0)) throw UsageError("--step must be positive");

  const auto inst = gen_phase_retrieval(args.n, m, args.seed);
  Vector x0;
  json init_meta;
  if (args.init == "truth") {
    x0 = inst.x_true;
    init_meta = {{"kind", "truth"}};
  } else {
    const auto si = spectral_init(inst);
    x0 = si.x;
    init_meta = {{"kind", "spectral"}, {"power_iterations", si.iterations},
                 {"converged", si.converged}};
  }
  const ConditionReport cond = hessian_cond(inst, inst.x_true);
  const double a = 1.0 / cond.cond;

  Report r;
  r.columns = {"method", "k", "rel_error", "f"};
  r.column_docs = {{"method", "els (exact line search) or const (constant step)"},
                   {"k", "iteration"},
                   {"rel_error", "min(||x - x*||, ||x + x*||) / ||x*|| (dimensionless)"},
                   {"f", "objective (1/4m) sum_j (y_j - (a_j^T x)^2)^2"}};
  json runs = json::object();
  std::vector<std::pair<std::string, PrMethod>> methods;
  if (args.method != "const") methods.emplace_back("els", PrMethod::ExactLineSearch);
  if (args.method != "els") methods.emplace_back("const", PrMethod::ConstantStep);
  for (const auto& [name, method] : methods) {
    PrRunOptions opts;
    opts.method = method;
    opts.step = args.step;
    opts.tol = args.tol;
    opts.max_k = args.max_k;
    const PrRun run = phase_retrieval_solve(inst, x0, opts);
    for (std::size_t k = 0; k < run.rel_error.size(); ++k) {
      r.rows.push_back({name, std::to_string(k), fmt(run.rel_error[k]), fmt(run.value[k])});
    }
    json meta = {{"iterations", run.iterations()}, {"converged", run.converged},
                 {"matvecs", run.matvecs}};
    if (run.iterations() > 0 && run.rel_error.front() > 0.0 && run.rel_error.back() > 0.0) {
      meta["contraction_per_step"] =
          std::pow(run.rel_error.back() / run.rel_error.front(),
                   1.0 / static_cast<double>(run.iterations()));
    }
    if (!run.converged) r.converged = false;
    runs[name] = meta;
  }
  r.config = {{"n", args.n}, {"m", m}, {"seed", args.seed}, {"method", args.method},
              {"step", args.step}, {"tol", args.tol}, {"max_k", args.max_k},
              {"init", args.init}};
  r.results = {{"instance", to_json(inst)},
               {"hessian_cond_at_x_true", cond.cond},
               {"hessian_positive_definite", cond.positive_definite},
               {"worst_case_rate", worst_case_roc(a)},
               {"init", init_meta},
               {"runs", runs}};
  return r;
}

// --------------------------------------------------------------- rosenbrock

struct RosenbrockArgs {
  std::size_t n = 2;
  std::size_t seeds = 100;
  std::uint64_t seed = 1;
  std::size_t max_k = 200'000;
  double f_target = 1e-10;
  std::size_t stride = 1;
};

Report rosenbrock(const RosenbrockArgs& args) {
  if (args.n < 2) throw UsageError("--n must be at least 2");
  if (args.seeds == 0) throw UsageError("--seeds must be positive");
  if (!(args.f_target > 0.0)) throw UsageError("--f-target must be positive");
  const std::size_t stride = std::max<std::size_t>(args.stride, 1);
  const RosenbrockObjective obj(args.n);
  const Vector xstar = Vector::Ones(static_cast<Eigen::Index>(args.n));
  const ConditionReport cond = symmetric_condition(rosenbrock_hessian(xstar));
  const double rate = worst_case_roc(1.0 / cond.cond);

  Report r;
  r.columns = {"series", "k", "f"};
  r.column_docs = {
      {"series", "run_<i> for seeded run i, or reference for f0 * ((1-a)/(1+a))^(2k)"},
      {"k", "iteration"},
      {"f", "objective value"}};
  Rng rng = make_stream(args.seed, 0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> f0s;
  json per_run = json::array();
  std::size_t beat = 0;
  std::vector<double> ratios;
  for (std::size_t run = 0; run < args.seeds; ++run) {
    Vector x0 = xstar;
    for (Eigen::Index i = 0; i < x0.size(); ++i) x0[i] += normal(rng);
    StopCriteria stop;
    stop.tol_grad = 0.0;
    stop.f_target = args.f_target;
    stop.max_k = args.max_k;
    const auto traj = els_gd_generic(obj, x0, stop);
    const std::string name = "run_" + std::to_string(run);
    for (std::size_t k = 0; k < traj.steps.size(); ++k) {
      if (k % stride == 0 || k + 1 == traj.steps.size()) {
        r.rows.push_back({name, std::to_string(k), fmt(traj.steps[k].f)});
      }
    }
    const double f0 = traj.steps.front().f;
    f0s.push_back(f0);
    const double k_ref = f0 <= args.f_target ? 0.0 : std::log(args.f_target / f0) / (2.0 * std::log(rate));
    const bool reached = traj.reason == StopReason::TargetValue;
    if (!reached) r.converged = false;
    if (reached && static_cast<double>(traj.iterations()) < k_ref) ++beat;
    if (k_ref > 0.0) ratios.push_back(static_cast<double>(traj.iterations()) / k_ref);
    per_run.push_back({{"iterations", traj.iterations()}, {"reference_iterations", k_ref},
                       {"f0", f0}, {"final_f", traj.steps.back().f},
                       {"stop", to_string(traj.reason)}});
  }
  std::vector<double> sorted = f0s;
  std::sort(sorted.begin(), sorted.end());
  const double f_ref0 = sorted[sorted.size() / 2];
  for (std::size_t k = 0;; k += stride) {
    const double f = f_ref0 * std::pow(rate, 2.0 * static_cast<double>(k));
    r.rows.push_back({"reference", std::to_string(k), fmt(f)});
    if (f < args.f_target) break;
  }
  std::sort(ratios.begin(), ratios.end());
  r.config = {{"n", args.n}, {"seeds", args.seeds}, {"seed", args.seed}, {"max_k", args.max_k},
              {"f_target", args.f_target}, {"stride", args.stride}};
  r.results = {{"hessian_cond_at_minimizer", cond.cond},
               {"worst_case_rate", rate},
               {"reference_f0", f_ref0},
               {"fraction_beating_reference",
                static_cast<double>(beat) / static_cast<double>(args.seeds)},
               {"median_iteration_ratio", ratios.empty() ? 0.0 : ratios[ratios.size() / 2]},
               {"runs", per_run}};
  return r;
}

// ------------------------------------------------------------ hessian-table

struct HessianTableArgs {
  std::string sizes = "100,200,400";
  std::uint64_t seed = 1;
  double delta = 0.5;
  std::size_t random_dirs = 3;
  bool allow_large = false;
};

Report hessian_table(const HessianTableArgs& args) {
  const auto raw = parse_list(args.sizes, "--sizes");
  if (raw.empty()) throw UsageError("--sizes must list at least one dimension");
  std::vector<std::size_t> sizes;
  for (double v : raw) {
    if (!(v >= 2.0) || v != std::floor(v)) throw UsageError("--sizes must be integers >= 2");
    if (v > 1000.0 && !args.allow_large) {
      throw UsageError("--sizes above 1000 need --allow-large (dense eigensolves)");
    }
    sizes.push_back(static_cast<std::size_t>(v));
  }
  Report r;
  r.columns = {"n", "m", "cond_at_xstar", "cond_along_a1"};
  r.column_docs = {{"n", "signal dimension"},
                   {"m", "measurements, round(n log2 n)"},
                   {"cond_at_xstar", "cond of the Hessian at x*"},
                   {"cond_along_a1", "cond at x* + delta a_1 / ||a_1||"}};
  for (std::size_t k = 0; k < args.random_dirs; ++k) {
    const std::string col = "cond_random_dir_" + std::to_string(k + 1);
    r.columns.push_back(col);
    r.column_docs[col] = "cond at x* + delta z / ||z||, z ~ N(0, I_n)";
  }
  json indefinite = json::array();
  for (std::size_t n : sizes) {
    const auto m = static_cast<std::size_t>(std::llround(static_cast<double>(n) * std::log2(static_cast<double>(n))));
    const auto inst = gen_phase_retrieval(n, m, args.seed);
    const Vector a1 = inst.sensors.col(0);
    std::vector<std::string> row{std::to_string(n), std::to_string(m)};
    auto record = [&](const Vector& x, const std::string& where) {
      const auto c = hessian_cond(inst, x);
      if (!c.positive_definite) indefinite.push_back({{"n", n}, {"at", where}});
      row.push_back(fmt(c.cond));
    };
    record(inst.x_true, "x_star");
    record(inst.x_true + args.delta * a1 / a1.norm(), "a1");
    Rng rng = make_stream(args.seed, 1000 + n);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t k = 0; k < args.random_dirs; ++k) {
      Vector z(static_cast<Eigen::Index>(n));
      for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = normal(rng);
      record(inst.x_true + args.delta * z / z.norm(), "random_" + std::to_string(k + 1));
    }
    r.rows.push_back(std::move(row));
  }
  r.config = {{"sizes", args.sizes}, {"seed", args.seed}, {"delta", args.delta},
              {"random_dirs", args.random_dirs}, {"allow_large", args.allow_large}};
  r.results = {{"indefinite", indefinite}};
  return r;
}

int emit(const std::string& command, const Report& report, const std::string& out_path,
         std::ostream& out, std::ostream& err) {
  const std::string csv = to_csv(report);
  if (out_path.empty()) {
    out << csv;
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
      err << "error: cannot open " << out_path << " for writing\n";
      return kExitUsage;
    }
    f << csv;
    std::ofstream meta(out_path + ".json", std::ios::binary);
    meta << sidecar(command, report).dump(2) << '\n';
  }
  if (!report.converged) {
    err << "warning: " << command << " did not converge; partial output retained\n";
    return kExitNonConvergence;
  }
  return kExitOk;
}

}  // namespace

std::string fmt(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

std::string to_csv(const Report& r) {
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + '"';
  };
  std::string out;
  for (std::size_t i = 0; i < r.columns.size(); ++i) {
    if (i) out += ',';
    out += quote(r.columns[i]);
  }
  out += '\n';
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += quote(row[i]);
    }
    out += '\n';
  }
  return out;
}

nlohmann::json sidecar(const std::string& command, const Report& r) {
  return nlohmann::json{{"command", command},
                        {"version", kVersion},
                        {"config", r.config},
                        {"columns", r.column_docs},
                        {"converged", r.converged},
                        {"results", r.results}};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact line search gradient descent: rate-of-convergence experiments", "elsgd"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));
  std::string out_path;

  RocTraceArgs trace;
  auto* c_trace = app.add_subcommand("roc-trace", "Per-step shrinking factors of exact line search GD");
  trace.spectrum.add_to(*c_trace);
  c_trace->add_option("--x0", trace.x0, "Initial vector: 'worst' or comma separated values");
  c_trace->add_option("--seed", trace.seed, "Seed for a uniform random x0 when --x0 is absent");
  c_trace->add_option("--max-k", trace.max_k, "Maximum number of steps");
  c_trace->add_option("--tol", trace.tol, "Stop when ||x||_A <= tol ||x0||_A");
  c_trace->add_option("--out", out_path, "CSV output path (a .json sidecar is written next to it)");

  AverageRocArgs avg;
  auto* c_avg = app.add_subcommand("average-roc", "Worst, average and RMS rate of convergence");
  avg.spectrum.add_to(*c_avg);
  c_avg->add_option("--sweep", avg.sweep, "Use a = 10^(-k/4) for k = 0..K");
  c_avg->add_option("--method", avg.method, "quad (n = 2 only) or mc");
  c_avg->add_option("--samples", avg.samples, "Monte Carlo sample count");
  c_avg->add_option("--seed", avg.seed, "Monte Carlo seed");
  c_avg->add_option("--tol", avg.tol, "Quadrature tolerance");
  c_avg->add_option("--out", out_path, "CSV output path");
  // --a accepts a list here; rebind it.
  c_avg->remove_option(c_avg->get_option("--a"));
  c_avg->add_option("--a", avg.a_list, "Comma separated values of a = 1/cond(A)");

  LimitAnglesArgs angles;
  auto* c_angles = app.add_subcommand("limit-angles", "Distribution of the limit angle (n >= 3)");
  angles.spectrum.add_to(*c_angles);
  c_angles->add_option("--samples", angles.samples, "Number of uniform initial vectors");
  c_angles->add_option("--bins", angles.bins, "Histogram bins on [0, pi/2]");
  c_angles->add_option("--seed", angles.seed, "Sampling seed");
  c_angles->add_option("--tol", angles.tol, "Limit-probability tolerance");
  c_angles->add_option("--max-iter", angles.max_iter, "Maximum T^2 applications per sample");
  c_angles->add_option("--out", out_path, "CSV output path");

  PhaseRetrievalArgs pr;
  auto* c_pr = app.add_subcommand("phase-retrieval", "Constant step vs exact line search on phase retrieval");
  c_pr->add_option("--n", pr.n, "Signal dimension");
  c_pr->add_option("--m", pr.m, "Measurements (default 10 n)");
  c_pr->add_option("--seed", pr.seed, "Instance seed");
  c_pr->add_option("--method", pr.method, "els, const or both");
  c_pr->add_option("--step", pr.step, "Constant step size");
  c_pr->add_option("--tol", pr.tol, "Relative error target");
  c_pr->add_option("--max-k", pr.max_k, "Maximum iterations per method");
  c_pr->add_option("--init", pr.init, "spectral or truth");
  c_pr->add_option("--out", out_path, "CSV output path");

  RosenbrockArgs rb;
  auto* c_rb = app.add_subcommand("rosenbrock", "Exact line search GD on the n-D Rosenbrock function");
  c_rb->add_option("--n", rb.n, "Dimension (>= 2)");
  c_rb->add_option("--seeds", rb.seeds, "Number of initial guesses x* + z");
  c_rb->add_option("--seed", rb.seed, "Sampling seed");
  c_rb->add_option("--max-k", rb.max_k, "Maximum iterations per run");
  c_rb->add_option("--f-target", rb.f_target, "Stop once f <= target");
  c_rb->add_option("--stride", rb.stride, "Record every stride-th iteration");
  c_rb->add_option("--out", out_path, "CSV output path");

  HessianTableArgs ht;
  auto* c_ht = app.add_subcommand("hessian-table", "Hessian condition numbers for phase retrieval");
  c_ht->add_option("--sizes", ht.sizes, "Comma separated dimensions");
  c_ht->add_option("--seed", ht.seed, "Instance seed");
  c_ht->add_option("--delta", ht.delta, "Offset from x*");
  c_ht->add_option("--random-dirs", ht.random_dirs, "Number of random directions");
  c_ht->add_flag("--allow-large", ht.allow_large, "Permit n > 1000");
  c_ht->add_option("--out", out_path, "CSV output path");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (c_trace->parsed()) return emit("roc-trace", roc_trace(trace), out_path, out, err);
    if (c_avg->parsed()) return emit("average-roc", average_roc(avg), out_path, out, err);
    if (c_angles->parsed()) return emit("limit-angles", limit_angles(angles), out_path, out, err);
    if (c_pr->parsed()) return emit("phase-retrieval", phase_retrieval(pr), out_path, out, err);
    if (c_rb->parsed()) return emit("rosenbrock", rosenbrock(rb), out_path, out, err);
    if (c_ht->parsed()) return emit("hessian-table", hessian_table(ht), out_path, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace elsgd::cli
