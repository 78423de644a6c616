#include "elsgd/phase_retrieval.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "elsgd/parallel.hpp"

namespace elsgd {
namespace {

constexpr std::uint64_t kSensorStream = 0;
constexpr std::uint64_t kPowerStartStream = 1;

Vector sensor_inner(const PhaseRetrievalInstance& inst, const Vector& v, MatvecCounter* counter) {
  if (counter) ++counter->products;
  return inst.sensors.transpose() * v;
}

Vector sensor_combine(const PhaseRetrievalInstance& inst, const Vector& w, MatvecCounter* counter) {
  if (counter) ++counter->products;
  return inst.sensors * w;
}

void check_dim(const PhaseRetrievalInstance& inst, const Vector& x) {
  if (static_cast<std::size_t>(x.size()) != inst.n) {
    throw std::invalid_argument("phase retrieval: vector dimension does not match instance");
  }
}

}  // namespace

PhaseRetrievalInstance gen_phase_retrieval(std::size_t n, std::size_t m, std::uint64_t seed,
                                           bool normalize) {
  if (n == 0 || m == 0) throw std::invalid_argument("phase retrieval needs n >= 1 and m >= 1");
  PhaseRetrievalInstance inst;
  inst.n = n;
  inst.m = m;
  inst.seed = seed;
  inst.normalized = normalize;
  Rng rng = make_stream(seed, kSensorStream);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto rows = static_cast<Eigen::Index>(n);
  const auto cols = static_cast<Eigen::Index>(m);
  inst.sensors.resize(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) inst.sensors(i, j) = normal(rng);
  }
  inst.x_true.resize(rows);
  for (Eigen::Index i = 0; i < rows; ++i) inst.x_true[i] = normal(rng);
  if (normalize) inst.x_true /= inst.x_true.norm();
  inst.y = (inst.sensors.transpose() * inst.x_true).array().square();
  return inst;
}

nlohmann::json to_json(const PhaseRetrievalInstance& inst) {
  return nlohmann::json{
      {"kind", "phase_retrieval"},
      {"n", inst.n},
      {"m", inst.m},
      {"seed", inst.seed},
      {"normalized", inst.normalized},
      {"recipe",
       "mt19937_64 stream (seed, 0); a_j ~ N(0, I_n) column by column, then x_true ~ N(0, I_n)"},
  };
}

PhaseRetrievalInstance phase_retrieval_from_json(const nlohmann::json& j) {
  if (j.value("kind", std::string{}) != "phase_retrieval") {
    throw std::invalid_argument("json does not describe a phase retrieval instance");
  }
  return gen_phase_retrieval(j.at("n").get<std::size_t>(), j.at("m").get<std::size_t>(),
                             j.at("seed").get<std::uint64_t>(), j.value("normalized", true));
}

double pr_value(const PhaseRetrievalInstance& inst, const Vector& x) {
  check_dim(inst, x);
  const Vector r = inst.y - (inst.sensors.transpose() * x).array().square().matrix();
  return r.squaredNorm() / (4.0 * static_cast<double>(inst.m));
}

Vector pr_grad(const PhaseRetrievalInstance& inst, const Vector& x) {
  return pr_gradient_pipeline(inst, x).direction * -1.0;
}

Matrix pr_hessian(const PhaseRetrievalInstance& inst, const Vector& x) {
  check_dim(inst, x);
  const Vector ax = inst.sensors.transpose() * x;
  const Vector w = 3.0 * ax.array().square() - inst.y.array();
  Matrix h = inst.sensors * w.asDiagonal() * inst.sensors.transpose();
  h /= static_cast<double>(inst.m);
  return 0.5 * (h + h.transpose());
}

QuarticPoly pr_line_quartic(const PhaseRetrievalInstance& inst, const Vector& x, const Vector& d,
                            MatvecCounter* counter) {
  check_dim(inst, x);
  check_dim(inst, d);
  const Vector ax = sensor_inner(inst, x, counter);
  const Vector ad = sensor_inner(inst, d, counter);
  const Vector alpha = ax.array().square().matrix() - inst.y;
  const Vector beta = 2.0 * ax.cwiseProduct(ad);
  const Vector gamma = ad.array().square();
  return QuarticPoly{gamma.dot(gamma), 2.0 * beta.dot(gamma),
                     beta.dot(beta) + 2.0 * alpha.dot(gamma), 2.0 * alpha.dot(beta),
                     alpha.dot(alpha)};
}

PrDescent pr_gradient_pipeline(const PhaseRetrievalInstance& inst, const Vector& x,
                               MatvecCounter* counter) {
  check_dim(inst, x);
  const double m = static_cast<double>(inst.m);
  const Vector ax = sensor_inner(inst, x, counter);
  const Vector alpha = ax.array().square().matrix() - inst.y;
  PrDescent out;
  out.direction = sensor_combine(inst, alpha.cwiseProduct(ax), counter) / -m;
  out.value = alpha.squaredNorm() / (4.0 * m);
  return out;
}

PrDescent pr_descent_pipeline(const PhaseRetrievalInstance& inst, const Vector& x,
                              MatvecCounter* counter) {
  check_dim(inst, x);
  const double m = static_cast<double>(inst.m);
  const Vector ax = sensor_inner(inst, x, counter);                // (1)
  const Vector alpha = ax.array().square().matrix() - inst.y;      // (2)
  PrDescent out;
  out.direction = sensor_combine(inst, alpha.cwiseProduct(ax), counter) / -m;  // (3)
  const Vector ad = sensor_inner(inst, out.direction, counter);   // (4)
  const Vector beta = 2.0 * ax.cwiseProduct(ad);                   // (5)
  const Vector gamma = ad.array().square();                        // (6)
  out.quartic = QuarticPoly{gamma.dot(gamma), 2.0 * beta.dot(gamma),
                            beta.dot(beta) + 2.0 * alpha.dot(gamma), 2.0 * alpha.dot(beta),
                            alpha.dot(alpha)};                     // (7)
  out.value = out.quartic.c0 / (4.0 * m);
  return out;
}

SpectralInit spectral_init(const PhaseRetrievalInstance& inst, double tol, std::size_t max_iter) {
  if (inst.m == 0 || inst.sensors.cols() == 0) {
    throw std::invalid_argument("spectral_init needs at least one measurement");
  }
  const double m = static_cast<double>(inst.m);
  Rng rng = make_stream(inst.seed, kPowerStartStream);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(static_cast<Eigen::Index>(inst.n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = normal(rng);
  v.normalize();
  SpectralInit out;
  for (std::size_t it = 1; it <= max_iter; ++it) {
    Vector w = inst.sensors * inst.y.cwiseProduct(inst.sensors.transpose() * v) / m;
    const double norm = w.norm();
    if (norm == 0.0) break;
    w /= norm;
    if (w.dot(v) < 0.0) w = -w;
    const double change = (w - v).norm();
    v = std::move(w);
    out.iterations = it;
    if (change <= tol) {
      out.converged = true;
      break;
    }
  }
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] != 0.0) {
      if (v[i] < 0.0) v = -v;
      break;
    }
  }
  out.x = std::sqrt(inst.y.mean()) * v;
  return out;
}

ConditionReport symmetric_condition(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("symmetric eigensolve failed");
  const Vector& ev = es.eigenvalues();
  ConditionReport r;
  r.lambda_min = ev.minCoeff();
  r.lambda_max = ev.maxCoeff();
  r.positive_definite = r.lambda_min > 0.0;
  if (r.positive_definite) {
    r.cond = r.lambda_max / r.lambda_min;
  } else {
    r.cond = ev.cwiseAbs().maxCoeff() / ev.cwiseAbs().minCoeff();
  }
  return r;
}

ConditionReport hessian_cond(const PhaseRetrievalInstance& inst, const Vector& x) {
  return symmetric_condition(pr_hessian(inst, x));
}

double pr_relative_error(const PhaseRetrievalInstance& inst, const Vector& x) {
  check_dim(inst, x);
  return std::min((x - inst.x_true).norm(), (x + inst.x_true).norm()) / inst.x_true.norm();
}

PrRun phase_retrieval_solve(const PhaseRetrievalInstance& inst, const Vector& x0,
                            const PrRunOptions& opts) {
  check_dim(inst, x0);
  MatvecCounter counter;
  PrRun run;
  Vector x = x0;
  for (std::size_t k = 0;; ++k) {
    const double err = pr_relative_error(inst, x);
    run.rel_error.push_back(err);
    if (err <= opts.tol) {
      run.value.push_back(pr_value(inst, x));
      run.converged = true;
      break;
    }
    if (k >= opts.max_k) {
      run.value.push_back(pr_value(inst, x));
      break;
    }
    double t = opts.step;
    PrDescent step;
    if (opts.method == PrMethod::ExactLineSearch) {
      step = pr_descent_pipeline(inst, x, &counter);
      t = minimize_quartic_nonneg(step.quartic).t_star;
    } else {
      step = pr_gradient_pipeline(inst, x, &counter);
    }
    run.value.push_back(step.value);
    run.step_sizes.push_back(t);
    if (t == 0.0) break;
    x += t * step.direction;
  }
  run.final_x = x;
  run.matvecs = counter.products;
  return run;
}

QuarticPoly PhaseRetrievalObjective::line_quartic(const Vector& x, const Vector& d) const {
  return pr_line_quartic(*inst_, x, d) * (1.0 / (4.0 * static_cast<double>(inst_->m)));
}

}  // namespace elsgd
