#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "elsgd/numeric.hpp"
#include "elsgd/objective.hpp"
#include "elsgd/quartic.hpp"

namespace elsgd {

/// Real phase retrieval with Gaussian sensors: recover x from
/// y_j = (a_j^T x)^2, j = 1..m.
struct PhaseRetrievalInstance {
  std::size_t n = 0;
  std::size_t m = 0;
  std::uint64_t seed = 0;
  bool normalized = true;  // x_true scaled to unit norm
  Matrix sensors;  // n x m, column j is a_j
  Vector y;
  Vector x_true;
};

/// Deterministic for a fixed (n, m, seed, normalize). Sensors are drawn
/// first (column by column), then x_true.
PhaseRetrievalInstance gen_phase_retrieval(std::size_t n, std::size_t m, std::uint64_t seed,
                                           bool normalize = true);

/// Regeneration recipe; the matrices themselves are never serialized.
nlohmann::json to_json(const PhaseRetrievalInstance& inst);
PhaseRetrievalInstance phase_retrieval_from_json(const nlohmann::json& j);

/// f(x) = (1/4m) sum_j (y_j - (a_j^T x)^2)^2.
double pr_value(const PhaseRetrievalInstance& inst, const Vector& x);
/// grad f(x) = -(1/m) sum_j (y_j - (a_j^T x)^2)(a_j^T x) a_j.
Vector pr_grad(const PhaseRetrievalInstance& inst, const Vector& x);
/// (1/m) sum_j (3 (a_j^T x)^2 - y_j) a_j a_j^T.
Matrix pr_hessian(const PhaseRetrievalInstance& inst, const Vector& x);

/// Counts dense m x n matrix-vector products.
struct MatvecCounter {
  std::size_t products = 0;
};

/// Unscaled line polynomial
///   (g.g) t^4 + 2(b.g) t^3 + (b.b + 2 a.g) t^2 + 2(a.b) t + a.a
/// with a = -y + (A^T x)^2, b = 2 (A^T x)(A^T d), g = (A^T d)^2 taken
/// componentwise. Equals 4m f(x + t d); the factor does not move the argmin.
/// Costs two products (A^T x and A^T d).
QuarticPoly pr_line_quartic(const PhaseRetrievalInstance& inst, const Vector& x, const Vector& d,
                            MatvecCounter* counter = nullptr);

struct PrDescent {
  Vector direction;  // -grad f(x)
  QuarticPoly quartic;  // unscaled, as pr_line_quartic
  double value = 0.0;  // f(x)
};

/// Direction and line polynomial in one pass: A^T x, A (alpha . A^T x), A^T d.
/// Exactly three products.
PrDescent pr_descent_pipeline(const PhaseRetrievalInstance& inst, const Vector& x,
                              MatvecCounter* counter = nullptr);

/// Direction and value only (steps 1-3 of the pipeline): two products.
/// The returned quartic is left zero.
PrDescent pr_gradient_pipeline(const PhaseRetrievalInstance& inst, const Vector& x,
                               MatvecCounter* counter = nullptr);

struct SpectralInit {
  Vector x;
  std::size_t iterations = 0;
  bool converged = false;
};

/// sqrt(mean y) times the top eigenvector of (1/m) sum_j y_j a_j a_j^T, by
/// power iteration (tol 1e-10 on the iterate change, at most max_iter steps).
/// Sign fixed so that the first nonzero coordinate is positive.
SpectralInit spectral_init(const PhaseRetrievalInstance& inst, double tol = 1e-10,
                           std::size_t max_iter = 10'000);

struct ConditionReport {
  double cond = 0.0;  // lambda_max / lambda_min, or max|lambda| / min|lambda| if indefinite
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  bool positive_definite = true;
};

/// Condition number of a symmetric matrix from its eigenvalues.
ConditionReport symmetric_condition(const Matrix& h);

ConditionReport hessian_cond(const PhaseRetrievalInstance& inst, const Vector& x);

/// min(||x - x_true||, ||x + x_true||) / ||x_true||.
double pr_relative_error(const PhaseRetrievalInstance& inst, const Vector& x);

enum class PrMethod { ExactLineSearch, ConstantStep };

struct PrRunOptions {
  PrMethod method = PrMethod::ExactLineSearch;
  double step = 0.1;  // constant-step only
  double tol = 1e-10;  // relative error target
  std::size_t max_k = 100'000;
};

struct PrRun {
  std::vector<double> rel_error;  // per iterate, starting at x0
  std::vector<double> value;
  std::vector<double> step_sizes;
  Vector final_x;
  bool converged = false;
  std::size_t matvecs = 0;

  std::size_t iterations() const { return rel_error.empty() ? 0 : rel_error.size() - 1; }
};

/// Gradient descent on the phase retrieval objective until the relative
/// error reaches opts.tol. Exact line search uses pr_descent_pipeline.
PrRun phase_retrieval_solve(const PhaseRetrievalInstance& inst, const Vector& x0,
                            const PrRunOptions& opts);

/// Objective adaptor for the generic driver; line_quartic is the pipeline
/// polynomial divided by 4m.
class PhaseRetrievalObjective final : public Objective {
 public:
  explicit PhaseRetrievalObjective(const PhaseRetrievalInstance& inst) : inst_(&inst) {}

  std::size_t dim() const override { return inst_->n; }
  double value(const Vector& x) const override { return pr_value(*inst_, x); }
  Vector gradient(const Vector& x) const override { return pr_grad(*inst_, x); }
  QuarticPoly line_quartic(const Vector& x, const Vector& d) const override;

 private:
  const PhaseRetrievalInstance* inst_;
};

}  // namespace elsgd
