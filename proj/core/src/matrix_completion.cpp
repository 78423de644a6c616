#include "elsgd/matrix_completion.hpp"

#include <stdexcept>
#include <string>

#include "elsgd/parallel.hpp"

namespace elsgd {
namespace {

void check_factors(const MatrixCompletionInstance& inst, const Matrix& x, const Matrix& y) {
  const auto r = static_cast<Eigen::Index>(inst.r);
  if (x.rows() != static_cast<Eigen::Index>(inst.m) || x.cols() != r ||
      y.rows() != static_cast<Eigen::Index>(inst.n) || y.cols() != r) {
    throw std::invalid_argument("matrix completion: factor shapes do not match instance");
  }
}

double entry(const Matrix& x, const Matrix& y, std::size_t i, std::size_t j) {
  return x.row(static_cast<Eigen::Index>(i)).dot(y.row(static_cast<Eigen::Index>(j)));
}

}  // namespace

MatrixCompletionInstance gen_matrix_completion(std::size_t m, std::size_t n, std::size_t r,
                                               double sample_fraction, std::uint64_t seed) {
  if (m == 0 || n == 0 || r == 0) throw std::invalid_argument("matrix completion needs m, n, r >= 1");
  if (!(sample_fraction > 0.0 && sample_fraction <= 1.0)) {
    throw std::invalid_argument("sample_fraction must lie in (0, 1]");
  }
  MatrixCompletionInstance inst;
  inst.m = m;
  inst.n = n;
  inst.r = r;
  inst.sample_fraction = sample_fraction;
  inst.seed = seed;
  Rng rng = make_stream(seed, 0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::bernoulli_distribution keep(sample_fraction);
  inst.x_true.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(r));
  inst.y_true.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(r));
  for (Eigen::Index i = 0; i < inst.x_true.size(); ++i) inst.x_true.data()[i] = normal(rng);
  for (Eigen::Index i = 0; i < inst.y_true.size(); ++i) inst.y_true.data()[i] = normal(rng);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      if (keep(rng)) inst.omega.push_back({i, j, entry(inst.x_true, inst.y_true, i, j)});
    }
  }
  if (inst.omega.empty()) throw std::invalid_argument("sampled observation set is empty");
  return inst;
}

nlohmann::json to_json(const MatrixCompletionInstance& inst) {
  return nlohmann::json{
      {"kind", "matrix_completion"},
      {"m", inst.m},
      {"n", inst.n},
      {"r", inst.r},
      {"sample_fraction", inst.sample_fraction},
      {"seed", inst.seed},
      {"observed", inst.omega.size()},
      {"recipe",
       "mt19937_64 stream (seed, 0); X*, Y* ~ N(0,1) column-major, then Bernoulli(sample_fraction) "
       "per entry in column-major order"},
  };
}

MatrixCompletionInstance matrix_completion_from_json(const nlohmann::json& j) {
  if (j.value("kind", std::string{}) != "matrix_completion") {
    throw std::invalid_argument("json does not describe a matrix completion instance");
  }
  return gen_matrix_completion(j.at("m").get<std::size_t>(), j.at("n").get<std::size_t>(),
                               j.at("r").get<std::size_t>(), j.at("sample_fraction").get<double>(),
                               j.at("seed").get<std::uint64_t>());
}

double mc_value(const MatrixCompletionInstance& inst, const Matrix& x, const Matrix& y) {
  check_factors(inst, x, y);
  CompensatedSum acc;
  for (const auto& e : inst.omega) {
    const double res = entry(x, y, e.row, e.col) - e.value;
    acc += res * res;
  }
  return acc.value();
}

FactorGradient mc_grad(const MatrixCompletionInstance& inst, const Matrix& x, const Matrix& y) {
  check_factors(inst, x, y);
  FactorGradient g{Matrix::Zero(x.rows(), x.cols()), Matrix::Zero(y.rows(), y.cols())};
  for (const auto& e : inst.omega) {
    const auto i = static_cast<Eigen::Index>(e.row);
    const auto j = static_cast<Eigen::Index>(e.col);
    const double res = x.row(i).dot(y.row(j)) - e.value;
    g.dx.row(i) += 2.0 * res * y.row(j);
    g.dy.row(j) += 2.0 * res * x.row(i);
  }
  return g;
}

QuarticPoly mc_line_quartic(const MatrixCompletionInstance& inst, const Matrix& x, const Matrix& y,
                            const Matrix& dx, const Matrix& dy) {
  check_factors(inst, x, y);
  check_factors(inst, dx, dy);
  QuarticPoly q;
  for (const auto& e : inst.omega) {
    const auto i = static_cast<Eigen::Index>(e.row);
    const auto j = static_cast<Eigen::Index>(e.col);
    // ((X + t DX)(Y + t DY)^T)_ij - M_ij = r0 + r1 t + r2 t^2
    const double r0 = x.row(i).dot(y.row(j)) - e.value;
    const double r1 = x.row(i).dot(dy.row(j)) + dx.row(i).dot(y.row(j));
    const double r2 = dx.row(i).dot(dy.row(j));
    q += QuarticPoly::square_of_quadratic(r0, r1, r2);
  }
  return q;
}

std::pair<Matrix, Matrix> MatrixCompletionObjective::unpack(const Vector& z) const {
  if (static_cast<std::size_t>(z.size()) != dim()) {
    throw std::invalid_argument("matrix completion: flattened variable has wrong size");
  }
  const auto m = static_cast<Eigen::Index>(inst_->m);
  const auto n = static_cast<Eigen::Index>(inst_->n);
  const auto r = static_cast<Eigen::Index>(inst_->r);
  Matrix x = Eigen::Map<const Matrix>(z.data(), m, r);
  Matrix y = Eigen::Map<const Matrix>(z.data() + m * r, n, r);
  return {std::move(x), std::move(y)};
}

Vector MatrixCompletionObjective::pack(const Matrix& x, const Matrix& y) const {
  Vector z(static_cast<Eigen::Index>(dim()));
  z.head(x.size()) = Eigen::Map<const Vector>(x.data(), x.size());
  z.tail(y.size()) = Eigen::Map<const Vector>(y.data(), y.size());
  return z;
}

double MatrixCompletionObjective::value(const Vector& z) const {
  const auto [x, y] = unpack(z);
  return mc_value(*inst_, x, y);
}

Vector MatrixCompletionObjective::gradient(const Vector& z) const {
  const auto [x, y] = unpack(z);
  const auto g = mc_grad(*inst_, x, y);
  return pack(g.dx, g.dy);
}

QuarticPoly MatrixCompletionObjective::line_quartic(const Vector& z, const Vector& d) const {
  const auto [x, y] = unpack(z);
  const auto [dx, dy] = unpack(d);
  return mc_line_quartic(*inst_, x, y, dx, dy);
}

}  // namespace elsgd
