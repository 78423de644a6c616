#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "elsgd/numeric.hpp"
#include "elsgd/objective.hpp"

namespace elsgd {

struct ObservedEntry {
  std::size_t row = 0;
  std::size_t col = 0;
  double value = 0.0;
};

/// Rank-r completion of an m x n matrix M = X* Y*^T from entries on Omega.
struct MatrixCompletionInstance {
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t r = 0;
  double sample_fraction = 1.0;
  std::uint64_t seed = 0;
  std::vector<ObservedEntry> omega;
  Matrix x_true;  // m x r
  Matrix y_true;  // n x r
};

/// Factors have i.i.d. N(0,1) entries; each entry is observed independently
/// with probability sample_fraction. Throws if Omega comes out empty.
MatrixCompletionInstance gen_matrix_completion(std::size_t m, std::size_t n, std::size_t r,
                                               double sample_fraction, std::uint64_t seed);

nlohmann::json to_json(const MatrixCompletionInstance& inst);
MatrixCompletionInstance matrix_completion_from_json(const nlohmann::json& j);

/// sum over Omega of ((X Y^T)_ij - M_ij)^2.
double mc_value(const MatrixCompletionInstance& inst, const Matrix& x, const Matrix& y);

struct FactorGradient {
  Matrix dx;
  Matrix dy;
};

FactorGradient mc_grad(const MatrixCompletionInstance& inst, const Matrix& x, const Matrix& y);

/// t -> mc_value(X + t DX, Y + t DY) as an exact quartic.
QuarticPoly mc_line_quartic(const MatrixCompletionInstance& inst, const Matrix& x, const Matrix& y,
                            const Matrix& dx, const Matrix& dy);

/// Flattened variable [vec(X); vec(Y)] (column-major) for the generic driver.
class MatrixCompletionObjective final : public Objective {
 public:
  explicit MatrixCompletionObjective(const MatrixCompletionInstance& inst) : inst_(&inst) {}

  std::size_t dim() const override { return (inst_->m + inst_->n) * inst_->r; }
  double value(const Vector& z) const override;
  Vector gradient(const Vector& z) const override;
  QuarticPoly line_quartic(const Vector& z, const Vector& d) const override;

  std::pair<Matrix, Matrix> unpack(const Vector& z) const;
  Vector pack(const Matrix& x, const Matrix& y) const;

 private:
  const MatrixCompletionInstance* inst_;
};

}  // namespace elsgd
