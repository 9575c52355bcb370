#pragma once

#include <Eigen/Dense>

#include "tensordict/random.hpp"
#include "tensordict/tensor.hpp"

namespace tensordict {

/// L unit-norm filters of length n, stored as the columns of an n×L matrix.
class FilterBank {
 public:
  static constexpr double kUnitTolerance = 1e-10;

  /// Throws PreconditionError unless every column is unit norm to 1e-10.
  explicit FilterBank(Eigen::MatrixXd filters);

  /// Normalizes every column; throws DegenerateError on a zero column.
  static FilterBank normalized(const Eigen::MatrixXd& raw);
  /// i.i.d. Gaussian entries, then unit-normalized.
  static FilterBank random(Index n, Index count, Rng& rng);

  Index length() const { return filters_.rows(); }
  Index count() const { return filters_.cols(); }
  const Eigen::MatrixXd& matrix() const { return filters_; }
  Eigen::VectorXd filter(Index l) const { return filters_.col(l); }

  /// Column-stacked circulant [Cir(f_1), ..., Cir(f_L)] (n × nL).
  Eigen::MatrixXd stacked_circulant() const;

 private:
  Eigen::MatrixXd filters_;
};

}  // namespace tensordict
