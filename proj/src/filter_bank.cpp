#include "tensordict/filter_bank.hpp"

#include <cmath>
#include <string>

#include "tensordict/circulant.hpp"

namespace tensordict {

FilterBank::FilterBank(Eigen::MatrixXd filters) : filters_(std::move(filters)) {
  if (filters_.rows() == 0 || filters_.cols() == 0)
    throw ShapeError("filter bank needs n >= 1 and L >= 1");
  if (!filters_.allFinite()) throw PreconditionError("filter bank has non-finite entries");
  for (Index l = 0; l < filters_.cols(); ++l)
    if (std::abs(filters_.col(l).norm() - 1.0) > kUnitTolerance)
      throw PreconditionError("filter " + std::to_string(l) + " is not unit norm");
}

FilterBank FilterBank::normalized(const Eigen::MatrixXd& raw) {
  Eigen::MatrixXd f = raw;
  for (Index l = 0; l < f.cols(); ++l) {
    const double norm = f.col(l).norm();
    if (norm == 0.0 || !std::isfinite(norm))
      throw DegenerateError("filter " + std::to_string(l) + " has zero norm");
    f.col(l) /= norm;
  }
  return FilterBank(std::move(f));
}

FilterBank FilterBank::random(Index n, Index count, Rng& rng) {
  return normalized(gaussian_matrix(n, count, rng));
}

Eigen::MatrixXd FilterBank::stacked_circulant() const {
  const Index n = length();
  Eigen::MatrixXd out(n, n * count());
  for (Index l = 0; l < count(); ++l)
    out.middleCols(l * n, n) = circulant::circulant_dense(filters_.col(l));
  return out;
}

}  // namespace tensordict
