#include "tensordict/tensor.hpp"

#include <iostream>
#include <mutex>

namespace tensordict {

namespace {
std::mutex g_sink_mutex;
WarningSink g_sink;
}  // namespace

void set_warning_sink(WarningSink sink) {
  std::lock_guard<std::mutex> lock(g_sink_mutex);
  g_sink = std::move(sink);
}

void warn(const std::string& message) {
  std::lock_guard<std::mutex> lock(g_sink_mutex);
  if (g_sink)
    g_sink(message);
  else
    std::cerr << "warning: " << message << '\n';
}

Tensor symmetric_rank_sum4(const Eigen::MatrixXd& a, const Eigen::VectorXd& weights) {
  const Index d = a.rows();
  if (weights.size() != 0 && weights.size() != a.cols())
    throw ShapeError("symmetric_rank_sum4: one weight per column required");
  // Σ_i w_i (a_i⊗a_i)(a_i⊗a_i)ᵀ as a d²×d² matrix is the row-major order-4 tensor.
  const Eigen::MatrixXd pairs = khatri_rao(a, a);
  Eigen::MatrixXd flat;
  if (weights.size() == 0)
    flat = pairs * pairs.transpose();
  else
    flat = pairs * weights.asDiagonal() * pairs.transpose();
  Eigen::VectorXd data(d * d * d * d);
  // flat is symmetric, so its column-major storage equals the row-major one.
  data = Eigen::Map<const Eigen::VectorXd>(flat.data(), flat.size());
  return Tensor(std::vector<Index>(4, d), std::move(data));
}

Eigen::MatrixXd pair_contractions(const Tensor& t, const Eigen::MatrixXd& u) {
  if (t.order() != 4 || !t.is_cubic(u.rows()))
    throw ShapeError("pair_contractions needs a d^4 tensor matching U's rows");
  const Index d = u.rows();
  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMat> flat(t.data().data(), d * d, d * d);
  const Eigen::MatrixXd pairs = khatri_rao(u, u);
  return pairs.transpose() * (flat * pairs);
}

}  // namespace tensordict
