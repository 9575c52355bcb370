#pragma once

// Dense tensors and the multilinear / Khatri-Rao algebra built on them.
//
// Storage is row-major (last index fastest) and 0-based; every
// multi-index -> offset conversion goes through DenseTensor::offset().

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "tensordict/errors.hpp"

namespace tensordict {

using Index = Eigen::Index;

inline constexpr int kMaxOrder = 6;

template <typename Scalar>
class DenseTensor {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  DenseTensor() = default;

  explicit DenseTensor(std::vector<Index> dims) : dims_(std::move(dims)) {
    check_dims(dims_);
    data_ = Vector::Zero(product(dims_));
  }

  DenseTensor(std::vector<Index> dims, Vector data)
      : dims_(std::move(dims)), data_(std::move(data)) {
    check_dims(dims_);
    if (data_.size() != product(dims_))
      throw ShapeError("tensor data length " + std::to_string(data_.size()) +
                       " does not match product of dims " +
                       std::to_string(product(dims_)));
  }

  static DenseTensor cube(int order, Index extent) {
    return DenseTensor(std::vector<Index>(static_cast<size_t>(order), extent));
  }

  int order() const { return static_cast<int>(dims_.size()); }
  const std::vector<Index>& dims() const { return dims_; }
  Index dim(int mode) const { return dims_.at(static_cast<size_t>(mode)); }
  Index size() const { return data_.size(); }

  const Vector& data() const { return data_; }
  Vector& data() { return data_; }

  bool is_cubic(Index extent) const {
    return std::all_of(dims_.begin(), dims_.end(),
                       [extent](Index e) { return e == extent; });
  }
  bool is_cubic() const { return !dims_.empty() && is_cubic(dims_.front()); }

  Index offset(std::span<const Index> idx) const {
    Index off = 0;
    for (size_t m = 0; m < dims_.size(); ++m) off = off * dims_[m] + idx[m];
    return off;
  }

  template <typename... I>
  Scalar operator()(I... idx) const {
    const Index ix[] = {static_cast<Index>(idx)...};
    return data_[offset(ix)];
  }
  template <typename... I>
  Scalar& operator()(I... idx) {
    const Index ix[] = {static_cast<Index>(idx)...};
    return data_[offset(ix)];
  }

  Scalar at(std::span<const Index> idx) const { return data_[offset(idx)]; }

  Scalar squared_norm() const { return data_.squaredNorm(); }
  Scalar norm() const { return data_.norm(); }

  bool all_finite() const { return data_.allFinite(); }

  friend DenseTensor operator+(const DenseTensor& a, const DenseTensor& b) {
    require_same_dims(a, b);
    return DenseTensor(a.dims_, a.data_ + b.data_);
  }
  friend DenseTensor operator-(const DenseTensor& a, const DenseTensor& b) {
    require_same_dims(a, b);
    return DenseTensor(a.dims_, a.data_ - b.data_);
  }
  friend DenseTensor operator*(Scalar s, const DenseTensor& a) {
    return DenseTensor(a.dims_, s * a.data_);
  }

  static Index product(const std::vector<Index>& dims) {
    return std::accumulate(dims.begin(), dims.end(), Index{1},
                           std::multiplies<Index>());
  }

 private:
  static void check_dims(const std::vector<Index>& dims) {
    if (dims.empty() || static_cast<int>(dims.size()) > kMaxOrder)
      throw UnsupportedOrderError("tensor order must be in 1.." +
                                  std::to_string(kMaxOrder));
    for (Index e : dims)
      if (e <= 0) throw ShapeError("tensor extents must be positive");
  }
  static void require_same_dims(const DenseTensor& a, const DenseTensor& b) {
    if (a.dims_ != b.dims_) throw ShapeError("tensor dims differ");
  }

  std::vector<Index> dims_;
  Vector data_;
};

using Tensor = DenseTensor<double>;

/// v ⊗ v ⊗ ... (p times), p in 2..4.
template <typename Scalar>
DenseTensor<Scalar> outer_power(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& v,
                                int p) {
  if (p < 2 || p > 4)
    throw UnsupportedOrderError("outer_power supports orders 2..4, got " +
                                std::to_string(p));
  if (v.size() == 0) throw ShapeError("outer_power of an empty vector");
  const Index d = v.size();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> acc = v;
  for (int k = 1; k < p; ++k) {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> next(acc.size() * d);
    for (Index i = 0; i < acc.size(); ++i) next.segment(i * d, d) = acc[i] * v;
    acc = std::move(next);
  }
  return DenseTensor<Scalar>(std::vector<Index>(static_cast<size_t>(p), d),
                             std::move(acc));
}

/// Tensor (outer) product: (A⊗B)_{i..., j...} = A_{i...} B_{j...}.
template <typename Scalar>
DenseTensor<Scalar> outer(const DenseTensor<Scalar>& a, const DenseTensor<Scalar>& b) {
  std::vector<Index> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  if (static_cast<int>(dims.size()) > kMaxOrder)
    throw UnsupportedOrderError("outer product exceeds maximum order");
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> data(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i)
    data.segment(i * b.size(), b.size()) = a.data()[i] * b.data();
  return DenseTensor<Scalar>(std::move(dims), std::move(data));
}

/// Contracts one mode: out[.., i, ..] = Σ_j T[.., j, ..] M(j, i).
template <typename Scalar>
DenseTensor<Scalar> mode_product(
    const DenseTensor<Scalar>& t, int mode,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& m) {
  using RowMat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  if (mode < 0 || mode >= t.order()) throw ShapeError("mode out of range");
  const Index extent = t.dim(mode);
  if (m.rows() != extent)
    throw ShapeError("map for mode " + std::to_string(mode) + " has " +
                     std::to_string(m.rows()) + " rows, expected " +
                     std::to_string(extent));
  Index pre = 1, post = 1;
  for (int k = 0; k < mode; ++k) pre *= t.dim(k);
  for (int k = mode + 1; k < t.order(); ++k) post *= t.dim(k);

  std::vector<Index> dims = t.dims();
  dims[static_cast<size_t>(mode)] = m.cols();
  DenseTensor<Scalar> out(dims);
  for (Index p = 0; p < pre; ++p) {
    Eigen::Map<const RowMat> in_slice(t.data().data() + p * extent * post, extent, post);
    Eigen::Map<RowMat> out_slice(out.data().data() + p * m.cols() * post, m.cols(), post);
    out_slice.noalias() = m.transpose() * in_slice;
  }
  return out;
}

/// [T(M_1, ..., M_p)]_{i_1..i_p} = Σ T_{j_1..j_p} Π_t M_t(j_t, i_t).
/// Vectors are d×1 maps, so an all-vector call yields a tensor whose extents
/// are all 1; multilinear_scalar() unwraps that case.
template <typename Scalar>
DenseTensor<Scalar> multilinear_form(
    const DenseTensor<Scalar>& t,
    const std::vector<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>>& maps) {
  if (static_cast<int>(maps.size()) != t.order())
    throw ShapeError("multilinear_form needs one map per mode");
  DenseTensor<Scalar> out = t;
  for (int mode = 0; mode < t.order(); ++mode)
    out = mode_product(out, mode, maps[static_cast<size_t>(mode)]);
  return out;
}

template <typename Scalar>
Scalar multilinear_scalar(const DenseTensor<Scalar>& t,
                          const std::vector<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>& vecs) {
  std::vector<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> maps(vecs.begin(),
                                                                          vecs.end());
  return multilinear_form(t, maps).data()[0];
}

/// unfold(T) = [T(:,:,1), ..., T(:,:,n)], i.e. column j + k·n holds T(:, j, k).
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> unfold3(const DenseTensor<Scalar>& t) {
  if (t.order() != 3 || !t.is_cubic()) throw ShapeError("unfold3 needs an n×n×n tensor");
  const Index n = t.dim(0);
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(n, n * n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < n; ++k) out(i, j + k * n) = t(i, j, k);
  return out;
}

template <typename Scalar>
DenseTensor<Scalar> fold3(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& m) {
  const Index n = m.rows();
  if (n == 0 || m.cols() != n * n) throw ShapeError("fold3 needs an n×n² matrix");
  auto t = DenseTensor<Scalar>::cube(3, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < n; ++k) t(i, j, k) = m(i, j + k * n);
  return t;
}

/// Column-wise Kronecker product; column j is [A(0,j)·B_j; A(1,j)·B_j; ...].
template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> khatri_rao(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  if (a.cols() != b.cols())
    throw ShapeError("khatri_rao needs equal column counts (" + std::to_string(a.cols()) +
                     " vs " + std::to_string(b.cols()) + ")");
  Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> out(
      a.rows() * b.rows(), a.cols());
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i)
      out.col(j).segment(i * b.rows(), b.rows()) = a(i, j) * b.col(j);
  return out;
}

/// A·Diag(λ)·(C⊙B)ᵀ computed slice by slice without forming the Khatri-Rao
/// product: column j + k·n of the result is Σ_r λ_r A_r B(j,r) C(k,r).
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> cp_unfolded(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& a,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& lambda,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& b,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& c) {
  const Index r = a.cols();
  if (b.cols() != r || c.cols() != r || lambda.size() != r)
    throw ShapeError("cp_unfolded factor column counts differ");
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows(), b.rows() * c.rows());
  for (Index k = 0; k < c.rows(); ++k) {
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> w =
        lambda.cwiseProduct(c.row(k).transpose());
    out.middleCols(k * b.rows(), b.rows()).noalias() = a * w.asDiagonal() * b.transpose();
  }
  return out;
}

/// ptrace(T)_{i1 i2 i3 i4} = Σ_i T(i, i1, i2, i, i3, i4).
template <typename Scalar>
DenseTensor<Scalar> ptrace(const DenseTensor<Scalar>& t) {
  if (t.order() != 6 || !t.is_cubic()) throw ShapeError("ptrace needs a d^6 tensor");
  const Index d = t.dim(0);
  auto out = DenseTensor<Scalar>::cube(4, d);
  for (Index i1 = 0; i1 < d; ++i1)
    for (Index i2 = 0; i2 < d; ++i2)
      for (Index i3 = 0; i3 < d; ++i3)
        for (Index i4 = 0; i4 < d; ++i4) {
          Scalar acc = 0;
          for (Index i = 0; i < d; ++i) acc += t(i, i1, i2, i, i3, i4);
          out(i1, i2, i3, i4) = acc;
        }
  return out;
}

/// Σ_i w_i a_i^{⊗4} for the columns a_i of A (unit weights when w is empty).
Tensor symmetric_rank_sum4(const Eigen::MatrixXd& a, const Eigen::VectorXd& weights = {});

/// Q(i, j) = T(u_i, u_i, u_j, u_j) for an order-4 tensor and the columns of U.
Eigen::MatrixXd pair_contractions(const Tensor& t, const Eigen::MatrixXd& u);

}  // namespace tensordict
