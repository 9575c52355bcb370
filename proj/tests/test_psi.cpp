#include <doctest.h>

#include "tensordict/filter_bank.hpp"
#include "tensordict/psi.hpp"

using namespace tensordict;

namespace {

Eigen::MatrixXd dense_pinv(const Eigen::MatrixXd& a, double cutoff) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd s = svd.singularValues();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
  for (Index i = 0; i < s.size(); ++i)
    if (s[i] > cutoff * s[0]) inv[i] = 1.0 / s[i];
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Eigen::MatrixXd gram_product(const FilterBank& g, const FilterBank& h) {
  const Eigen::MatrixXd gs = g.stacked_circulant(), hs = h.stacked_circulant();
  return (hs.transpose() * hs).cwiseProduct(gs.transpose() * gs);
}

}  // namespace

TEST_SUITE("psi") {

TEST_CASE("conjugating by the Fourier basis gives the Hadamard product of Grams") {
  Rng rng(51);
  for (Index n : {3, 4, 7})
    for (Index count : {1, 2, 3}) {
      const FilterBank g = FilterBank::random(n, count, rng), h = FilterBank::random(n, count, rng);
      const PsiBlocks psi = psi_build(g, h);
      CHECK((psi.conjugated_dense() - gram_product(g, h)).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("frequency view and identity") {
  const PsiBlocks id = PsiBlocks::identity(4, 2);
  CHECK((id.conjugated_dense() - Eigen::MatrixXd::Identity(8, 8)).norm() < 1e-14);
  PsiBlocks p(3, 2);
  Eigen::MatrixXcd m(2, 2);
  m << 1.0, 2.0, 3.0, 4.0;
  p.set_frequency(1, m);
  CHECK(p.block(1, 0)[1] == std::complex<double>(3.0));
  CHECK((p.frequency(1) - m).norm() == 0.0);
  CHECK(p.max_abs() == 4.0);
}

TEST_CASE("pseudoinverse matches a dense SVD for invertible Psi") {
  Rng rng(52);
  for (Index count : {1, 2, 3}) {
    const FilterBank g = FilterBank::random(6, count, rng), h = FilterBank::random(6, count, rng);
    const Eigen::MatrixXd oracle = dense_pinv(gram_product(g, h), 1e-12);
    const Eigen::MatrixXd got = psi_pinv(psi_build(g, h)).conjugated_dense();
    CHECK((got - oracle).cwiseAbs().maxCoeff() / std::max(1.0, oracle.cwiseAbs().maxCoeff()) < 1e-8);
  }
}

TEST_CASE("pseudoinverse of a singular Psi satisfies the Penrose conditions") {
  Rng rng(53);
  Eigen::MatrixXd raw = gaussian_matrix(5, 2, rng);
  raw.col(1) = raw.col(0);  // duplicated filter: rank drops
  const FilterBank g = FilterBank::normalized(raw), h = FilterBank::normalized(raw);
  const Eigen::MatrixXd a = gram_product(g, h);
  const Eigen::MatrixXd x = psi_pinv(psi_build(g, h)).conjugated_dense();
  const double scale = a.norm();
  CHECK((a * x * a - a).norm() / scale < 1e-8);
  CHECK((x * a * x - x).norm() / x.norm() < 1e-8);
  CHECK(((a * x).transpose() - a * x).norm() < 1e-8);
  CHECK((x - dense_pinv(a, 1e-8)).norm() / x.norm() < 1e-6);
}

TEST_CASE("a constant filter has exact spectral zeros") {
  // its FFT vanishes everywhere except at frequency 0
  const FilterBank g = FilterBank::normalized((Eigen::MatrixXd(4, 1) << 1, 1, 1, 1).finished());
  const Eigen::MatrixXd a = gram_product(g, g);
  const Eigen::MatrixXd x = psi_pinv(psi_build(g, g)).conjugated_dense();
  CHECK((x - dense_pinv(a, 1e-8)).norm() < 1e-8);
}

TEST_CASE("zero Psi has a zero pseudoinverse") {
  const PsiBlocks zero(4, 2);
  CHECK(psi_pinv(zero).conjugated_dense().norm() == 0.0);
}

TEST_CASE("delta filters give an all-ones block; blocks are Hermitian-paired") {
  const FilterBank e1(Eigen::Vector4d(1, 0, 0, 0));
  const PsiBlocks one = psi_build(e1, e1);
  CHECK((one.block(0, 0) - Eigen::VectorXcd::Ones(4)).norm() < 1e-14);

  Rng rng(54);
  const FilterBank g = FilterBank::random(5, 3, rng), h = FilterBank::random(5, 3, rng);
  const PsiBlocks psi = psi_build(g, h);
  for (Index j = 0; j < 3; ++j)
    for (Index l = 0; l < 3; ++l) CHECK((psi.block(l, j) - psi.block(j, l).conjugate()).norm() < 1e-13);
}

TEST_CASE("pseudoinverse of identity and of a single diagonal block") {
  const PsiBlocks id = PsiBlocks::identity(4, 3);
  CHECK((psi_pinv(id).conjugated_dense() - Eigen::MatrixXd::Identity(12, 12)).norm() < 1e-14);

  PsiBlocks diag(4, 1);
  diag.block(0, 0) << 2.0, 0.0, 4.0, 0.5;
  const PsiBlocks inv = psi_pinv(diag);
  const Eigen::Vector4cd want(0.5, 0.0, 0.25, 2.0);
  CHECK((inv.block(0, 0) - want).norm() < 1e-14);
}

TEST_CASE("Penrose identities for n = 4, L = 3") {
  Rng rng(55);
  for (int trial = 0; trial < 10; ++trial) {
    const FilterBank g = FilterBank::random(4, 3, rng), h = FilterBank::random(4, 3, rng);
    const Eigen::MatrixXd a = gram_product(g, h);
    const Eigen::MatrixXd x = psi_pinv(psi_build(g, h)).conjugated_dense();
    CHECK((a * x * a - a).norm() < 1e-8);
    CHECK((x * a * x - x).norm() < 1e-8 * std::max(1.0, x.norm()));
    CHECK(((a * x).transpose() - a * x).norm() < 1e-8);
    CHECK(((x * a).transpose() - x * a).norm() < 1e-8);
    CHECK((x - dense_pinv(a, 1e-10)).norm() < 1e-8 * std::max(1.0, x.norm()));
  }
}

}
