#include "tensordict/circulant.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <numbers>

namespace tensordict::circulant {

namespace {

// Eigen::FFT caches twiddle tables per size and is not safe to share.
Eigen::FFT<double>& engine() {
  thread_local Eigen::FFT<double> fft_engine;
  return fft_engine;
}

void require_same_length(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const char* op) {
  if (a.size() != b.size())
    throw ShapeError(std::string(op) + ": length mismatch (" + std::to_string(a.size()) +
                     " vs " + std::to_string(b.size()) + ")");
}

}  // namespace

Eigen::VectorXcd fft(const Eigen::VectorXd& x) {
  return fft(Eigen::VectorXcd(x.cast<std::complex<double>>()));
}

// kissfft crashes on a length-1 plan; that transform is the identity anyway.
Eigen::VectorXcd fft(const Eigen::VectorXcd& x) {
  if (x.size() <= 1) return x;
  Eigen::VectorXcd out(x.size());
  engine().fwd(out, x);
  return out;
}

Eigen::VectorXcd ifft(const Eigen::VectorXcd& x) {
  if (x.size() <= 1) return x;
  Eigen::VectorXcd out(x.size());
  engine().inv(out, x);
  return out;
}

Eigen::VectorXd ifft_real(const Eigen::VectorXcd& x) {
  const Eigen::VectorXcd c = ifft(x);
  const double scale = std::max(1.0, c.real().cwiseAbs().maxCoeff());
  if (c.size() > 0 && c.imag().cwiseAbs().maxCoeff() > 1e-8 * scale)
    throw DegenerateError("ifft_real: spectrum is not Hermitian (imaginary residue " +
                          std::to_string(c.imag().cwiseAbs().maxCoeff()) + ")");
  return c.real();
}

Eigen::VectorXd cyclic_conv(const Eigen::VectorXd& f, const Eigen::VectorXd& w) {
  require_same_length(f, w, "cyclic_conv");
  const Index n = f.size();
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) v[i] += f[j] * w[wrap(i - j, n)];
  return v;
}

Eigen::VectorXd shift(const Eigen::VectorXd& f, Index s) {
  const Index n = f.size();
  Eigen::VectorXd out(n);
  for (Index i = 0; i < n; ++i) out[i] = f[wrap(i - s, n)];
  return out;
}

Eigen::MatrixXd circulant_dense(const Eigen::VectorXd& f) {
  const Index n = f.size();
  Eigen::MatrixXd c(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) c(i, j) = f[wrap(i - j, n)];
  return c;
}

FourierBasis::FourierBasis(Index n) : n_(n), f_(n, n), u_(n, n) {
  if (n < 1) throw ShapeError("FourierBasis needs n >= 1");
  const double two_pi = 2.0 * std::numbers::pi;
  for (Index m = 0; m < n; ++m)
    for (Index k = 0; k < n; ++k) {
      // reduce the exponent first to keep the phase accurate for large n
      const double phase = -two_pi * static_cast<double>((m * k) % n) / static_cast<double>(n);
      f_(m, k) = std::polar(1.0, phase);
    }
  u_ = f_.conjugate() / std::sqrt(static_cast<double>(n));
}

Eigen::MatrixXcd circulant_from_fft(const Eigen::VectorXd& f) {
  const FourierBasis basis(f.size());
  const Eigen::MatrixXcd& u = basis.eigenbasis();
  return u * fft(f).asDiagonal() * u.adjoint();
}

Eigen::VectorXd gamma_corr(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  require_same_length(a, b, "gamma_corr");
  return ifft_real(fft(a).conjugate().cwiseProduct(fft(b)));
}

}  // namespace tensordict::circulant
