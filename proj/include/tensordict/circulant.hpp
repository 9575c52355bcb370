#pragma once

// Cyclic convolution and circulant algebra.
//
// FFT convention: forward transform is unnormalized with kernel exp(−2πi/n),
// the inverse carries 1/n. Cir(f)(i, j) = f((i − j) mod n) in 0-based storage,
// so column j is f cyclically shifted down by j.

#include <Eigen/Dense>

#include "tensordict/tensor.hpp"

namespace tensordict::circulant {

/// Residue of i modulo n in [0, n).
inline Index wrap(Index i, Index n) {
  const Index r = i % n;
  return r < 0 ? r + n : r;
}

Eigen::VectorXcd fft(const Eigen::VectorXd& x);
Eigen::VectorXcd fft(const Eigen::VectorXcd& x);
Eigen::VectorXcd ifft(const Eigen::VectorXcd& x);

/// Inverse FFT of a spectrum known to be Hermitian; the imaginary residue must
/// be below 1e-8 (relative to the signal scale) and is dropped.
Eigen::VectorXd ifft_real(const Eigen::VectorXcd& x);

/// v(i) = Σ_j f(j) w((i − j) mod n).
Eigen::VectorXd cyclic_conv(const Eigen::VectorXd& f, const Eigen::VectorXd& w);

/// Cyclic shift: out(i) = f((i − shift) mod n).
Eigen::VectorXd shift(const Eigen::VectorXd& f, Index shift);

Eigen::MatrixXd circulant_dense(const Eigen::VectorXd& f);

/// n×n DFT matrix F (F(m,k) = ω^{mk}, ω = exp(−2πi/n)) and the unitary
/// eigenbasis U = √n F⁻¹ shared by all n×n circulants.
class FourierBasis {
 public:
  explicit FourierBasis(Index n);
  Index size() const { return n_; }
  const Eigen::MatrixXcd& dft() const { return f_; }
  const Eigen::MatrixXcd& eigenbasis() const { return u_; }

 private:
  Index n_;
  Eigen::MatrixXcd f_;
  Eigen::MatrixXcd u_;
};

/// U · Diag(FFT(f)) · Uᴴ.
Eigen::MatrixXcd circulant_from_fft(const Eigen::VectorXd& f);

/// γ(a, b) = IFFT(conj(FFT(a)) .* FFT(b)); Cir(a)ᵀ Cir(b) = Cir(γ(a, b)).
Eigen::VectorXd gamma_corr(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace tensordict::circulant
