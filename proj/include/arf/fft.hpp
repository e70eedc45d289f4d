#pragma once
// Complex-to-complex FFT helpers on Eigen vectors. A single code path is
// used everywhere (correlations, convolutions, grid suprema) so that
// results are bitwise reproducible across call sites and thread counts;
// plans are cached per thread and per size.

#include <Eigen/Dense>
#include <complex>

namespace arf {

// Forward DFT, X(k) = sum_n x(n) e(-2pi i nk/N). Size must be >= 1.
Eigen::VectorXcd fft_forward(const Eigen::VectorXcd& x);
// Inverse DFT including the 1/N factor.
Eigen::VectorXcd fft_inverse(const Eigen::VectorXcd& x);

// Linear convolution, c(s) = sum_{i+j=s} a(i) b(j), s in [0, na+nb-2],
// via one power-of-two transform pair.
Eigen::VectorXcd convolve(const Eigen::VectorXcd& a,
                          const Eigen::VectorXcd& b);

}  // namespace arf
