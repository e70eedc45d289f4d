#include "arf/fft.hpp"

#include <unsupported/Eigen/FFT>

#include "arf/phase.hpp"

namespace arf {

namespace {
Eigen::FFT<double>& engine() {
  thread_local Eigen::FFT<double> fft;  // plan cache per thread, per size
  return fft;
}
}  // namespace

Eigen::VectorXcd fft_forward(const Eigen::VectorXcd& x) {
  Eigen::VectorXcd out(x.size());
  engine().fwd(out.data(), x.data(), x.size());
  return out;
}

Eigen::VectorXcd fft_inverse(const Eigen::VectorXcd& x) {
  Eigen::VectorXcd out(x.size());
  engine().inv(out.data(), x.data(), x.size());
  return out;
}

Eigen::VectorXcd convolve(const Eigen::VectorXcd& a,
                          const Eigen::VectorXcd& b) {
  const Eigen::Index na = a.size(), nb = b.size();
  const Eigen::Index out_len = na + nb - 1;
  const auto m = static_cast<Eigen::Index>(
      next_pow2(static_cast<std::uint64_t>(out_len)));
  Eigen::VectorXcd pa = Eigen::VectorXcd::Zero(m);
  Eigen::VectorXcd pb = Eigen::VectorXcd::Zero(m);
  pa.head(na) = a;
  pb.head(nb) = b;
  Eigen::VectorXcd fa = fft_forward(pa);
  Eigen::VectorXcd fb = fft_forward(pb);
  fa.array() *= fb.array();
  return fft_inverse(fa).head(out_len);
}

}  // namespace arf
