#include <pstk/fft_util.hpp>

#include <unsupported/Eigen/FFT>

#include <vector>

namespace pstk {

namespace {

Eigen::FFT<double>& fft_engine() {
  thread_local Eigen::FFT<double> fft = [] {
    Eigen::FFT<double> f;
    f.SetFlag(Eigen::FFT<double>::HalfSpectrum);
    return f;
  }();
  return fft;
}

}  // namespace

Eigen::ArrayXcd rfft(const Eigen::ArrayXd& x) {
  std::vector<double> t(x.data(), x.data() + x.size());
  std::vector<std::complex<double>> f;
  fft_engine().fwd(f, t);
  return Eigen::Map<const Eigen::ArrayXcd>(f.data(), static_cast<Eigen::Index>(f.size()));
}

Eigen::ArrayXd irfft(const Eigen::ArrayXcd& spectrum, Eigen::Index n) {
  std::vector<std::complex<double>> f(spectrum.data(), spectrum.data() + spectrum.size());
  std::vector<double> t;
  fft_engine().inv(t, f, static_cast<int>(n));
  return Eigen::Map<const Eigen::ArrayXd>(t.data(), static_cast<Eigen::Index>(t.size()));
}

Eigen::Index next_pow2(Eigen::Index n) {
  Eigen::Index p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace pstk
