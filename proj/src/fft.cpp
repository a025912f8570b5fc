#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>

namespace fracflow::fft {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::vector<double> linear_convolve(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.empty() || y.empty()) return {};
  const std::size_t need = x.size() + y.size() - 1;
  std::size_t n = 1;
  while (n < need) n *= 2;
  const std::size_t nf = n / 2 + 1;
  std::vector<double> buf(n, 0.0);
  std::vector<std::complex<double>> xf(nf), yf(nf);
  auto* xc = reinterpret_cast<fftw_complex*>(xf.data());
  auto* yc = reinterpret_cast<fftw_complex*>(yf.data());
  fftw_plan fwd, bwd;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fwd = fftw_plan_dft_r2c_1d(static_cast<int>(n), buf.data(), xc, FFTW_ESTIMATE | FFTW_UNALIGNED);
    bwd = fftw_plan_dft_c2r_1d(static_cast<int>(n), xc, buf.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  std::copy(x.begin(), x.end(), buf.begin());
  fftw_execute_dft_r2c(fwd, buf.data(), xc);
  std::fill(buf.begin(), buf.end(), 0.0);
  std::copy(y.begin(), y.end(), buf.begin());
  fftw_execute_dft_r2c(fwd, buf.data(), yc);
  for (std::size_t f = 0; f < nf; ++f) xf[f] *= yf[f];
  fftw_execute_dft_c2r(bwd, xc, buf.data());
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
  }
  buf.resize(need);
  for (double& v : buf) v /= static_cast<double>(n);
  return buf;
}

void forward(std::vector<std::complex<double>>& data) { ForwardPlan(data.size()).execute(data); }

ForwardPlan::ForwardPlan(std::size_t n) : n_(n) {
  std::vector<std::complex<double>> scratch(n);
  auto* c = reinterpret_cast<fftw_complex*>(scratch.data());
  std::lock_guard<std::mutex> lock(planner_mutex());
  plan_ = fftw_plan_dft_1d(static_cast<int>(n), c, c, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
}

ForwardPlan::~ForwardPlan() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_));
}

void ForwardPlan::execute(std::vector<std::complex<double>>& data) const {
  auto* c = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(plan_), c, c);
}

}  // namespace fracflow::fft
