#pragma once

#include <complex>
#include <mutex>
#include <vector>

namespace fracflow::fft {

/// FFTW planning is not thread-safe; every planner call goes through this lock.
std::mutex& planner_mutex();

/// Full linear convolution (size x + y - 1).
std::vector<double> linear_convolve(const std::vector<double>& x, const std::vector<double>& y);

/// In-place forward complex DFT of arbitrary size.
void forward(std::vector<std::complex<double>>& data);

/// Reusable in-place forward complex DFT plan of a fixed size. execute() is
/// safe to call from several threads on distinct buffers.
class ForwardPlan {
 public:
  explicit ForwardPlan(std::size_t n);
  ~ForwardPlan();
  ForwardPlan(const ForwardPlan&) = delete;
  ForwardPlan& operator=(const ForwardPlan&) = delete;
  std::size_t size() const { return n_; }
  void execute(std::vector<std::complex<double>>& data) const;

 private:
  std::size_t n_;
  void* plan_;
};

}  // namespace fracflow::fft
