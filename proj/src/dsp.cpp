#include "dsp.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

namespace cvf::dsp {

namespace {

// FFTW plan creation is not thread-safe; execution on caller-owned buffers
// is. One cached plan per transform size, guarded by a mutex.
class RealFft {
 public:
  static RealFft& instance() {
    static RealFft self;
    return self;
  }

  void forward(std::span<const double> in, std::vector<double>& re,
               std::vector<double>& im) {
    const int n = static_cast<int>(in.size());
    fftw_plan plan;
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = plans_.find(n);
      if (it == plans_.end()) {
        std::vector<double> tmp_in(n);
        std::vector<fftw_complex> tmp_out(n / 2 + 1);
        plan = fftw_plan_dft_r2c_1d(n, tmp_in.data(), tmp_out.data(),
                                    FFTW_ESTIMATE);
        plans_.emplace(n, plan);
      } else {
        plan = it->second;
      }
    }
    std::vector<double> buf(in.begin(), in.end());
    std::vector<fftw_complex> out(static_cast<size_t>(n / 2 + 1));
    fftw_execute_dft_r2c(plan, buf.data(), out.data());
    re.resize(out.size());
    im.resize(out.size());
    for (size_t k = 0; k < out.size(); ++k) {
      re[k] = out[k][0];
      im[k] = out[k][1];
    }
  }

 private:
  RealFft() = default;
  std::mutex mu_;
  std::map<int, fftw_plan> plans_;
};

}  // namespace

std::vector<double> magnitude_spectrum(std::span<const double> frame) {
  std::vector<double> re, im;
  RealFft::instance().forward(frame, re, im);
  std::vector<double> mag(re.size());
  for (size_t k = 0; k < re.size(); ++k) mag[k] = std::hypot(re[k], im[k]);
  return mag;
}

}  // namespace cvf::dsp
