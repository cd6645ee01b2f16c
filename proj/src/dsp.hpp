#pragma once

#include <span>
#include <vector>

namespace cvf::dsp {

/// Magnitude spectrum |X_k| for k = 0..n/2 of an n-point real DFT.
std::vector<double> magnitude_spectrum(std::span<const double> frame);

}  // namespace cvf::dsp
