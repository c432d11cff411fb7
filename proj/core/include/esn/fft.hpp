// Copyright (c) 2026 The edgespeechnet-cpp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ESN_FFT_HPP_
#define ESN_FFT_HPP_

#include <vector>

namespace esn {

// In-place iterative radix-2 FFT over split real/imag arrays.
// re.size() == im.size() and must be a power of two (FftSizeNotPowerOfTwo).
// The inverse transform includes the 1/n scaling.
void fft_radix2(std::vector<double>* re, std::vector<double>* im,
                bool inverse = false);

// |DFT_k|^2 of the frame zero-padded to fft_size, for k = 0..fft_size/2.
// frame.size() must be <= fft_size (ShapeMismatch otherwise).
std::vector<double> power_spectrum(const std::vector<double>& frame,
                                   int fft_size);

}  // namespace esn

#endif  // ESN_FFT_HPP_
