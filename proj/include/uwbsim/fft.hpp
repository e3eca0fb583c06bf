// SPDX-License-Identifier: Apache-2.0
//
// uwbsim  impulse-radio UWB link-level simulation library
// Copyright (C) 2026 the uwbsim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef UWBSIM_FFT_H
#define UWBSIM_FFT_H

#include <complex>
#include <vector>

namespace uwbsim {

// In-place radix-2 DFT, forward convention X_k = sum_n x_n e^{-2pi i nk/N}.
// Size must be a power of two. The inverse includes the 1/N factor.
void fft(std::vector<std::complex<double>>& data, bool inverse = false);

} // namespace uwbsim

#endif
