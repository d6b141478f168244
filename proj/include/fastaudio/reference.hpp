// fastaudio/reference.hpp

// Copyright 2026  fastaudio authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef FASTAUDIO_REFERENCE_HPP_
#define FASTAUDIO_REFERENCE_HPP_

#include "fastaudio/filterbank.hpp"
#include "fastaudio/signal.hpp"

// Single-threaded textbook implementations of the hot kernels. They stay in
// the build as the comparison baseline for the parallel versions (tests) and
// for the benchmark tool. Written independently of the production code: the
// DFT evaluates trig terms directly instead of using the twiddle table, and
// the filterbank loops run over the full bin range.

namespace fastaudio::ref {

PowerSpectrogram power_spectrum(const std::vector<std::vector<double>>& frames,
                                const StftConfig& cfg, int sample_rate);

Matrix apply_filterbank(const PowerSpectrogram& spec, const FilterbankMatrix& fb);

FilterbankGrad filterbank_backward(const PowerSpectrogram& spec, const FilterbankParams& params,
                                   const Matrix& grad_out);

}  // namespace fastaudio::ref

#endif  // FASTAUDIO_REFERENCE_HPP_
