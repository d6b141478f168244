// bench_kernels.cpp

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

// Times the OpenMP kernels against the serial reference implementations.
// The reference column for the power spectrum is the direct-evaluation DFT,
// which also pays per-sample trig calls; the 1-thread column is the
// production kernel pinned to one thread.

#include <chrono>
#include <cstdio>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "fastaudio/filterbank.hpp"
#include "fastaudio/reference.hpp"
#include "fastaudio/rng.hpp"
#include "fastaudio/signal.hpp"

using namespace fastaudio;

namespace {

double time_ms(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void set_threads(int n) {
#ifdef _OPENMP
  omp_set_num_threads(n);
#else
  (void)n;
#endif
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace

int main() {
  const int sample_rate = 16000;
  StftConfig stft;

  Rng rng(7);
  const int n_frames_dft = 256;
  std::vector<std::vector<double>> frames(n_frames_dft, std::vector<double>(400));
  for (auto& f : frames) {
    for (double& v : f) v = rng.uniform(-1.0, 1.0);
  }

  const int threads = max_threads();
  std::printf("threads available: %d\n", threads);
  std::printf("%-22s %12s %12s %12s %9s\n", "kernel", "ref ms", "1-thread ms", "omp ms",
              "speedup");

  PowerSpectrogram spec;
  {
    double ref_ms = time_ms([&] { ref::power_spectrum(frames, stft, sample_rate); });
    set_threads(1);
    double one_ms = time_ms([&] { power_spectrum(frames, stft, sample_rate); });
    set_threads(threads);
    double omp_ms = time_ms([&] { spec = power_spectrum(frames, stft, sample_rate); });
    std::printf("%-22s %12.2f %12.2f %12.2f %8.2fx\n", "power_spectrum", ref_ms, one_ms, omp_ms,
                one_ms / omp_ms);
  }

  // Larger spectrogram for the filterbank kernels.
  const int t_big = 4000;
  PowerSpectrogram big;
  big.num_frames = t_big;
  big.num_bins = spec.num_bins;
  big.bin_freqs = spec.bin_freqs;
  big.values.resize(static_cast<size_t>(t_big) * big.num_bins);
  for (double& v : big.values) v = rng.uniform(0.0, 100.0);

  const FilterbankParams params = init_mel_params(40, 0.0, 8000.0, FilterShape::kTriangular,
                                                  ClampBounds{0, 8000, 40, 8000}, false);
  const FilterbankMatrix fb = build_filter_matrix(params, big.bin_freqs);

  {
    double ref_ms = time_ms([&] { ref::apply_filterbank(big, fb); });
    set_threads(1);
    double one_ms = time_ms([&] { apply_filterbank(big, fb); });
    set_threads(threads);
    double omp_ms = time_ms([&] { apply_filterbank(big, fb); });
    std::printf("%-22s %12.2f %12.2f %12.2f %8.2fx\n", "apply_filterbank", ref_ms, one_ms, omp_ms,
                one_ms / omp_ms);
  }

  {
    Matrix grad(fb.num_filters, big.num_frames);
    for (double& v : grad.data) v = rng.uniform(-1.0, 1.0);
    double ref_ms = time_ms([&] { ref::filterbank_backward(big, params, grad); });
    set_threads(1);
    double one_ms = time_ms([&] { filterbank_backward(big, params, grad); });
    set_threads(threads);
    double omp_ms = time_ms([&] { filterbank_backward(big, params, grad); });
    std::printf("%-22s %12.2f %12.2f %12.2f %8.2fx\n", "filterbank_backward", ref_ms, one_ms,
                omp_ms, one_ms / omp_ms);
  }

  return 0;
}
