// reference.cpp

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

#include "fastaudio/reference.hpp"

#include <cmath>
#include <numbers>

namespace fastaudio::ref {

PowerSpectrogram power_spectrum(const std::vector<std::vector<double>>& frames,
                                const StftConfig& cfg, int sample_rate) {
  const int n_fft = cfg.n_fft;
  const int n_bins = cfg.num_bins();
  for (const auto& f : frames) {
    if (static_cast<int>(f.size()) > n_fft || f.size() != frames[0].size()) {
      throw ConfigMismatch("frames must share one window length within n_fft");
    }
  }
  PowerSpectrogram out;
  out.num_frames = static_cast<int>(frames.size());
  out.num_bins = n_bins;
  out.values.assign(static_cast<size_t>(out.num_frames) * n_bins, 0.0);
  out.bin_freqs.resize(n_bins);
  for (int k = 0; k < n_bins; ++k) {
    out.bin_freqs[k] = static_cast<double>(k) * sample_rate / n_fft;
  }
  if (frames.empty()) return out;

  const int win_len = static_cast<int>(frames[0].size());
  const std::vector<double> window = make_window(cfg.window, win_len);
  for (int t = 0; t < out.num_frames; ++t) {
    for (int k = 0; k < n_bins; ++k) {
      double re = 0.0, im = 0.0;
      for (int i = 0; i < win_len; ++i) {
        const double ang = 2.0 * std::numbers::pi * k * i / n_fft;
        const double v = window[i] * frames[t][i];
        re += v * std::cos(ang);
        im -= v * std::sin(ang);
      }
      out.at(t, k) = re * re + im * im;
    }
  }
  return out;
}

Matrix apply_filterbank(const PowerSpectrogram& spec, const FilterbankMatrix& fb) {
  if (fb.num_bins != spec.num_bins || fb.freq_grid != spec.bin_freqs) {
    throw DimensionMismatch("filterbank grid does not match spectrogram bins");
  }
  Matrix out(fb.num_filters, spec.num_frames);
  for (int n = 0; n < fb.num_filters; ++n) {
    for (int t = 0; t < spec.num_frames; ++t) {
      double acc = 0.0;
      for (int k = 0; k < spec.num_bins; ++k) acc += fb.at(n, k) * spec.at(t, k);
      out(n, t) = acc;
    }
  }
  return out;
}

FilterbankGrad filterbank_backward(const PowerSpectrogram& spec, const FilterbankParams& params,
                                   const Matrix& grad_out) {
  const int n_filters = params.size();
  if (grad_out.rows != n_filters || grad_out.cols != spec.num_frames) {
    throw DimensionMismatch("grad_out must be n_filters x n_frames");
  }
  FilterbankGrad g;
  g.d_centers.assign(n_filters, 0.0);
  g.d_bandwidths.assign(n_filters, 0.0);
  for (int n = 0; n < n_filters; ++n) {
    const double c = params.centers[n];
    const double b = params.bandwidths[n];
    for (int t = 0; t < spec.num_frames; ++t) {
      double pc = 0.0, pb = 0.0;
      for (int k = 0; k < spec.num_bins; ++k) {
        const double d = spec.bin_freqs[k] - c;
        double dwdc = 0.0, dwdb = 0.0;
        if (params.shape == FilterShape::kTriangular) {
          const double ad = std::abs(d);
          if (ad > 0.0 && ad < b) {
            dwdc = params.gain * (d > 0.0 ? 1.0 : -1.0) / b;
            dwdb = params.gain * ad / (b * b);
          }
        } else {
          const double w = params.gain * std::exp(-d * d / (2.0 * b * b));
          dwdc = w * d / (b * b);
          dwdb = w * d * d / (b * b * b);
        }
        pc += spec.at(t, k) * dwdc;
        pb += spec.at(t, k) * dwdb;
      }
      g.d_centers[n] += grad_out(n, t) * pc;
      g.d_bandwidths[n] += grad_out(n, t) * pb;
    }
  }
  return g;
}

}  // namespace fastaudio::ref
