// signal.cpp

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

#include "fastaudio/signal.hpp"

#include <cmath>
#include <numbers>

namespace fastaudio {

std::string window_name(WindowKind kind) {
  switch (kind) {
    case WindowKind::kHamming:
      return "hamming";
    case WindowKind::kHann:
      return "hann";
    case WindowKind::kRectangular:
      return "rectangular";
  }
  return "hamming";
}

WindowKind window_from_name(const std::string& name) {
  if (name == "hamming") return WindowKind::kHamming;
  if (name == "hann") return WindowKind::kHann;
  if (name == "rectangular") return WindowKind::kRectangular;
  throw ConfigMismatch("unknown window kind: " + name);
}

int StftConfig::win_length_samples(int sample_rate) const {
  return static_cast<int>(std::lround(win_length_ms * sample_rate / 1000.0));
}

int StftConfig::hop_samples(int sample_rate) const {
  return static_cast<int>(std::lround(hop_ms * sample_rate / 1000.0));
}

int num_frames(int n_samples, int win_length, int hop) {
  if (n_samples < win_length) return 0;
  return (n_samples - win_length) / hop + 1;
}

std::vector<double> make_window(WindowKind kind, int length) {
  std::vector<double> w(length, 1.0);
  if (length <= 1 || kind == WindowKind::kRectangular) return w;
  const double step = 2.0 * std::numbers::pi / (length - 1);
  for (int i = 0; i < length; ++i) {
    switch (kind) {
      case WindowKind::kHamming:
        w[i] = 0.54 - 0.46 * std::cos(step * i);
        break;
      case WindowKind::kHann:
        w[i] = 0.5 - 0.5 * std::cos(step * i);
        break;
      case WindowKind::kRectangular:
        break;
    }
  }
  return w;
}

Waveform pre_emphasize(const Waveform& x, double alpha) {
  Waveform y;
  y.sample_rate = x.sample_rate;
  y.samples.resize(x.samples.size());
  if (x.samples.empty()) return y;
  y.samples[0] = x.samples[0];
  for (size_t t = 1; t < x.samples.size(); ++t) {
    y.samples[t] = x.samples[t] - alpha * x.samples[t - 1];
  }
  return y;
}

std::vector<std::vector<double>> frame_signal(const Waveform& x, const StftConfig& cfg) {
  const int win = cfg.win_length_samples(x.sample_rate);
  const int hop = cfg.hop_samples(x.sample_rate);
  const int n = static_cast<int>(x.samples.size());
  if (hop < 1) throw ConfigMismatch("hop must be at least one sample");
  if (n < win) {
    throw SignalTooShort("signal has " + std::to_string(n) + " samples, window needs " +
                         std::to_string(win));
  }
  const int t_count = num_frames(n, win, hop);
  std::vector<std::vector<double>> frames(t_count);
  for (int t = 0; t < t_count; ++t) {
    const double* begin = x.samples.data() + static_cast<size_t>(t) * hop;
    frames[t].assign(begin, begin + win);
  }
  return frames;
}

PowerSpectrogram power_spectrum(const std::vector<std::vector<double>>& frames,
                                const StftConfig& cfg, int sample_rate) {
  const int n_fft = cfg.n_fft;
  const int n_bins = cfg.num_bins();
  const int t_count = static_cast<int>(frames.size());
  for (const auto& f : frames) {
    if (static_cast<int>(f.size()) > n_fft) {
      throw ConfigMismatch("frame length " + std::to_string(f.size()) + " exceeds n_fft " +
                           std::to_string(n_fft));
    }
    if (f.size() != frames[0].size()) {
      throw ConfigMismatch("frames must share one window length");
    }
  }

  PowerSpectrogram out;
  out.num_frames = t_count;
  out.num_bins = n_bins;
  out.values.assign(static_cast<size_t>(t_count) * n_bins, 0.0);
  out.bin_freqs.resize(n_bins);
  for (int k = 0; k < n_bins; ++k) {
    out.bin_freqs[k] = static_cast<double>(k) * sample_rate / n_fft;
  }
  if (t_count == 0) return out;

  const int win_len = static_cast<int>(frames[0].size());
  const std::vector<double> window = make_window(cfg.window, win_len);

  // Twiddle table over one period; exponent index is (k*n) mod n_fft.
  std::vector<double> cos_tab(n_fft), sin_tab(n_fft);
  for (int j = 0; j < n_fft; ++j) {
    const double ang = 2.0 * std::numbers::pi * j / n_fft;
    cos_tab[j] = std::cos(ang);
    sin_tab[j] = std::sin(ang);
  }

#pragma omp parallel for schedule(static)
  for (int t = 0; t < t_count; ++t) {
    std::vector<double> xw(win_len);
    const auto& frame = frames[t];
    for (int i = 0; i < win_len; ++i) xw[i] = window[i] * frame[i];
    double* row = out.values.data() + static_cast<size_t>(t) * n_bins;
    for (int k = 0; k < n_bins; ++k) {
      // Zero padding beyond win_len contributes nothing to the sums.
      double re = 0.0, im = 0.0;
      long idx = 0;
      for (int i = 0; i < win_len; ++i) {
        const long j = idx % n_fft;
        re += xw[i] * cos_tab[j];
        im -= xw[i] * sin_tab[j];
        idx += k;
      }
      row[k] = re * re + im * im;
    }
  }
  return out;
}

}  // namespace fastaudio
