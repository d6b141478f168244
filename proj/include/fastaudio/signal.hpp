// fastaudio/signal.hpp

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

#ifndef FASTAUDIO_SIGNAL_HPP_
#define FASTAUDIO_SIGNAL_HPP_

#include <string>
#include <vector>

#include "fastaudio/errors.hpp"
#include "fastaudio/matrix.hpp"

namespace fastaudio {

// Mono PCM audio, samples normalized to [-1, 1].
struct Waveform {
  std::vector<double> samples;
  int sample_rate = 16000;
};

enum class WindowKind { kHamming, kHann, kRectangular };

std::string window_name(WindowKind kind);
WindowKind window_from_name(const std::string& name);  // throws ConfigMismatch

struct StftConfig {
  double win_length_ms = 25.0;
  double hop_ms = 10.0;
  int n_fft = 400;
  WindowKind window = WindowKind::kHamming;
  double preemph_coeff = 0.97;

  int win_length_samples(int sample_rate) const;  // round(ms * rate / 1000)
  int hop_samples(int sample_rate) const;
  int num_bins() const { return n_fft / 2 + 1; }
};

// |STFT|^2 per frame per bin; frame t, bin k at t*num_bins + k.
struct PowerSpectrogram {
  int num_frames = 0;
  int num_bins = 0;
  std::vector<double> values;
  std::vector<double> bin_freqs;  // k * sample_rate / n_fft

  double at(int t, int k) const { return values[static_cast<size_t>(t) * num_bins + k]; }
  double& at(int t, int k) { return values[static_cast<size_t>(t) * num_bins + k]; }
};

// y[0] = x[0]; y[t] = x[t] - alpha * x[t-1]
Waveform pre_emphasize(const Waveform& x, double alpha);

// Frames of win_length samples, hop_samples apart; the trailing partial
// window is dropped. Throws SignalTooShort if not even one window fits.
std::vector<std::vector<double>> frame_signal(const Waveform& x, const StftConfig& cfg);

// Windowed power spectrum of each frame, zero-padded to n_fft.
// Throws ConfigMismatch if frames are longer than n_fft.
PowerSpectrogram power_spectrum(const std::vector<std::vector<double>>& frames,
                                const StftConfig& cfg, int sample_rate);

// Number of frames for a signal of n samples: floor((n - win) / hop) + 1.
int num_frames(int n_samples, int win_length, int hop);

std::vector<double> make_window(WindowKind kind, int length);

}  // namespace fastaudio

#endif  // FASTAUDIO_SIGNAL_HPP_
