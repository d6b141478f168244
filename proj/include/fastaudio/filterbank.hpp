// fastaudio/filterbank.hpp

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

#ifndef FASTAUDIO_FILTERBANK_HPP_
#define FASTAUDIO_FILTERBANK_HPP_

#include <string>
#include <vector>

#include "fastaudio/errors.hpp"
#include "fastaudio/matrix.hpp"
#include "fastaudio/signal.hpp"

namespace fastaudio {

// Constrained learnable filterbank. Each filter is a closed-form bump
//   w(f) = gain * shape(f; center, bandwidth)
// sampled on the spectrogram bin grid. Centers and bandwidths are the only
// learnable parameters; the gain stays fixed and constraints are enforced by
// projection (clamp, then an optional sort by center) after every update.

enum class FilterShape { kTriangular, kGaussian };

std::string shape_name(FilterShape shape);
FilterShape shape_from_name(const std::string& name);  // throws ConfigMismatch

struct ClampBounds {
  double c_min = 0.0;
  double c_max = 8000.0;
  double b_min = 40.0;
  double b_max = 8000.0;
};

struct FilterbankParams {
  std::vector<double> centers;     // Hz
  std::vector<double> bandwidths;  // Hz; gaussian interprets this as sigma
  double gain = 1.0;               // fixed, never trained
  FilterShape shape = FilterShape::kTriangular;
  ClampBounds clamp;
  bool sort_enabled = false;

  int size() const { return static_cast<int>(centers.size()); }
  // centers and bandwidths train; gain does not
  int learnable_count() const { return 2 * size(); }
};

struct FilterbankMatrix {
  int num_filters = 0;
  int num_bins = 0;
  std::vector<double> weights;  // num_filters x num_bins, row-major
  std::vector<double> freq_grid;
  // First/one-past-last bin with nonzero weight per row (the whole grid for
  // gaussian rows); lets apply/backward skip structurally zero bins.
  std::vector<int> support_begin;
  std::vector<int> support_end;

  double at(int n, int k) const { return weights[static_cast<size_t>(n) * num_bins + k]; }
};

struct FilterbankGrad {
  std::vector<double> d_centers;
  std::vector<double> d_bandwidths;
};

// m = 2595 * log10(1 + f / 700); throws NegativeFrequency for f < 0.
double hz_to_mel(double f);

// Exact inverse, 700 * (10^(m / 2595) - 1); throws NegativeMel for m < 0.
double mel_to_hz(double m);

// Filterbank mimicking Mel placement: n_filters + 2 points equally spaced on
// the mel axis over [f_min, f_max], mapped back to Hz as f_0..f_{n+1}; filter
// i gets center f_i and bandwidth (f_{i+1} - f_{i-1}) / 2, gain 1.
FilterbankParams init_mel_params(int n_filters, double f_min, double f_max, FilterShape shape,
                                 const ClampBounds& clamp, bool sort_enabled);

// Sample every filter on the bin grid. Deterministic in the inputs.
FilterbankMatrix build_filter_matrix(const FilterbankParams& params,
                                     const std::vector<double>& freq_grid);

// out[n][t] = sum_k W[n][k] * P[t][k]
Matrix apply_filterbank(const PowerSpectrogram& spec, const FilterbankMatrix& fb);

// ln(value + eps), elementwise
Matrix log_compress(const Matrix& energies, double eps);

// Projection steps. Both are value-level and idempotent.
FilterbankParams clamp_params(const FilterbankParams& params);
FilterbankParams sort_params(const FilterbankParams& params);

// Gradients of a scalar loss with respect to centers and bandwidths, given
// grad_out = dL/dE for the pre-log energies E = apply_filterbank(P, W):
//   dL/dc_n = sum_{t,k} grad_out[n][t] * P[t][k] * dw_n(f_k)/dc_n
// and likewise for b_n. Shape derivatives:
//   triangular: dw/dc = g*sign(f-c)/b, dw/db = g*|f-c|/b^2 inside the open
//               support, 0 at the peak, at the edges and outside (subgradient)
//   gaussian:   dw/dc = w*(f-c)/b^2,   dw/db = w*(f-c)^2/b^3
// To differentiate through log_compress instead, route the incoming gradient
// with divide_by_shifted first.
FilterbankGrad filterbank_backward(const PowerSpectrogram& spec, const FilterbankParams& params,
                                   const Matrix& grad_out);

// grad[i] / (energies[i] + eps): chain rule through log_compress.
Matrix divide_by_shifted(const Matrix& grad, const Matrix& energies, double eps);

// Filter response table: header `freq_hz,filter_0,...,filter_{n-1},cumulative`,
// one row per grid frequency; cumulative is the column sum over filters.
std::string filter_matrix_csv(const FilterbankMatrix& fb);

}  // namespace fastaudio

#endif  // FASTAUDIO_FILTERBANK_HPP_
