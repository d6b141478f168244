// filterbank.cpp

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

#include "fastaudio/filterbank.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace fastaudio {

std::string shape_name(FilterShape shape) {
  return shape == FilterShape::kTriangular ? "triangular" : "gaussian";
}

FilterShape shape_from_name(const std::string& name) {
  if (name == "triangular") return FilterShape::kTriangular;
  if (name == "gaussian") return FilterShape::kGaussian;
  throw ConfigMismatch("unknown filter shape: " + name);
}

double hz_to_mel(double f) {
  if (f < 0.0) throw NegativeFrequency("hz_to_mel: f = " + std::to_string(f));
  return 2595.0 * std::log10(1.0 + f / 700.0);
}

double mel_to_hz(double m) {
  if (m < 0.0) throw NegativeMel("mel_to_hz: m = " + std::to_string(m));
  return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0);
}

FilterbankParams init_mel_params(int n_filters, double f_min, double f_max, FilterShape shape,
                                 const ClampBounds& clamp, bool sort_enabled) {
  if (n_filters < 1) throw InvalidRange("need at least one filter");
  if (!(f_min >= 0.0) || !(f_min < f_max)) {
    throw InvalidRange("bad band [" + std::to_string(f_min) + ", " + std::to_string(f_max) + ")");
  }
  const double mel_lo = hz_to_mel(f_min);
  const double mel_hi = hz_to_mel(f_max);
  std::vector<double> edges(n_filters + 2);
  for (int i = 0; i < n_filters + 2; ++i) {
    edges[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * i / (n_filters + 1));
  }
  FilterbankParams p;
  p.shape = shape;
  p.clamp = clamp;
  p.sort_enabled = sort_enabled;
  p.gain = 1.0;
  p.centers.resize(n_filters);
  p.bandwidths.resize(n_filters);
  for (int i = 0; i < n_filters; ++i) {
    p.centers[i] = edges[i + 1];
    p.bandwidths[i] = (edges[i + 2] - edges[i]) / 2.0;
  }
  return p;
}

namespace {

double shape_weight(FilterShape shape, double f, double c, double b, double g) {
  if (shape == FilterShape::kTriangular) {
    return g * std::max(0.0, 1.0 - std::abs(f - c) / b);
  }
  const double d = f - c;
  return g * std::exp(-d * d / (2.0 * b * b));
}

}  // namespace

FilterbankMatrix build_filter_matrix(const FilterbankParams& params,
                                     const std::vector<double>& freq_grid) {
  const int n_filters = params.size();
  const int n_bins = static_cast<int>(freq_grid.size());
  FilterbankMatrix fb;
  fb.num_filters = n_filters;
  fb.num_bins = n_bins;
  fb.freq_grid = freq_grid;
  fb.weights.assign(static_cast<size_t>(n_filters) * n_bins, 0.0);
  fb.support_begin.assign(n_filters, 0);
  fb.support_end.assign(n_filters, n_bins);
  for (int n = 0; n < n_filters; ++n) {
    const double c = params.centers[n];
    const double b = params.bandwidths[n];
    double* row = fb.weights.data() + static_cast<size_t>(n) * n_bins;
    if (params.shape == FilterShape::kTriangular) {
      // Bins outside [c-b, c+b] stay zero.
      int k0 = n_bins, k1 = 0;
      for (int k = 0; k < n_bins; ++k) {
        const double w = shape_weight(params.shape, freq_grid[k], c, b, params.gain);
        row[k] = w;
        if (w > 0.0) {
          k0 = std::min(k0, k);
          k1 = std::max(k1, k + 1);
        }
      }
      fb.support_begin[n] = std::min(k0, k1);
      fb.support_end[n] = k1;
    } else {
      for (int k = 0; k < n_bins; ++k) {
        row[k] = shape_weight(params.shape, freq_grid[k], c, b, params.gain);
      }
    }
  }
  return fb;
}

Matrix apply_filterbank(const PowerSpectrogram& spec, const FilterbankMatrix& fb) {
  if (fb.num_bins != spec.num_bins || fb.freq_grid != spec.bin_freqs) {
    throw DimensionMismatch("filterbank grid does not match spectrogram bins");
  }
  const int n_filters = fb.num_filters;
  const int t_count = spec.num_frames;
  Matrix out(n_filters, t_count);
#pragma omp parallel for schedule(static)
  for (int n = 0; n < n_filters; ++n) {
    const double* w = fb.weights.data() + static_cast<size_t>(n) * fb.num_bins;
    const int k0 = fb.support_begin[n];
    const int k1 = fb.support_end[n];
    for (int t = 0; t < t_count; ++t) {
      const double* p = spec.values.data() + static_cast<size_t>(t) * spec.num_bins;
      double acc = 0.0;
      for (int k = k0; k < k1; ++k) acc += w[k] * p[k];
      out(n, t) = acc;
    }
  }
  return out;
}

Matrix log_compress(const Matrix& energies, double eps) {
  Matrix out(energies.rows, energies.cols);
  for (size_t i = 0; i < energies.data.size(); ++i) {
    out.data[i] = std::log(energies.data[i] + eps);
  }
  return out;
}

FilterbankParams clamp_params(const FilterbankParams& params) {
  FilterbankParams p = params;
  for (double& c : p.centers) c = std::clamp(c, p.clamp.c_min, p.clamp.c_max);
  for (double& b : p.bandwidths) b = std::clamp(b, p.clamp.b_min, p.clamp.b_max);
  return p;
}

FilterbankParams sort_params(const FilterbankParams& params) {
  FilterbankParams p = params;
  std::vector<int> order(p.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return params.centers[a] < params.centers[b]; });
  for (int i = 0; i < p.size(); ++i) {
    p.centers[i] = params.centers[order[i]];
    p.bandwidths[i] = params.bandwidths[order[i]];
  }
  return p;
}

FilterbankGrad filterbank_backward(const PowerSpectrogram& spec, const FilterbankParams& params,
                                   const Matrix& grad_out) {
  const int n_filters = params.size();
  const int t_count = spec.num_frames;
  if (grad_out.rows != n_filters || grad_out.cols != t_count) {
    throw DimensionMismatch("grad_out must be n_filters x n_frames");
  }
  FilterbankGrad g;
  g.d_centers.assign(n_filters, 0.0);
  g.d_bandwidths.assign(n_filters, 0.0);
#pragma omp parallel for schedule(static)
  for (int n = 0; n < n_filters; ++n) {
    const double c = params.centers[n];
    const double b = params.bandwidths[n];
    const double gain = params.gain;
    double dc = 0.0, db = 0.0;
    for (int t = 0; t < t_count; ++t) {
      const double go = grad_out(n, t);
      if (go == 0.0) continue;
      const double* p = spec.values.data() + static_cast<size_t>(t) * spec.num_bins;
      double pc = 0.0, pb = 0.0;  // sum_k P[t][k] * dw/dc, dw/db
      if (params.shape == FilterShape::kTriangular) {
        for (int k = 0; k < spec.num_bins; ++k) {
          const double d = spec.bin_freqs[k] - c;
          const double ad = std::abs(d);
          if (ad <= 0.0 || ad >= b) continue;  // zero subgradient at peak and edges
          const double dwdc = gain * (d > 0.0 ? 1.0 : -1.0) / b;
          const double dwdb = gain * ad / (b * b);
          pc += p[k] * dwdc;
          pb += p[k] * dwdb;
        }
      } else {
        for (int k = 0; k < spec.num_bins; ++k) {
          const double d = spec.bin_freqs[k] - c;
          const double w = gain * std::exp(-d * d / (2.0 * b * b));
          const double dwdc = w * d / (b * b);
          const double dwdb = w * d * d / (b * b * b);
          pc += p[k] * dwdc;
          pb += p[k] * dwdb;
        }
      }
      dc += go * pc;
      db += go * pb;
    }
    g.d_centers[n] = dc;
    g.d_bandwidths[n] = db;
  }
  return g;
}

Matrix divide_by_shifted(const Matrix& grad, const Matrix& energies, double eps) {
  if (!grad.same_shape(energies)) throw DimensionMismatch("gradient/energy shape mismatch");
  Matrix out(grad.rows, grad.cols);
  for (size_t i = 0; i < grad.data.size(); ++i) {
    out.data[i] = grad.data[i] / (energies.data[i] + eps);
  }
  return out;
}

std::string filter_matrix_csv(const FilterbankMatrix& fb) {
  std::string csv = "freq_hz";
  for (int n = 0; n < fb.num_filters; ++n) csv += ",filter_" + std::to_string(n);
  csv += ",cumulative\n";
  char buf[64];
  for (int k = 0; k < fb.num_bins; ++k) {
    std::snprintf(buf, sizeof(buf), "%.9g", fb.freq_grid[k]);
    csv += buf;
    double cum = 0.0;
    for (int n = 0; n < fb.num_filters; ++n) {
      const double w = fb.at(n, k);
      cum += w;
      std::snprintf(buf, sizeof(buf), ",%.9g", w);
      csv += buf;
    }
    std::snprintf(buf, sizeof(buf), ",%.9g\n", cum);
    csv += buf;
  }
  return csv;
}

}  // namespace fastaudio
