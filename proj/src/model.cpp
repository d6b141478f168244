// model.cpp

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

#include "fastaudio/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "fastaudio/rng.hpp"

namespace fastaudio {

FeatureMatrix extract_features(const Waveform& x, const StftConfig& cfg,
                               const FilterbankParams& params, double eps) {
  const Waveform emphasized = pre_emphasize(x, cfg.preemph_coeff);
  const auto frames = frame_signal(emphasized, cfg);
  const PowerSpectrogram spec = power_spectrum(frames, cfg, x.sample_rate);
  const FilterbankMatrix fb = build_filter_matrix(params, spec.bin_freqs);
  FeatureMatrix out;
  out.values = log_compress(apply_filterbank(spec, fb), eps);
  return out;
}

namespace {

struct PoolStats {
  std::vector<double> means;
  std::vector<double> stds;  // population
};

PoolStats compute_pool_stats(const Matrix& values) {
  const int rows = values.rows;
  const int cols = values.cols;
  PoolStats st;
  st.means.resize(rows);
  st.stds.resize(rows);
  for (int n = 0; n < rows; ++n) {
    double sum = 0.0;
    for (int t = 0; t < cols; ++t) sum += values(n, t);
    const double mean = sum / cols;
    double var = 0.0;
    for (int t = 0; t < cols; ++t) {
      const double d = values(n, t) - mean;
      var += d * d;
    }
    st.means[n] = mean;
    st.stds[n] = std::sqrt(var / cols);
  }
  return st;
}

}  // namespace

std::vector<double> stats_pool(const FeatureMatrix& features) {
  const PoolStats st = compute_pool_stats(features.values);
  std::vector<double> e;
  e.reserve(2 * st.means.size());
  e.insert(e.end(), st.means.begin(), st.means.end());
  e.insert(e.end(), st.stds.begin(), st.stds.end());
  return e;
}

std::array<double, 2> classify(std::span<const double> embedding, const Matrix& weights) {
  const int dim = static_cast<int>(embedding.size());
  if (weights.rows != dim + 1 || weights.cols != 2) {
    throw DimensionMismatch("classifier must be (embedding + 1) x 2");
  }
  double z0 = weights(dim, 0), z1 = weights(dim, 1);
  for (int i = 0; i < dim; ++i) {
    z0 += embedding[i] * weights(i, 0);
    z1 += embedding[i] * weights(i, 1);
  }
  const double zmax = std::max(z0, z1);
  const double e0 = std::exp(z0 - zmax);
  const double e1 = std::exp(z1 - zmax);
  const double total = e0 + e1;
  return {e0 / total, e1 / total};
}

double cross_entropy(const std::array<double, 2>& probs, int label) {
  return -std::log(probs[static_cast<size_t>(label)]);
}

Matrix init_classifier(int n_filters) { return Matrix(2 * n_filters + 1, 2, 0.0); }

namespace {

struct UtteranceBackward {
  Matrix d_classifier;
  FilterbankGrad d_frontend;
  double loss = 0.0;
};

UtteranceBackward backward_one(const LabeledSpectrogram& item, const ModelState& state,
                               const FilterbankMatrix& fb, double log_eps,
                               bool freeze_frontend) {
  const int n_filters = state.frontend.size();
  const int dim = 2 * n_filters;
  const int t_count = item.spec.num_frames;

  const Matrix energies = apply_filterbank(item.spec, fb);
  const Matrix features = log_compress(energies, log_eps);
  const PoolStats st = compute_pool_stats(features);
  std::vector<double> embedding(st.means);
  embedding.insert(embedding.end(), st.stds.begin(), st.stds.end());
  const std::array<double, 2> probs = classify(embedding, state.classifier);

  UtteranceBackward out;
  out.loss = cross_entropy(probs, item.label);

  std::array<double, 2> dz = probs;
  dz[static_cast<size_t>(item.label)] -= 1.0;

  out.d_classifier = Matrix(dim + 1, 2);
  for (int i = 0; i < dim; ++i) {
    out.d_classifier(i, 0) = embedding[i] * dz[0];
    out.d_classifier(i, 1) = embedding[i] * dz[1];
  }
  out.d_classifier(dim, 0) = dz[0];
  out.d_classifier(dim, 1) = dz[1];

  if (freeze_frontend) {
    out.d_frontend.d_centers.assign(n_filters, 0.0);
    out.d_frontend.d_bandwidths.assign(n_filters, 0.0);
    return out;
  }

  std::vector<double> d_embedding(dim);
  for (int i = 0; i < dim; ++i) {
    d_embedding[i] = state.classifier(i, 0) * dz[0] + state.classifier(i, 1) * dz[1];
  }

  // Pooling backward: d mean / dF = 1/T, d std / dF = (F - mean) / (T * std),
  // zero where the row is constant.
  Matrix d_features(n_filters, t_count);
  for (int n = 0; n < n_filters; ++n) {
    const double d_mean = d_embedding[n];
    const double d_std = d_embedding[n_filters + n];
    for (int t = 0; t < t_count; ++t) {
      double g = d_mean / t_count;
      if (st.stds[n] > 0.0) {
        g += d_std * (features(n, t) - st.means[n]) / (t_count * st.stds[n]);
      }
      d_features(n, t) = g;
    }
  }

  const Matrix d_energies = divide_by_shifted(d_features, energies, log_eps);
  out.d_frontend = filterbank_backward(item.spec, state.frontend, d_energies);
  return out;
}

BackwardResult backward_batch(std::span<const LabeledSpectrogram* const> batch,
                              const ModelState& state, double log_eps, bool freeze_frontend) {
  if (batch.empty()) throw EmptyDataset("backward_full needs a non-empty batch");
  const int n_filters = state.frontend.size();
  const int dim = 2 * n_filters;
  if (state.classifier.rows != dim + 1 || state.classifier.cols != 2) {
    throw DimensionMismatch("classifier must be (2 * n_filters + 1) x 2");
  }
  for (const LabeledSpectrogram* item : batch) {
    if (item->spec.bin_freqs != batch[0]->spec.bin_freqs) {
      throw DimensionMismatch("all spectrogram grids in a batch must agree");
    }
  }
  const FilterbankMatrix fb = build_filter_matrix(state.frontend, batch[0]->spec.bin_freqs);

  const int m = static_cast<int>(batch.size());
  std::vector<UtteranceBackward> slots(m);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < m; ++i) {
    slots[i] = backward_one(*batch[i], state, fb, log_eps, freeze_frontend);
  }

  // Fixed-order reduction keeps results identical for any thread count.
  BackwardResult result;
  result.d_classifier = Matrix(dim + 1, 2);
  result.d_frontend.d_centers.assign(n_filters, 0.0);
  result.d_frontend.d_bandwidths.assign(n_filters, 0.0);
  for (int i = 0; i < m; ++i) {
    result.mean_loss += slots[i].loss;
    for (size_t j = 0; j < result.d_classifier.data.size(); ++j) {
      result.d_classifier.data[j] += slots[i].d_classifier.data[j];
    }
    for (int n = 0; n < n_filters; ++n) {
      result.d_frontend.d_centers[n] += slots[i].d_frontend.d_centers[n];
      result.d_frontend.d_bandwidths[n] += slots[i].d_frontend.d_bandwidths[n];
    }
  }
  const double inv = 1.0 / m;
  result.mean_loss *= inv;
  for (double& v : result.d_classifier.data) v *= inv;
  for (double& v : result.d_frontend.d_centers) v *= inv;
  for (double& v : result.d_frontend.d_bandwidths) v *= inv;
  return result;
}

}  // namespace

BackwardResult backward_full(std::span<const LabeledSpectrogram> batch, const ModelState& state,
                             double log_eps, bool freeze_frontend) {
  std::vector<const LabeledSpectrogram*> ptrs(batch.size());
  for (size_t i = 0; i < batch.size(); ++i) ptrs[i] = &batch[i];
  return backward_batch(ptrs, state, log_eps, freeze_frontend);
}

namespace {

void project_frontend(FilterbankParams& p, std::vector<double>& vel_c,
                      std::vector<double>& vel_b) {
  for (double& c : p.centers) c = std::clamp(c, p.clamp.c_min, p.clamp.c_max);
  for (double& b : p.bandwidths) b = std::clamp(b, p.clamp.b_min, p.clamp.b_max);
  if (!p.sort_enabled) return;
  const int n = p.size();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return p.centers[a] < p.centers[b]; });
  FilterbankParams sorted = p;
  std::vector<double> vc(n), vb(n);
  for (int i = 0; i < n; ++i) {
    sorted.centers[i] = p.centers[order[i]];
    sorted.bandwidths[i] = p.bandwidths[order[i]];
    vc[i] = vel_c[order[i]];
    vb[i] = vel_b[order[i]];
  }
  p = std::move(sorted);
  vel_c = std::move(vc);
  vel_b = std::move(vb);
}

}  // namespace

TrainResult train(const std::vector<Utterance>& dataset, const TrainConfig& cfg,
                  const ModelState& init, const StftConfig& stft, double log_eps,
                  const StepObserver& observer) {
  if (dataset.empty()) throw EmptyDataset("training set is empty");
  bool has_bona = false, has_spoof = false;
  for (const Utterance& u : dataset) {
    (u.label == 0 ? has_bona : has_spoof) = true;
  }
  if (!has_bona || !has_spoof) {
    throw SingleClassDataset("training set needs both classes");
  }
  if (cfg.batch_size < 1) throw InvalidRange("batch_size must be at least 1");
  if (cfg.momentum < 0.0 || cfg.momentum >= 1.0) throw InvalidRange("momentum must be in [0, 1)");
  if (stft.win_length_samples(dataset[0].wav.sample_rate) > stft.n_fft) {
    throw ConfigMismatch("analysis window longer than n_fft");
  }
  for (const Utterance& u : dataset) {
    if (u.wav.sample_rate != dataset[0].wav.sample_rate) {
      throw ConfigMismatch("mixed sample rates in training set");
    }
    if (static_cast<int>(u.wav.samples.size()) < stft.win_length_samples(u.wav.sample_rate)) {
      throw SignalTooShort("utterance " + u.id + " shorter than one analysis window");
    }
  }

  const int n_utts = static_cast<int>(dataset.size());
  // Filter parameters only affect the pipeline after the power spectrum, so
  // spectrograms are computed once and reused across epochs.
  std::vector<LabeledSpectrogram> specs(n_utts);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n_utts; ++i) {
    const Waveform emphasized = pre_emphasize(dataset[i].wav, stft.preemph_coeff);
    specs[i].spec = power_spectrum(frame_signal(emphasized, stft), stft,
                                   dataset[i].wav.sample_rate);
    specs[i].label = dataset[i].label;
  }

  TrainResult result;
  result.state = init;
  ModelState& state = result.state;
  const int n_filters = state.frontend.size();

  std::vector<double> vel_c(n_filters, 0.0), vel_b(n_filters, 0.0);
  Matrix vel_w(state.classifier.rows, state.classifier.cols);

  Rng rng(mix_seed(state.rng_seed, 0x5u));
  std::vector<int> order(n_utts);
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (int i = n_utts - 1; i > 0; --i) {
      const int j = static_cast<int>(rng.below(static_cast<uint64_t>(i) + 1));
      std::swap(order[i], order[j]);
    }
    double loss_sum = 0.0;
    for (int start = 0; start < n_utts; start += cfg.batch_size) {
      const int count = std::min(cfg.batch_size, n_utts - start);
      std::vector<const LabeledSpectrogram*> batch(count);
      for (int i = 0; i < count; ++i) batch[i] = &specs[order[start + i]];

      const BackwardResult grads =
          backward_batch(batch, state, log_eps, cfg.freeze_frontend);
      loss_sum += grads.mean_loss * count;

      for (size_t j = 0; j < vel_w.data.size(); ++j) {
        vel_w.data[j] = cfg.momentum * vel_w.data[j] + grads.d_classifier.data[j];
        state.classifier.data[j] -= cfg.learning_rate_classifier * vel_w.data[j];
      }
      if (!cfg.freeze_frontend) {
        for (int n = 0; n < n_filters; ++n) {
          vel_c[n] = cfg.momentum * vel_c[n] + grads.d_frontend.d_centers[n];
          vel_b[n] = cfg.momentum * vel_b[n] + grads.d_frontend.d_bandwidths[n];
          state.frontend.centers[n] -= cfg.learning_rate_frontend * vel_c[n];
          state.frontend.bandwidths[n] -= cfg.learning_rate_frontend * vel_b[n];
        }
        project_frontend(state.frontend, vel_c, vel_b);
      }
      ++state.step_count;
      if (observer) observer(state);
    }
    result.epoch_losses.push_back(loss_sum / n_utts);
  }
  return result;
}

double score_utterance(const PowerSpectrogram& spec, const ModelState& state, double log_eps) {
  const FilterbankMatrix fb = build_filter_matrix(state.frontend, spec.bin_freqs);
  FeatureMatrix features;
  features.values = log_compress(apply_filterbank(spec, fb), log_eps);
  const std::vector<double> embedding = stats_pool(features);
  const std::array<double, 2> probs = classify(embedding, state.classifier);
  return std::log(probs[0]);
}

std::string format_double_exact(double v) {
  char buf[64];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

namespace {

void write_array(std::ofstream& out, const std::string& key, const std::vector<double>& values) {
  out << key << '=';
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) out << ' ';
    out << format_double_exact(values[i]);
  }
  out << '\n';
}

std::vector<double> parse_array(const std::string& text) {
  std::istringstream ss(text);
  std::vector<double> out;
  double v;
  while (ss >> v) out.push_back(v);
  return out;
}

constexpr int kCheckpointVersion = 1;

}  // namespace

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write checkpoint: " + path);
  const ModelState& s = ckpt.state;
  out << "format_version=" << kCheckpointVersion << '\n';
  out << "variant=" << ckpt.variant << '\n';
  out << "sample_rate=" << ckpt.frontend.sample_rate << '\n';
  out << "win_length_ms=" << format_double_exact(ckpt.frontend.stft.win_length_ms) << '\n';
  out << "hop_ms=" << format_double_exact(ckpt.frontend.stft.hop_ms) << '\n';
  out << "n_fft=" << ckpt.frontend.stft.n_fft << '\n';
  out << "window=" << window_name(ckpt.frontend.stft.window) << '\n';
  out << "preemph=" << format_double_exact(ckpt.frontend.stft.preemph_coeff) << '\n';
  out << "log_eps=" << format_double_exact(ckpt.frontend.log_eps) << '\n';
  out << "shape=" << shape_name(s.frontend.shape) << '\n';
  out << "sort_enabled=" << (s.frontend.sort_enabled ? 1 : 0) << '\n';
  out << "gain=" << format_double_exact(s.frontend.gain) << '\n';
  out << "clamp_c_min=" << format_double_exact(s.frontend.clamp.c_min) << '\n';
  out << "clamp_c_max=" << format_double_exact(s.frontend.clamp.c_max) << '\n';
  out << "clamp_b_min=" << format_double_exact(s.frontend.clamp.b_min) << '\n';
  out << "clamp_b_max=" << format_double_exact(s.frontend.clamp.b_max) << '\n';
  out << "n_filters=" << s.frontend.size() << '\n';
  out << "rng_seed=" << s.rng_seed << '\n';
  out << "step_count=" << s.step_count << '\n';
  write_array(out, "centers", s.frontend.centers);
  write_array(out, "bandwidths", s.frontend.bandwidths);
  out << "classifier_rows=" << s.classifier.rows << '\n';
  out << "classifier_cols=" << s.classifier.cols << '\n';
  write_array(out, "classifier", s.classifier.data);
  if (!out) throw IoError("failed writing checkpoint: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open checkpoint: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) throw IoError("bad checkpoint line: " + line);
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  auto need = [&](const std::string& key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw IoError("checkpoint missing key: " + key);
    return it->second;
  };
  if (std::stoi(need("format_version")) != kCheckpointVersion) {
    throw IoError("unsupported checkpoint version");
  }
  Checkpoint ckpt;
  ckpt.variant = need("variant");
  ckpt.frontend.sample_rate = std::stoi(need("sample_rate"));
  ckpt.frontend.stft.win_length_ms = std::strtod(need("win_length_ms").c_str(), nullptr);
  ckpt.frontend.stft.hop_ms = std::strtod(need("hop_ms").c_str(), nullptr);
  ckpt.frontend.stft.n_fft = std::stoi(need("n_fft"));
  ckpt.frontend.stft.window = window_from_name(need("window"));
  ckpt.frontend.stft.preemph_coeff = std::strtod(need("preemph").c_str(), nullptr);
  ckpt.frontend.log_eps = std::strtod(need("log_eps").c_str(), nullptr);
  ModelState& s = ckpt.state;
  s.frontend.shape = shape_from_name(need("shape"));
  s.frontend.sort_enabled = need("sort_enabled") == "1";
  s.frontend.gain = std::strtod(need("gain").c_str(), nullptr);
  s.frontend.clamp.c_min = std::strtod(need("clamp_c_min").c_str(), nullptr);
  s.frontend.clamp.c_max = std::strtod(need("clamp_c_max").c_str(), nullptr);
  s.frontend.clamp.b_min = std::strtod(need("clamp_b_min").c_str(), nullptr);
  s.frontend.clamp.b_max = std::strtod(need("clamp_b_max").c_str(), nullptr);
  s.rng_seed = std::strtoull(need("rng_seed").c_str(), nullptr, 10);
  s.step_count = std::strtoll(need("step_count").c_str(), nullptr, 10);
  s.frontend.centers = parse_array(need("centers"));
  s.frontend.bandwidths = parse_array(need("bandwidths"));
  const int n_filters = std::stoi(need("n_filters"));
  if (s.frontend.size() != n_filters ||
      static_cast<int>(s.frontend.bandwidths.size()) != n_filters) {
    throw IoError("checkpoint filter arrays do not match n_filters");
  }
  const int rows = std::stoi(need("classifier_rows"));
  const int cols = std::stoi(need("classifier_cols"));
  s.classifier = Matrix(rows, cols);
  s.classifier.data = parse_array(need("classifier"));
  if (static_cast<int>(s.classifier.data.size()) != rows * cols) {
    throw IoError("checkpoint classifier array has wrong length");
  }
  return ckpt;
}

}  // namespace fastaudio
