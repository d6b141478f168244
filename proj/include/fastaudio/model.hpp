// fastaudio/model.hpp

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

#ifndef FASTAUDIO_MODEL_HPP_
#define FASTAUDIO_MODEL_HPP_

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fastaudio/filterbank.hpp"
#include "fastaudio/matrix.hpp"
#include "fastaudio/signal.hpp"

namespace fastaudio {

// End-to-end trainable pipeline: learnable filterbank front-end, statistics
// pooling over time, linear softmax classifier, SGD with momentum, and
// projection (clamp, optional sort) after every step. The back-end is
// deliberately small; it only has to pass gradients into the front-end and
// separate the desk-scale corpora.

struct FeatureMatrix {
  Matrix values;  // n_filters x n_frames, log energies
  std::string utterance_id;
};

struct ModelState {
  FilterbankParams frontend;
  Matrix classifier;  // (2*n_filters + 1) x 2; last row is the bias
  uint64_t rng_seed = 1;
  int64_t step_count = 0;
};

struct TrainConfig {
  // Front-end steps move parameters measured in Hz, so the two rates differ
  // by orders of magnitude.
  double learning_rate_frontend = 1000.0;
  double learning_rate_classifier = 0.003;
  int epochs = 20;
  int batch_size = 8;
  bool freeze_frontend = false;
  double momentum = 0.9;
};

struct Utterance {
  std::string id;
  Waveform wav;
  int label = 0;  // 0 bona fide, 1 spoof
};

struct LabeledSpectrogram {
  PowerSpectrogram spec;
  int label = 0;
};

// pre_emphasize -> frame_signal -> power_spectrum -> apply_filterbank ->
// log_compress. Propagates SignalTooShort from framing.
FeatureMatrix extract_features(const Waveform& x, const StftConfig& cfg,
                               const FilterbankParams& params, double eps);

// Per-row mean followed by per-row population standard deviation.
std::vector<double> stats_pool(const FeatureMatrix& features);

// softmax(W^T e + bias); weights has one row per embedding entry plus a bias
// row, one column per class (bona fide, spoof).
std::array<double, 2> classify(std::span<const double> embedding, const Matrix& weights);

double cross_entropy(const std::array<double, 2>& probs, int label);

// Zero-initialized classifier of the right shape for n_filters.
Matrix init_classifier(int n_filters);

struct BackwardResult {
  Matrix d_classifier;
  FilterbankGrad d_frontend;
  double mean_loss = 0.0;
};

// Exact gradients of the mean batch loss through classify -> stats_pool ->
// log_compress -> apply_filterbank, accumulated in batch order. With
// freeze_frontend the front-end gradients are reported as zero.
BackwardResult backward_full(std::span<const LabeledSpectrogram> batch, const ModelState& state,
                             double log_eps, bool freeze_frontend = false);

struct TrainResult {
  ModelState state;
  std::vector<double> epoch_losses;  // mean per-utterance loss, one per epoch
};

using StepObserver = std::function<void(const ModelState&)>;

// Mini-batch SGD with momentum over a shuffled dataset; the shuffle is the
// only randomness and is driven by init.rng_seed, so results are
// bit-reproducible. After every step the front-end is clamped and, when
// enabled, sorted (momentum buffers are permuted along with the pairs).
// Throws EmptyDataset / SingleClassDataset.
TrainResult train(const std::vector<Utterance>& dataset, const TrainConfig& cfg,
                  const ModelState& init, const StftConfig& stft, double log_eps,
                  const StepObserver& observer = nullptr);

// ln p(bona fide) for one utterance.
double score_utterance(const PowerSpectrogram& spec, const ModelState& state, double log_eps);

// Everything needed to rerun feature extraction at scoring time.
struct FrontendConfig {
  StftConfig stft;
  int sample_rate = 16000;
  double log_eps = 1e-6;
};

struct Checkpoint {
  std::string variant = "fastaudio-tri";
  FrontendConfig frontend;
  ModelState state;
};

// Flat text format: format-version line, key=value scalars, whitespace
// separated arrays for centers, bandwidths and classifier weights. Doubles
// are printed with enough digits to round-trip exactly.
void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

// Shortest decimal form that parses back to the same double.
std::string format_double_exact(double v);

}  // namespace fastaudio

#endif  // FASTAUDIO_MODEL_HPP_
