// test_model.cpp

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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fastaudio/dataio.hpp"
#include "fastaudio/model.hpp"
#include "fastaudio/rng.hpp"
#include "test_util.hpp"

using namespace fastaudio;
using testutil::rel_err;

namespace {

Waveform tone(double freq, double amp, double seconds, int rate) {
  Waveform w;
  w.sample_rate = rate;
  const int n = static_cast<int>(seconds * rate);
  w.samples.resize(n);
  for (int i = 0; i < n; ++i) {
    w.samples[i] = amp * std::sin(2.0 * std::numbers::pi * freq * i / rate);
  }
  return w;
}

std::vector<Utterance> tiny_dataset(int n_pairs, uint64_t seed) {
  SynthConfig cfg;
  cfg.n_per_class = n_pairs;
  cfg.duration_s = 0.15;
  cfg.seed = seed;
  std::vector<Utterance> out;
  for (auto& [wav, rec] : generate_synthetic(cfg, SynthSplit::kTrain)) {
    Utterance u;
    u.id = rec.utterance_id;
    u.wav = std::move(wav);
    u.label = rec.key == ProtocolRecord::Key::kBonafide ? 0 : 1;
    out.push_back(std::move(u));
  }
  return out;
}

ModelState small_state(int n_filters, double f_max, uint64_t seed, FilterShape shape,
                       bool sort_enabled = false) {
  ModelState s;
  s.frontend = init_mel_params(n_filters, 0.0, f_max, shape,
                               ClampBounds{0.0, f_max, 10.0, f_max}, sort_enabled);
  s.classifier = init_classifier(n_filters);
  s.rng_seed = seed;
  return s;
}

}  // namespace

TEST_CASE("extract_features shape and silence") {
  StftConfig cfg;
  const double eps = 1e-6;
  const auto params =
      init_mel_params(40, 0.0, 8000.0, FilterShape::kTriangular, {}, false);
  SUBCASE("one second at 16 kHz gives 98 frames") {
    const auto f = extract_features(tone(440.0, 0.5, 1.0, 16000), cfg, params, eps);
    CHECK(f.values.rows == 40);
    CHECK(f.values.cols == 98);
  }
  SUBCASE("digital silence maps to ln(eps) everywhere") {
    Waveform silence;
    silence.sample_rate = 16000;
    silence.samples.assign(16000, 0.0);
    const auto f = extract_features(silence, cfg, params, eps);
    for (double v : f.values.data) CHECK(v == std::log(eps));
  }
  SUBCASE("too short propagates") {
    Waveform w;
    w.sample_rate = 16000;
    w.samples.assign(100, 0.1);
    CHECK_THROWS_AS(extract_features(w, cfg, params, eps), SignalTooShort);
  }
}

TEST_CASE("an isolated on-bin tone wins its own filter row") {
  // 1 kHz rate, n_fft 64: bins every 15.625 Hz. Tone at bin 16 = 250 Hz.
  StftConfig cfg;
  cfg.n_fft = 64;
  cfg.win_length_ms = 64.0;
  cfg.hop_ms = 32.0;
  cfg.preemph_coeff = 0.0;
  FilterbankParams params;
  params.shape = FilterShape::kTriangular;
  params.clamp = {0.0, 500.0, 1.0, 500.0};
  params.centers = {93.75, 250.0, 406.25};   // bins 6, 16, 26
  params.bandwidths = {60.0, 60.0, 60.0};    // supports stay clear of bin 16
  const auto f = extract_features(tone(250.0, 0.6, 0.5, 1000), cfg, params, 1e-6);
  REQUIRE(f.values.rows == 3);
  std::vector<double> avg(3, 0.0);
  for (int n = 0; n < 3; ++n) {
    for (int t = 0; t < f.values.cols; ++t) avg[n] += f.values(n, t);
  }
  CHECK(avg[1] > avg[0]);
  CHECK(avg[1] > avg[2]);
}

TEST_CASE("stats_pool") {
  SUBCASE("constant rows have zero deviation") {
    FeatureMatrix f;
    f.values = Matrix(2, 3);
    f.values.data = {4, 4, 4, -1, -1, -1};
    const auto e = stats_pool(f);
    CHECK(e == std::vector<double>{4, -1, 0, 0});
  }
  SUBCASE("single frame") {
    FeatureMatrix f;
    f.values = Matrix(2, 1);
    f.values.data = {2.5, -3.0};
    const auto e = stats_pool(f);
    CHECK(e == std::vector<double>{2.5, -3.0, 0, 0});
  }
  SUBCASE("two-point row") {
    FeatureMatrix f;
    f.values = Matrix(1, 2);
    f.values.data = {1.0, 3.0};
    const auto e = stats_pool(f);
    CHECK(e[0] == 2.0);
    CHECK(e[1] == 1.0);  // population deviation
  }
}

TEST_CASE("classify") {
  SUBCASE("zero weights are indifferent") {
    const Matrix w(3, 2, 0.0);
    const auto p = classify(std::vector<double>{0.7, -0.2}, w);
    CHECK(p[0] == 0.5);
    CHECK(p[1] == 0.5);
  }
  SUBCASE("saturated logits") {
    Matrix w(2, 2, 0.0);
    w(1, 0) = 1000.0;
    w(1, 1) = -1000.0;
    const auto p = classify(std::vector<double>{0.0}, w);
    CHECK(p[0] == 1.0);
    CHECK(p[1] == 0.0);
  }
  SUBCASE("unit logit gap") {
    Matrix w(2, 2, 0.0);
    w(0, 0) = 1.0;  // logits (1, 0) for embedding {1}
    const auto p = classify(std::vector<double>{1.0}, w);
    CHECK(p[0] == doctest::Approx(std::exp(1.0) / (std::exp(1.0) + 1.0)).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(1.0 / (std::exp(1.0) + 1.0)).epsilon(1e-12));
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(classify(std::vector<double>{1.0, 2.0}, Matrix(2, 2, 0.0)),
                    DimensionMismatch);
  }
}

TEST_CASE("cross_entropy") {
  CHECK(cross_entropy({1.0, 0.0}, 0) == 0.0);
  CHECK(cross_entropy({0.5, 0.5}, 1) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(cross_entropy({0.25, 0.75}, 0) == doctest::Approx(std::log(4.0)).epsilon(1e-12));
}

namespace {

LabeledSpectrogram spectrogram_of(const Waveform& wav, const StftConfig& cfg, int label) {
  LabeledSpectrogram item;
  item.spec = power_spectrum(frame_signal(pre_emphasize(wav, cfg.preemph_coeff), cfg), cfg,
                             wav.sample_rate);
  item.label = label;
  return item;
}

double batch_loss(std::span<const LabeledSpectrogram> batch, const ModelState& state,
                  double eps) {
  double total = 0.0;
  for (const auto& item : batch) {
    const FilterbankMatrix fb = build_filter_matrix(state.frontend, item.spec.bin_freqs);
    FeatureMatrix f;
    f.values = log_compress(apply_filterbank(item.spec, fb), eps);
    const auto probs = classify(stats_pool(f), state.classifier);
    total += cross_entropy(probs, item.label);
  }
  return total / static_cast<double>(batch.size());
}

}  // namespace

TEST_CASE("backward_full basics") {
  StftConfig cfg;
  cfg.n_fft = 32;
  cfg.win_length_ms = 2.0;  // 32 samples at 16 kHz
  cfg.hop_ms = 1.0;
  const double eps = 1e-6;
  std::vector<LabeledSpectrogram> batch;
  batch.push_back(spectrogram_of(tone(2000.0, 0.4, 0.01, 16000), cfg, 0));
  batch.push_back(spectrogram_of(tone(5000.0, 0.4, 0.01, 16000), cfg, 1));

  ModelState state = small_state(3, 8000.0, 1, FilterShape::kTriangular);
  SUBCASE("freeze reports zero front-end gradients") {
    Rng rng(5);
    for (double& v : state.classifier.data) v = rng.uniform(-0.5, 0.5);
    const auto r = backward_full(batch, state, eps, /*freeze_frontend=*/true);
    for (double v : r.d_frontend.d_centers) CHECK(v == 0.0);
    for (double v : r.d_frontend.d_bandwidths) CHECK(v == 0.0);
    bool any = false;
    for (double v : r.d_classifier.data) any = any || v != 0.0;
    CHECK(any);
  }
  SUBCASE("zero loss means zero gradients") {
    // Saturate the correct class for every item in the batch.
    std::vector<LabeledSpectrogram> all_bona = {batch[0]};
    state.classifier(2 * 3, 0) = 1000.0;
    state.classifier(2 * 3, 1) = -1000.0;
    const auto r = backward_full(all_bona, state, eps, false);
    CHECK(r.mean_loss == 0.0);
    for (double v : r.d_classifier.data) CHECK(v == 0.0);
    for (double v : r.d_frontend.d_centers) CHECK(v == 0.0);
    for (double v : r.d_frontend.d_bandwidths) CHECK(v == 0.0);
  }
  SUBCASE("empty batch") {
    CHECK_THROWS_AS(backward_full({}, state, eps, false), EmptyDataset);
  }
}

TEST_CASE("end-to-end gradients match central differences") {
  StftConfig cfg;
  cfg.n_fft = 32;
  cfg.win_length_ms = 2.0;
  cfg.hop_ms = 1.0;
  const double eps = 1e-6;
  const double h = 1e-3;
  Rng rng(29);
  for (FilterShape shape : {FilterShape::kTriangular, FilterShape::kGaussian}) {
    for (int trial = 0; trial < 3; ++trial) {
      std::vector<LabeledSpectrogram> batch;
      batch.push_back(
          spectrogram_of(tone(rng.uniform(500.0, 3000.0), 0.4, 0.01, 16000), cfg, 0));
      batch.push_back(
          spectrogram_of(tone(rng.uniform(3000.0, 7000.0), 0.4, 0.01, 16000), cfg, 1));

      ModelState state = small_state(3, 8000.0, 1, shape);
      for (double& v : state.classifier.data) v = rng.uniform(-0.5, 0.5);
      for (double& c : state.frontend.centers) c += rng.uniform(-40.0, 40.0);

      if (shape == FilterShape::kTriangular) {
        // keep bins away from the kinks
        bool ok = true;
        for (double c : state.frontend.centers) {
          for (double f : batch[0].spec.bin_freqs) {
            const double d = std::abs(f - c);
            for (double b : state.frontend.bandwidths) {
              if (d < 20.0 * h || std::abs(d - b) < 20.0 * h) ok = false;
            }
          }
        }
        if (!ok) continue;
      }

      const auto analytic = backward_full(batch, state, eps, false);
      for (int n = 0; n < state.frontend.size(); ++n) {
        for (int which = 0; which < 2; ++which) {
          ModelState plus = state, minus = state;
          (which == 0 ? plus.frontend.centers[n] : plus.frontend.bandwidths[n]) += h;
          (which == 0 ? minus.frontend.centers[n] : minus.frontend.bandwidths[n]) -= h;
          const double fd = (batch_loss(batch, plus, eps) - batch_loss(batch, minus, eps)) /
                            (2.0 * h);
          const double an =
              which == 0 ? analytic.d_frontend.d_centers[n] : analytic.d_frontend.d_bandwidths[n];
          if (std::max(std::abs(fd), std::abs(an)) > 1e-9) {
            CHECK(rel_err(an, fd) < 1e-3);
          }
        }
      }

      // classifier gradients too
      for (int idx : {0, 3, 6}) {
        ModelState plus = state, minus = state;
        plus.classifier.data[idx] += h;
        minus.classifier.data[idx] -= h;
        const double fd =
            (batch_loss(batch, plus, eps) - batch_loss(batch, minus, eps)) / (2.0 * h);
        if (std::max(std::abs(fd), std::abs(analytic.d_classifier.data[idx])) > 1e-9) {
          CHECK(rel_err(analytic.d_classifier.data[idx], fd) < 1e-3);
        }
      }
    }
  }
}

TEST_CASE("train") {
  const auto dataset = tiny_dataset(6, 3);
  StftConfig stft;
  const double eps = 1e-6;
  TrainConfig cfg;
  cfg.epochs = 3;
  cfg.batch_size = 4;
  cfg.learning_rate_frontend = 50.0;

  SUBCASE("zero learning rates change nothing") {
    TrainConfig frozen = cfg;
    frozen.learning_rate_frontend = 0.0;
    frozen.learning_rate_classifier = 0.0;
    const ModelState init = small_state(8, 8000.0, 7, FilterShape::kTriangular);
    const auto r = train(dataset, frozen, init, stft, eps);
    CHECK(r.state.frontend.centers == init.frontend.centers);
    CHECK(r.state.frontend.bandwidths == init.frontend.bandwidths);
    CHECK(r.state.classifier.data == init.classifier.data);
    CHECK(r.state.step_count == 3 * 3);  // ceil(12 / 4) batches per epoch
    for (double loss : r.epoch_losses) CHECK(loss == r.epoch_losses[0]);
  }

  SUBCASE("training reduces the loss on a separable corpus") {
    const ModelState init = small_state(8, 8000.0, 7, FilterShape::kTriangular);
    TrainConfig longer = cfg;
    longer.epochs = 20;
    longer.batch_size = 12;  // full batch keeps this tiny corpus on a steady descent
    longer.learning_rate_frontend = 1000.0;
    const auto r = train(dataset, longer, init, stft, eps);
    CHECK(r.epoch_losses.back() < r.epoch_losses.front());
  }

  SUBCASE("projection invariants hold after every step") {
    ModelState init = small_state(8, 8000.0, 7, FilterShape::kTriangular, true);
    int checked = 0;
    const auto r = train(dataset, cfg, init, stft, eps, [&](const ModelState& s) {
      ++checked;
      for (int n = 0; n < s.frontend.size(); ++n) {
        CHECK(s.frontend.centers[n] >= s.frontend.clamp.c_min);
        CHECK(s.frontend.centers[n] <= s.frontend.clamp.c_max);
        CHECK(s.frontend.bandwidths[n] >= s.frontend.clamp.b_min);
        CHECK(s.frontend.bandwidths[n] <= s.frontend.clamp.b_max);
        if (n) CHECK(s.frontend.centers[n] >= s.frontend.centers[n - 1]);
      }
      CHECK(s.frontend.gain == 1.0);
    });
    CHECK(checked == static_cast<int>(r.state.step_count));
  }

  SUBCASE("same seed, same result") {
    const ModelState init = small_state(8, 8000.0, 11, FilterShape::kTriangular);
    const auto a = train(dataset, cfg, init, stft, eps);
    const auto b = train(dataset, cfg, init, stft, eps);
    CHECK(a.state.frontend.centers == b.state.frontend.centers);
    CHECK(a.state.frontend.bandwidths == b.state.frontend.bandwidths);
    CHECK(a.state.classifier.data == b.state.classifier.data);
    CHECK(a.epoch_losses == b.epoch_losses);
  }

  SUBCASE("frozen front-end stays put while the classifier learns") {
    TrainConfig frozen = cfg;
    frozen.freeze_frontend = true;
    const ModelState init = small_state(8, 8000.0, 7, FilterShape::kTriangular);
    const auto r = train(dataset, frozen, init, stft, eps);
    CHECK(r.state.frontend.centers == init.frontend.centers);
    CHECK(r.state.frontend.bandwidths == init.frontend.bandwidths);
    CHECK(r.state.classifier.data != init.classifier.data);
  }

  SUBCASE("bad datasets") {
    CHECK_THROWS_AS(train({}, cfg, small_state(4, 8000.0, 1, FilterShape::kTriangular), stft, eps),
                    EmptyDataset);
    std::vector<Utterance> one_class(dataset.begin(), dataset.begin() + 2);
    for (auto& u : one_class) u.label = 1;
    CHECK_THROWS_AS(
        train(one_class, cfg, small_state(4, 8000.0, 1, FilterShape::kTriangular), stft, eps),
        SingleClassDataset);
    std::vector<Utterance> mixed_rates = dataset;
    mixed_rates[1].wav.sample_rate = 8000;
    CHECK_THROWS_AS(
        train(mixed_rates, cfg, small_state(4, 8000.0, 1, FilterShape::kTriangular), stft, eps),
        ConfigMismatch);
  }
  SUBCASE("window wider than the transform") {
    StftConfig bad = stft;
    bad.n_fft = 256;  // window is 400 samples
    CHECK_THROWS_AS(
        train(dataset, cfg, small_state(4, 8000.0, 1, FilterShape::kTriangular), bad, eps),
        ConfigMismatch);
  }
}

TEST_CASE("checkpoints round-trip exactly") {
  testutil::TempDir dir("ckpt");
  Checkpoint ckpt;
  ckpt.variant = "fastaudio-gauss";
  ckpt.frontend.sample_rate = 16000;
  ckpt.frontend.log_eps = 1e-6;
  ckpt.state = small_state(5, 8000.0, 99, FilterShape::kGaussian);
  Rng rng(13);
  for (double& v : ckpt.state.classifier.data) v = rng.uniform(-1.0, 1.0);
  for (double& v : ckpt.state.frontend.centers) v += rng.uniform(0.0, 1.0) / 3.0;
  ckpt.state.step_count = 1234;
  save_checkpoint(dir.file("m.ckpt"), ckpt);
  const Checkpoint back = load_checkpoint(dir.file("m.ckpt"));
  CHECK(back.variant == ckpt.variant);
  CHECK(back.frontend.sample_rate == 16000);
  CHECK(back.frontend.stft.n_fft == ckpt.frontend.stft.n_fft);
  CHECK(back.frontend.log_eps == ckpt.frontend.log_eps);
  CHECK(back.state.frontend.centers == ckpt.state.frontend.centers);
  CHECK(back.state.frontend.bandwidths == ckpt.state.frontend.bandwidths);
  CHECK(back.state.frontend.shape == FilterShape::kGaussian);
  CHECK(back.state.classifier.data == ckpt.state.classifier.data);
  CHECK(back.state.step_count == 1234);
  CHECK(back.state.rng_seed == 99);
  CHECK_THROWS_AS(load_checkpoint(dir.file("missing.ckpt")), IoError);
}

TEST_CASE("format_double_exact survives the round trip") {
  Rng rng(101);
  for (int i = 0; i < 500; ++i) {
    const double v = (rng.uniform() - 0.5) * std::pow(10.0, rng.uniform(-12.0, 12.0));
    CHECK(std::strtod(format_double_exact(v).c_str(), nullptr) == v);
  }
  CHECK(format_double_exact(0.97) == "0.97");
}
