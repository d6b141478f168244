// cli.cpp

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

#include "fastaudio/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "fastaudio/metrics.hpp"

namespace fastaudio::cli {

namespace {

double parse_double(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0') {
    throw ConfigMismatch("bad numeric value for " + key + ": " + value);
  }
  return v;
}

int parse_int(const std::string& key, const std::string& value) {
  const double v = parse_double(key, value);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) {
    throw ConfigMismatch("expected integer for " + key + ": " + value);
  }
  return i;
}

std::vector<double> parse_formants(const std::string& text) {
  std::vector<double> out;
  std::string item;
  std::istringstream ss(text);
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(parse_double("formants", item));
  }
  if (out.empty()) throw ConfigMismatch("formants must list at least one frequency");
  return out;
}

const std::unordered_set<std::string> kVariants = {"fixed", "fastaudio-tri", "fastaudio-gauss",
                                                   "fastaudio-sort"};

}  // namespace

void apply_setting(RunConfig& rc, const std::string& key, const std::string& value) {
  if (key == "sample_rate") {
    rc.sample_rate = parse_int(key, value);
  } else if (key == "win_length_ms") {
    rc.win_length_ms = parse_double(key, value);
  } else if (key == "hop_ms") {
    rc.hop_ms = parse_double(key, value);
  } else if (key == "n_fft") {
    rc.n_fft = parse_int(key, value);
  } else if (key == "window") {
    window_from_name(value);  // validates
    rc.window = value;
  } else if (key == "preemph") {
    rc.preemph = parse_double(key, value);
  } else if (key == "n_filters") {
    rc.n_filters = parse_int(key, value);
  } else if (key == "f_min") {
    rc.f_min = parse_double(key, value);
  } else if (key == "f_max") {
    rc.f_max = parse_double(key, value);
  } else if (key == "clamp_c_min") {
    rc.clamp_c_min = parse_double(key, value);
  } else if (key == "clamp_c_max") {
    rc.clamp_c_max = parse_double(key, value);
  } else if (key == "clamp_b_min") {
    rc.clamp_b_min = parse_double(key, value);
  } else if (key == "clamp_b_max") {
    rc.clamp_b_max = parse_double(key, value);
  } else if (key == "log_eps") {
    rc.log_eps = parse_double(key, value);
  } else if (key == "variant") {
    if (!kVariants.count(value)) throw ConfigMismatch("unknown variant: " + value);
    rc.variant = value;
  } else if (key == "lr_frontend") {
    rc.lr_frontend = parse_double(key, value);
  } else if (key == "lr_classifier") {
    rc.lr_classifier = parse_double(key, value);
  } else if (key == "epochs") {
    rc.epochs = parse_int(key, value);
  } else if (key == "batch_size") {
    rc.batch_size = parse_int(key, value);
  } else if (key == "momentum") {
    rc.momentum = parse_double(key, value);
  } else if (key == "beta") {
    rc.beta = parse_double(key, value);
  } else if (key == "n_per_class") {
    rc.n_per_class = parse_int(key, value);
  } else if (key == "duration_s") {
    rc.duration_s = parse_double(key, value);
  } else if (key == "artifact_gain") {
    rc.artifact_gain = parse_double(key, value);
  } else if (key == "noise_gain") {
    rc.noise_gain = parse_double(key, value);
  } else if (key == "artifact_detune") {
    rc.artifact_detune = parse_double(key, value);
  } else if (key == "formants") {
    parse_formants(value);  // validates
    rc.formants = value;
  } else if (key == "seed") {
    char* end = nullptr;
    rc.seed = std::strtoull(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0') {
      throw ConfigMismatch("bad seed value: " + value);
    }
  } else {
    throw ConfigMismatch("unknown config key: " + key);
  }
}

void apply_setting_line(RunConfig& rc, const std::string& line) {
  const size_t eq = line.find('=');
  if (eq == std::string::npos) {
    throw ConfigMismatch("expected key=value, got: " + line);
  }
  apply_setting(rc, line.substr(0, eq), line.substr(eq + 1));
}

void load_config_file(RunConfig& rc, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::string line;
  while (std::getline(in, line)) {
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    // trim
    const size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const size_t last = line.find_last_not_of(" \t\r");
    apply_setting_line(rc, line.substr(first, last - first + 1));
  }
}

std::string print_config(const RunConfig& rc) {
  std::ostringstream out;
  out << "sample_rate=" << rc.sample_rate << '\n';
  out << "win_length_ms=" << format_double_exact(rc.win_length_ms) << '\n';
  out << "hop_ms=" << format_double_exact(rc.hop_ms) << '\n';
  out << "n_fft=" << rc.n_fft << '\n';
  out << "window=" << rc.window << '\n';
  out << "preemph=" << format_double_exact(rc.preemph) << '\n';
  out << "n_filters=" << rc.n_filters << '\n';
  out << "f_min=" << format_double_exact(rc.f_min) << '\n';
  out << "f_max=" << format_double_exact(rc.f_max) << '\n';
  out << "clamp_c_min=" << format_double_exact(rc.clamp_c_min) << '\n';
  out << "clamp_c_max=" << format_double_exact(rc.clamp_c_max) << '\n';
  out << "clamp_b_min=" << format_double_exact(rc.clamp_b_min) << '\n';
  out << "clamp_b_max=" << format_double_exact(rc.clamp_b_max) << '\n';
  out << "log_eps=" << format_double_exact(rc.log_eps) << '\n';
  out << "variant=" << rc.variant << '\n';
  out << "lr_frontend=" << format_double_exact(rc.lr_frontend) << '\n';
  out << "lr_classifier=" << format_double_exact(rc.lr_classifier) << '\n';
  out << "epochs=" << rc.epochs << '\n';
  out << "batch_size=" << rc.batch_size << '\n';
  out << "momentum=" << format_double_exact(rc.momentum) << '\n';
  out << "beta=" << format_double_exact(rc.beta) << '\n';
  out << "n_per_class=" << rc.n_per_class << '\n';
  out << "duration_s=" << format_double_exact(rc.duration_s) << '\n';
  out << "artifact_gain=" << format_double_exact(rc.artifact_gain) << '\n';
  out << "noise_gain=" << format_double_exact(rc.noise_gain) << '\n';
  out << "artifact_detune=" << format_double_exact(rc.artifact_detune) << '\n';
  out << "formants=" << rc.formants << '\n';
  out << "seed=" << rc.seed << '\n';
  return out.str();
}

StftConfig stft_config(const RunConfig& rc) {
  StftConfig cfg;
  cfg.win_length_ms = rc.win_length_ms;
  cfg.hop_ms = rc.hop_ms;
  cfg.n_fft = rc.n_fft;
  cfg.window = window_from_name(rc.window);
  cfg.preemph_coeff = rc.preemph;
  return cfg;
}

ClampBounds clamp_bounds(const RunConfig& rc) {
  const double nyquist = rc.sample_rate / 2.0;
  ClampBounds cb;
  cb.c_min = rc.clamp_c_min;
  cb.c_max = rc.clamp_c_max < 0.0 ? nyquist : rc.clamp_c_max;
  cb.b_min = rc.clamp_b_min < 0.0 ? static_cast<double>(rc.sample_rate) / rc.n_fft
                                  : rc.clamp_b_min;
  cb.b_max = rc.clamp_b_max < 0.0 ? nyquist : rc.clamp_b_max;
  return cb;
}

SynthConfig synth_config(const RunConfig& rc) {
  SynthConfig sc;
  sc.n_per_class = rc.n_per_class;
  sc.duration_s = rc.duration_s;
  sc.seed = rc.seed;
  sc.artifact_gain = rc.artifact_gain;
  sc.formant_freqs = parse_formants(rc.formants);
  sc.sample_rate = rc.sample_rate;
  sc.noise_gain = rc.noise_gain;
  sc.artifact_detune = rc.artifact_detune;
  return sc;
}

TrainConfig train_config(const RunConfig& rc) {
  TrainConfig tc;
  tc.learning_rate_frontend = rc.lr_frontend;
  tc.learning_rate_classifier = rc.lr_classifier;
  tc.epochs = rc.epochs;
  tc.batch_size = rc.batch_size;
  tc.momentum = rc.momentum;
  tc.freeze_frontend = rc.variant == "fixed";
  return tc;
}

ModelState initial_state(const RunConfig& rc) {
  if (!kVariants.count(rc.variant)) throw ConfigMismatch("unknown variant: " + rc.variant);
  if (rc.f_max > rc.sample_rate / 2.0) {
    throw InvalidRange("f_max above the Nyquist frequency");
  }
  const FilterShape shape =
      rc.variant == "fastaudio-gauss" ? FilterShape::kGaussian : FilterShape::kTriangular;
  const bool sort_enabled = rc.variant == "fastaudio-sort";
  ModelState state;
  state.frontend =
      init_mel_params(rc.n_filters, rc.f_min, rc.f_max, shape, clamp_bounds(rc), sort_enabled);
  state.classifier = init_classifier(rc.n_filters);
  state.rng_seed = rc.seed;
  state.step_count = 0;
  return state;
}

namespace {

int guard(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const NotRiff& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const UnsupportedFormat& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const TruncatedFile& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const EmptyDataset& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const SingleClassDataset& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const EmptyScores& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const MalformedLine& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

FrontendConfig frontend_config(const RunConfig& rc) {
  FrontendConfig fc;
  fc.stft = stft_config(rc);
  fc.sample_rate = rc.sample_rate;
  fc.log_eps = rc.log_eps;
  return fc;
}

std::vector<Utterance> load_utterances(const std::string& data_dir, SynthSplit split,
                                       int expect_rate) {
  namespace fs = std::filesystem;
  const auto records = parse_protocol(protocol_path(data_dir, split));
  std::vector<Utterance> utts;
  utts.reserve(records.size());
  for (const ProtocolRecord& rec : records) {
    Utterance u;
    u.id = rec.utterance_id;
    u.label = rec.key == ProtocolRecord::Key::kBonafide ? 0 : 1;
    u.wav = read_wav((fs::path(data_dir) / (rec.utterance_id + ".wav")).string());
    if (u.wav.sample_rate != expect_rate) {
      throw ConfigMismatch("utterance " + u.id + " has sample rate " +
                           std::to_string(u.wav.sample_rate) + ", configured " +
                           std::to_string(expect_rate) + " (resampling unsupported)");
    }
    utts.push_back(std::move(u));
  }
  return utts;
}

}  // namespace

int cmd_synth(const RunConfig& rc, const std::string& out_dir, std::ostream& out) {
  return guard(std::cerr, [&] {
    const SynthConfig sc = synth_config(rc);
    if (sc.duration_s * sc.sample_rate < stft_config(rc).win_length_samples(sc.sample_rate)) {
      throw InvalidRange("duration too short for one analysis window");
    }
    write_synthetic_corpus(sc, out_dir);
    out << "wrote " << 2 * sc.n_per_class << " train and " << 2 * sc.n_per_class
        << " eval utterances to " << out_dir << '\n';
    return 0;
  });
}

int cmd_extract(const RunConfig& rc, const std::string& wav_path,
                const std::string& checkpoint_path, const std::string& out_path,
                std::ostream& out) {
  return guard(std::cerr, [&] {
    const Waveform wav = read_wav(wav_path);
    FilterbankParams params;
    StftConfig stft;
    double eps;
    if (checkpoint_path.empty()) {
      params = initial_state(rc).frontend;
      stft = stft_config(rc);
      eps = rc.log_eps;
    } else {
      const Checkpoint ckpt = load_checkpoint(checkpoint_path);
      params = ckpt.state.frontend;
      stft = ckpt.frontend.stft;
      eps = ckpt.frontend.log_eps;
    }
    const FeatureMatrix features = extract_features(wav, stft, params, eps);
    write_feature_dump(out_path, features.values);
    out << "wrote " << features.values.rows << " x " << features.values.cols << " features to "
        << out_path << '\n';
    return 0;
  });
}

int cmd_train(const RunConfig& rc, const std::string& data_dir,
              const std::string& checkpoint_out, std::ostream& out) {
  return guard(std::cerr, [&] {
    const auto dataset = load_utterances(data_dir, SynthSplit::kTrain, rc.sample_rate);
    const ModelState init = initial_state(rc);
    const TrainResult result =
        train(dataset, train_config(rc), init, stft_config(rc), rc.log_eps);
    char buf[64];
    for (size_t i = 0; i < result.epoch_losses.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.9g", result.epoch_losses[i]);
      out << "epoch=" << i << " loss=" << buf << '\n';
    }
    Checkpoint ckpt;
    ckpt.variant = rc.variant;
    ckpt.frontend = frontend_config(rc);
    ckpt.state = result.state;
    save_checkpoint(checkpoint_out, ckpt);
    return 0;
  });
}

int cmd_score(const RunConfig& rc, const std::string& checkpoint_path,
              const std::string& data_dir, const std::string& scores_out, std::ostream& out) {
  (void)rc;
  return guard(std::cerr, [&] {
    const Checkpoint ckpt = load_checkpoint(checkpoint_path);
    const auto utts =
        load_utterances(data_dir, SynthSplit::kEval, ckpt.frontend.sample_rate);
    const int n = static_cast<int>(utts.size());
    std::vector<ScoredUtterance> scores(n);
    if (ckpt.frontend.stft.win_length_samples(ckpt.frontend.sample_rate) >
        ckpt.frontend.stft.n_fft) {
      throw ConfigMismatch("checkpoint window longer than n_fft");
    }
    if (ckpt.frontend.stft.hop_samples(ckpt.frontend.sample_rate) < 1) {
      throw ConfigMismatch("checkpoint hop under one sample");
    }
    if (ckpt.state.classifier.rows != 2 * ckpt.state.frontend.size() + 1 ||
        ckpt.state.classifier.cols != 2) {
      throw DimensionMismatch("checkpoint classifier shape mismatch");
    }
    for (const Utterance& u : utts) {
      if (static_cast<int>(u.wav.samples.size()) <
          ckpt.frontend.stft.win_length_samples(u.wav.sample_rate)) {
        throw SignalTooShort("utterance " + u.id + " shorter than one analysis window");
      }
    }
    // Extraction order is free; output order follows the protocol.
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
      const Waveform emphasized = pre_emphasize(utts[i].wav, ckpt.frontend.stft.preemph_coeff);
      const PowerSpectrogram spec = power_spectrum(
          frame_signal(emphasized, ckpt.frontend.stft), ckpt.frontend.stft,
          utts[i].wav.sample_rate);
      scores[i].utterance_id = utts[i].id;
      scores[i].score = score_utterance(spec, ckpt.state, ckpt.frontend.log_eps);
    }
    write_score_file(scores_out, scores);
    out << "scored " << n << " utterances to " << scores_out << '\n';
    return 0;
  });
}

int cmd_eval(const RunConfig& rc, const std::string& scores_file,
             const std::string& protocol_file, std::ostream& out) {
  int exit_code = guard(std::cerr, [&] {
    const auto scored = read_score_file(scores_file);
    const auto records = parse_protocol(protocol_file);
    std::unordered_map<std::string, ProtocolRecord::Key> labels;
    for (const ProtocolRecord& rec : records) labels[rec.utterance_id] = rec.key;
    ScoreSet scores;
    for (const ScoredUtterance& s : scored) {
      const auto it = labels.find(s.utterance_id);
      if (it == labels.end()) {
        std::cerr << "error: scored utterance " << s.utterance_id << " not in protocol\n";
        return 4;
      }
      if (it->second == ProtocolRecord::Key::kBonafide) {
        scores.bona_scores.push_back(s.score);
      } else {
        scores.spoof_scores.push_back(s.score);
      }
    }
    const EerResult eer = compute_eer(scores);
    const double tdcf = min_tdcf(scores, TdcfParams{rc.beta});
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", eer.eer);
    out << "eer=" << buf << '\n';
    std::snprintf(buf, sizeof(buf), "%.9g", tdcf);
    out << "min_tdcf=" << buf << '\n';
    std::snprintf(buf, sizeof(buf), "%.9g", eer.threshold);
    out << "threshold=" << buf << '\n';
    return 0;
  });
  return exit_code;
}

int cmd_export_filters(const RunConfig& rc, const std::string& checkpoint_path,
                       const std::string& csv_out, std::ostream& out) {
  (void)rc;
  return guard(std::cerr, [&] {
    const Checkpoint ckpt = load_checkpoint(checkpoint_path);
    const int n_bins = ckpt.frontend.stft.num_bins();
    std::vector<double> grid(n_bins);
    for (int k = 0; k < n_bins; ++k) {
      grid[k] =
          static_cast<double>(k) * ckpt.frontend.sample_rate / ckpt.frontend.stft.n_fft;
    }
    const FilterbankMatrix fb = build_filter_matrix(ckpt.state.frontend, grid);
    std::ofstream csv(csv_out);
    if (!csv) throw IoError("cannot write csv: " + csv_out);
    csv << filter_matrix_csv(fb);
    if (!csv) throw IoError("failed writing csv: " + csv_out);
    out << "wrote filter responses to " << csv_out << '\n';
    return 0;
  });
}

}  // namespace fastaudio::cli
