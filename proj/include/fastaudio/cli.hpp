// fastaudio/cli.hpp

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

#ifndef FASTAUDIO_CLI_HPP_
#define FASTAUDIO_CLI_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>

#include "fastaudio/dataio.hpp"
#include "fastaudio/model.hpp"

namespace fastaudio::cli {

// Flat key=value configuration covering every knob of the pipeline. Config
// files hold one pair per line with '#' comments; --set applies single pairs
// on top. Unknown keys are rejected.
struct RunConfig {
  // analysis
  int sample_rate = 16000;
  double win_length_ms = 25.0;
  double hop_ms = 10.0;
  int n_fft = 400;
  std::string window = "hamming";
  double preemph = 0.97;
  // filterbank
  int n_filters = 40;
  double f_min = 0.0;
  double f_max = 8000.0;
  double clamp_c_min = 0.0;
  double clamp_c_max = -1.0;  // -1: Nyquist
  double clamp_b_min = -1.0;  // -1: one bin width
  double clamp_b_max = -1.0;  // -1: Nyquist
  double log_eps = 1e-6;
  // variant: fixed | fastaudio-tri | fastaudio-gauss | fastaudio-sort
  std::string variant = "fastaudio-tri";
  // training
  double lr_frontend = 1000.0;
  double lr_classifier = 0.003;
  int epochs = 20;
  int batch_size = 8;
  double momentum = 0.9;
  // evaluation
  double beta = 1.0;
  // synthetic corpus
  int n_per_class = 100;
  double duration_s = 1.0;
  double artifact_gain = 0.3;
  double noise_gain = 0.06;
  double artifact_detune = 0.06;
  std::string formants = "400,1120";
  // global
  uint64_t seed = 1;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Throws ConfigMismatch for unknown keys or unparsable values.
void apply_setting(RunConfig& rc, const std::string& key, const std::string& value);
void apply_setting_line(RunConfig& rc, const std::string& line);  // "key=value"
void load_config_file(RunConfig& rc, const std::string& path);
std::string print_config(const RunConfig& rc);

// Derived pieces. Resolution of the -1 sentinels happens here.
StftConfig stft_config(const RunConfig& rc);
ClampBounds clamp_bounds(const RunConfig& rc);
SynthConfig synth_config(const RunConfig& rc);
TrainConfig train_config(const RunConfig& rc);

// Mel-initialized state for the configured variant (zero classifier).
ModelState initial_state(const RunConfig& rc);

// Exit codes: 0 ok, 1 other error, 2 I/O, 3 dataset invalid,
// 4 score/protocol mismatch.
int cmd_synth(const RunConfig& rc, const std::string& out_dir, std::ostream& out);
int cmd_extract(const RunConfig& rc, const std::string& wav_path,
                const std::string& checkpoint_path, const std::string& out_path,
                std::ostream& out);
int cmd_train(const RunConfig& rc, const std::string& data_dir,
              const std::string& checkpoint_out, std::ostream& out);
int cmd_score(const RunConfig& rc, const std::string& checkpoint_path,
              const std::string& data_dir, const std::string& scores_out, std::ostream& out);
int cmd_eval(const RunConfig& rc, const std::string& scores_file,
             const std::string& protocol_file, std::ostream& out);
int cmd_export_filters(const RunConfig& rc, const std::string& checkpoint_path,
                       const std::string& csv_out, std::ostream& out);

}  // namespace fastaudio::cli

#endif  // FASTAUDIO_CLI_HPP_
