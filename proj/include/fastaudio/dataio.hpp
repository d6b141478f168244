// fastaudio/dataio.hpp

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

#ifndef FASTAUDIO_DATAIO_HPP_
#define FASTAUDIO_DATAIO_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fastaudio/errors.hpp"
#include "fastaudio/matrix.hpp"
#include "fastaudio/signal.hpp"

namespace fastaudio {

// PCM16 mono RIFF/WAVE only; samples normalized by 1/32768. Inputs in any
// other layout raise NotRiff / UnsupportedFormat / TruncatedFile.
Waveform read_wav(const std::string& path);
void write_wav(const std::string& path, const Waveform& wav);

struct ProtocolRecord {
  std::string speaker_id;
  std::string utterance_id;
  std::string system_id;  // "-" for bona fide
  enum class Key { kBonafide, kSpoof } key = Key::kBonafide;
};

// Five whitespace-separated fields per line:
//   speaker utterance ignored system key
// with key one of bonafide/spoof (case-insensitive).
std::vector<ProtocolRecord> parse_protocol(const std::string& path);

// Synthetic desk-scale corpus. Bona fide utterances are a sum of formant-like
// sinusoids (random per-utterance phase and small detuning) over a band-level
// noise bed whose per-band gains are drawn per utterance; the spoof twin adds
// a sinusoid near 0.9 * Nyquist with relative amplitude artifact_gain, built
// from the same draws so the artifact is the only difference before peak
// normalization. The noise bed keeps the fixed wide top filters from spotting
// the artifact trivially; the per-utterance artifact detuning spreads it over
// a band that filters must cover.
struct SynthConfig {
  int n_per_class = 100;   // per class, per split
  double duration_s = 1.0;
  uint64_t seed = 1;
  double artifact_gain = 0.3;
  std::vector<double> formant_freqs = {400.0, 1120.0};
  int sample_rate = 16000;
  double noise_gain = 0.06;      // per-component amplitude of the noise bed
  double artifact_detune = 0.06; // artifact frequency spread, fraction of 0.9*Nyquist
};

enum class SynthSplit { kTrain, kEval };

// Deterministic in (cfg.seed, split): same inputs, byte-identical corpus.
std::vector<std::pair<Waveform, ProtocolRecord>> generate_synthetic(const SynthConfig& cfg,
                                                                    SynthSplit split);

// Writes <utterance>.wav files plus protocol_train.txt / protocol_eval.txt.
void write_synthetic_corpus(const SynthConfig& cfg, const std::string& out_dir);

std::string protocol_path(const std::string& data_dir, SynthSplit split);

// Feature dump: header line `n_filters n_frames`, one whitespace-separated
// row per filter.
void write_feature_dump(const std::string& path, const Matrix& features);

}  // namespace fastaudio

#endif  // FASTAUDIO_DATAIO_HPP_
