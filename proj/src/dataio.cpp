// dataio.cpp

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

#include "fastaudio/dataio.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "fastaudio/rng.hpp"

namespace fastaudio {

namespace {

uint32_t read_u32(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t read_u16(const uint8_t* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::string& s, uint32_t v) {
  s.push_back(static_cast<char>(v & 0xff));
  s.push_back(static_cast<char>((v >> 8) & 0xff));
  s.push_back(static_cast<char>((v >> 16) & 0xff));
  s.push_back(static_cast<char>((v >> 24) & 0xff));
}

void put_u16(std::string& s, uint16_t v) {
  s.push_back(static_cast<char>(v & 0xff));
  s.push_back(static_cast<char>((v >> 8) & 0xff));
}

}  // namespace

Waveform read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open wav file: " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw NotRiff("not a RIFF/WAVE file: " + path);
  }

  bool have_fmt = false;
  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t sample_rate = 0;
  const uint8_t* data = nullptr;
  uint32_t data_size = 0;
  bool have_data = false;

  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const char* id = reinterpret_cast<const char*>(bytes.data() + pos);
    const uint32_t sz = read_u32(bytes.data() + pos + 4);
    pos += 8;
    if (pos + sz > bytes.size()) {
      throw TruncatedFile("chunk extends past end of file: " + path);
    }
    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (sz < 16) throw TruncatedFile("fmt chunk too small: " + path);
      format = read_u16(bytes.data() + pos);
      channels = read_u16(bytes.data() + pos + 2);
      sample_rate = read_u32(bytes.data() + pos + 4);
      bits = read_u16(bytes.data() + pos + 14);
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      data = bytes.data() + pos;
      data_size = sz;
      have_data = true;
    }
    pos += sz + (sz & 1);  // chunks are word-aligned
  }
  if (!have_fmt || !have_data) {
    throw TruncatedFile("missing fmt or data chunk: " + path);
  }
  if (format != 1) throw UnsupportedFormat("only PCM (format 1) is supported: " + path);
  if (channels != 1) throw UnsupportedFormat("only mono is supported: " + path);
  if (bits != 16) throw UnsupportedFormat("only 16-bit samples are supported: " + path);
  if (sample_rate == 0) throw UnsupportedFormat("zero sample rate: " + path);

  Waveform wav;
  wav.sample_rate = static_cast<int>(sample_rate);
  const size_t n = data_size / 2;
  wav.samples.resize(n);
  for (size_t i = 0; i < n; ++i) {
    const int16_t v = static_cast<int16_t>(read_u16(data + 2 * i));
    wav.samples[i] = static_cast<double>(v) / 32768.0;
  }
  return wav;
}

void write_wav(const std::string& path, const Waveform& wav) {
  const uint32_t n = static_cast<uint32_t>(wav.samples.size());
  const uint32_t data_size = 2 * n;
  std::string out;
  out.reserve(44 + data_size);
  out += "RIFF";
  put_u32(out, 36 + data_size);
  out += "WAVE";
  out += "fmt ";
  put_u32(out, 16);
  put_u16(out, 1);  // PCM
  put_u16(out, 1);  // mono
  put_u32(out, static_cast<uint32_t>(wav.sample_rate));
  put_u32(out, static_cast<uint32_t>(wav.sample_rate) * 2);
  put_u16(out, 2);   // block align
  put_u16(out, 16);  // bits
  out += "data";
  put_u32(out, data_size);
  for (uint32_t i = 0; i < n; ++i) {
    double v = std::lround(wav.samples[i] * 32768.0);
    v = std::clamp(v, -32768.0, 32767.0);
    put_u16(out, static_cast<uint16_t>(static_cast<int16_t>(v)));
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write wav file: " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("failed writing wav file: " + path);
}

std::vector<ProtocolRecord> parse_protocol(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open protocol file: " + path);
  std::vector<ProtocolRecord> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(line);
    std::vector<std::string> fields;
    std::string field;
    while (ss >> field) fields.push_back(field);
    if (fields.empty()) continue;
    if (fields.size() != 5) {
      throw MalformedLine("expected 5 fields, got " + std::to_string(fields.size()), line_no);
    }
    ProtocolRecord rec;
    rec.speaker_id = fields[0];
    rec.utterance_id = fields[1];
    rec.system_id = fields[3];
    std::string key = fields[4];
    std::transform(key.begin(), key.end(), key.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (key == "bonafide") {
      rec.key = ProtocolRecord::Key::kBonafide;
    } else if (key == "spoof") {
      rec.key = ProtocolRecord::Key::kSpoof;
    } else {
      throw MalformedLine("unknown key '" + fields[4] + "'", line_no);
    }
    if (rec.utterance_id.empty()) throw MalformedLine("empty utterance id", line_no);
    records.push_back(std::move(rec));
  }
  return records;
}

namespace {

struct Tone {
  double freq;
  double phase;
  double amp;
};

// Sum of constant-frequency sinusoids via phasor recurrences; one complex
// multiply per tone per sample instead of a sin() call.
void add_tones(std::vector<double>& x, const std::vector<Tone>& tones, int sample_rate) {
  for (const Tone& tone : tones) {
    std::complex<double> z = std::polar(1.0, tone.phase);
    const std::complex<double> rot =
        std::polar(1.0, 2.0 * std::numbers::pi * tone.freq / sample_rate);
    for (double& v : x) {
      v += tone.amp * z.imag();
      z *= rot;
    }
  }
}

constexpr int kNoiseBands = 8;

}  // namespace

std::vector<std::pair<Waveform, ProtocolRecord>> generate_synthetic(const SynthConfig& cfg,
                                                                    SynthSplit split) {
  if (cfg.n_per_class < 1) throw InvalidRange("n_per_class must be at least 1");
  const int n_samples = static_cast<int>(std::lround(cfg.duration_s * cfg.sample_rate));
  if (n_samples < 1) throw InvalidRange("duration too short");
  const double nyquist = cfg.sample_rate / 2.0;
  const double artifact_freq = 0.9 * nyquist;
  const double band_width = nyquist / kNoiseBands;
  const double comb_step = nyquist / 160.0;
  const int n_comb = 158;  // comb_step, 2*comb_step, ... just below Nyquist
  const char* split_tag = split == SynthSplit::kTrain ? "T" : "E";
  const uint64_t split_stream = split == SynthSplit::kTrain ? 0x10000000ULL : 0x20000000ULL;

  std::vector<std::pair<Waveform, ProtocolRecord>> corpus;
  corpus.reserve(2 * cfg.n_per_class);

  for (int i = 0; i < cfg.n_per_class; ++i) {
    Rng rng(mix_seed(cfg.seed, split_stream + static_cast<uint64_t>(i)));

    // Draws shared by the bona fide / spoof twin pair.
    std::vector<Tone> tones;
    tones.reserve(cfg.formant_freqs.size() + n_comb);
    for (double f : cfg.formant_freqs) {
      Tone t;
      t.freq = f * (1.0 + rng.uniform(-0.02, 0.02));
      t.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
      t.amp = 1.0;
      tones.push_back(t);
    }
    double band_level[kNoiseBands];
    for (double& lvl : band_level) lvl = rng.uniform(0.5, 1.5);
    for (int j = 1; j <= n_comb; ++j) {
      Tone t;
      const double f0 = j * comb_step;
      t.freq = f0 + rng.uniform(-comb_step / 2.0, comb_step / 2.0);
      t.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
      const int band = std::min(kNoiseBands - 1, static_cast<int>(f0 / band_width));
      t.amp = cfg.noise_gain * band_level[band];
      tones.push_back(t);
    }
    Tone artifact;
    artifact.freq = artifact_freq * (1.0 + rng.uniform(-cfg.artifact_detune, cfg.artifact_detune));
    artifact.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    artifact.amp = cfg.artifact_gain;

    std::vector<double> base(n_samples, 0.0);
    add_tones(base, tones, cfg.sample_rate);
    std::vector<double> spoofed = base;
    add_tones(spoofed, {artifact}, cfg.sample_rate);

    char idbuf[32];
    for (int cls = 0; cls < 2; ++cls) {
      Waveform wav;
      wav.sample_rate = cfg.sample_rate;
      wav.samples = cls == 0 ? base : spoofed;
      double peak = 0.0;
      for (double v : wav.samples) peak = std::max(peak, std::abs(v));
      if (peak > 0.0) {
        const double scale = 0.9 / peak;
        for (double& v : wav.samples) v *= scale;
      }
      ProtocolRecord rec;
      std::snprintf(idbuf, sizeof(idbuf), "SP%04d", i);
      rec.speaker_id = idbuf;
      std::snprintf(idbuf, sizeof(idbuf), "%s_%c%04d", split_tag, cls == 0 ? 'B' : 'S', i);
      rec.utterance_id = idbuf;
      rec.system_id = cls == 0 ? "-" : "A01";
      rec.key = cls == 0 ? ProtocolRecord::Key::kBonafide : ProtocolRecord::Key::kSpoof;
      corpus.emplace_back(std::move(wav), std::move(rec));
    }
  }
  return corpus;
}

std::string protocol_path(const std::string& data_dir, SynthSplit split) {
  const char* name = split == SynthSplit::kTrain ? "protocol_train.txt" : "protocol_eval.txt";
  return (std::filesystem::path(data_dir) / name).string();
}

void write_synthetic_corpus(const SynthConfig& cfg, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  for (SynthSplit split : {SynthSplit::kTrain, SynthSplit::kEval}) {
    const auto corpus = generate_synthetic(cfg, split);
    std::ofstream protocol(protocol_path(out_dir, split));
    if (!protocol) throw IoError("cannot write protocol in " + out_dir);
    for (const auto& [wav, rec] : corpus) {
      write_wav((fs::path(out_dir) / (rec.utterance_id + ".wav")).string(), wav);
      protocol << rec.speaker_id << ' ' << rec.utterance_id << " - " << rec.system_id << ' '
               << (rec.key == ProtocolRecord::Key::kBonafide ? "bonafide" : "spoof") << '\n';
    }
    if (!protocol) throw IoError("failed writing protocol in " + out_dir);
  }
}

void write_feature_dump(const std::string& path, const Matrix& features) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write feature dump: " + path);
  out << features.rows << ' ' << features.cols << '\n';
  char buf[64];
  for (int r = 0; r < features.rows; ++r) {
    for (int c = 0; c < features.cols; ++c) {
      std::snprintf(buf, sizeof(buf), "%.9g", features(r, c));
      if (c) out << ' ';
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing feature dump: " + path);
}

}  // namespace fastaudio
