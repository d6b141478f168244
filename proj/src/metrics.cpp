// metrics.cpp

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

#include "fastaudio/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace fastaudio {

namespace {

void check_nonempty(const ScoreSet& scores) {
  if (scores.bona_scores.empty() || scores.spoof_scores.empty()) {
    throw EmptyScores("need at least one score of each class");
  }
}

}  // namespace

std::vector<DetPoint> det_points(const ScoreSet& scores) {
  check_nonempty(scores);
  std::vector<double> bona = scores.bona_scores;
  std::vector<double> spoof = scores.spoof_scores;
  std::sort(bona.begin(), bona.end());
  std::sort(spoof.begin(), spoof.end());

  std::vector<double> pooled;
  pooled.reserve(bona.size() + spoof.size());
  pooled.insert(pooled.end(), bona.begin(), bona.end());
  pooled.insert(pooled.end(), spoof.begin(), spoof.end());
  std::sort(pooled.begin(), pooled.end());
  pooled.erase(std::unique(pooled.begin(), pooled.end()), pooled.end());

  const double n_bona = static_cast<double>(bona.size());
  const double n_spoof = static_cast<double>(spoof.size());

  // Operating point j covers thresholds in (pooled[j-1], pooled[j]]; rates
  // come from counting, so the representative threshold value never enters
  // the comparison.
  std::vector<DetPoint> points;
  points.reserve(pooled.size() + 1);
  for (size_t j = 0; j <= pooled.size(); ++j) {
    double thr;
    double below;  // strict upper bound of the interval's predecessor
    if (j == 0) {
      thr = pooled[0];
      below = -std::numeric_limits<double>::infinity();
    } else if (j < pooled.size()) {
      thr = (pooled[j - 1] + pooled[j]) / 2.0;
      below = pooled[j - 1];
    } else {
      thr = std::numeric_limits<double>::infinity();
      below = pooled.back();
    }
    const auto miss = std::upper_bound(bona.begin(), bona.end(), below) - bona.begin();
    const auto reject = std::upper_bound(spoof.begin(), spoof.end(), below) - spoof.begin();
    DetPoint pt;
    pt.threshold = thr;
    pt.frr = static_cast<double>(miss) / n_bona;
    pt.far = static_cast<double>(spoof.size() - reject) / n_spoof;
    points.push_back(pt);
  }
  return points;
}

EerResult compute_eer(const ScoreSet& scores) {
  const std::vector<DetPoint> points = det_points(scores);
  size_t best = 0;
  double best_gap = std::numeric_limits<double>::infinity();
  for (size_t j = 0; j < points.size(); ++j) {
    const double gap = std::abs(points[j].far - points[j].frr);
    if (gap < best_gap) {
      best_gap = gap;
      best = j;
    }
  }
  return {(points[best].far + points[best].frr) / 2.0, points[best].threshold};
}

double min_tdcf(const ScoreSet& scores, const TdcfParams& params) {
  if (params.beta < 0.0) throw InvalidRange("beta must be non-negative");
  const std::vector<DetPoint> points = det_points(scores);
  double best = std::numeric_limits<double>::infinity();
  for (const DetPoint& pt : points) {
    best = std::min(best, params.beta * pt.frr + pt.far);
  }
  return best;
}

std::vector<ScoredUtterance> read_score_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open score file: " + path);
  std::vector<ScoredUtterance> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    ScoredUtterance s;
    if (!(ss >> s.utterance_id >> s.score)) {
      throw MalformedLine("bad score line: " + line, line_no);
    }
    out.push_back(std::move(s));
  }
  return out;
}

void write_score_file(const std::string& path, const std::vector<ScoredUtterance>& scores) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write score file: " + path);
  char buf[64];
  for (const ScoredUtterance& s : scores) {
    std::snprintf(buf, sizeof(buf), "%.12g", s.score);
    out << s.utterance_id << ' ' << buf << '\n';
  }
  if (!out) throw IoError("failed writing score file: " + path);
}

}  // namespace fastaudio
