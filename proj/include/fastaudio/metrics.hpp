// fastaudio/metrics.hpp

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

#ifndef FASTAUDIO_METRICS_HPP_
#define FASTAUDIO_METRICS_HPP_

#include <string>
#include <vector>

#include "fastaudio/errors.hpp"

namespace fastaudio {

// Detection scores, higher = more bona fide.
struct ScoreSet {
  std::vector<double> bona_scores;
  std::vector<double> spoof_scores;
};

struct TdcfParams {
  double beta = 1.0;  // weight on the countermeasure miss rate
};

struct DetPoint {
  double threshold;
  double far;  // fraction of spoof scores >= threshold
  double frr;  // fraction of bona scores < threshold
};

struct EerResult {
  double eer;
  double threshold;
};

/*
   Every threshold convention here treats a score s as accepted (called bona
   fide) when s >= threshold, so FRR(thr) = #{bona < thr} / #bona and
   FAR(thr) = #{spoof >= thr} / #spoof. Both rates are step functions that
   only change when thr crosses an observed score, so one operating point per
   half-open interval between consecutive distinct scores covers everything;
   the reported threshold is the midpoint of that interval (the lowest score
   itself for the first point, +infinity for the last).
*/

// All operating points, thresholds ascending. FAR is non-increasing and FRR
// non-decreasing along the list. Throws EmptyScores if either class is empty.
std::vector<DetPoint> det_points(const ScoreSet& scores);

// Rate crossing: (FAR + FRR) / 2 at the operating point minimizing
// |FAR - FRR|, ties broken toward the smaller threshold.
EerResult compute_eer(const ScoreSet& scores);

// min over thresholds of beta * P_miss + P_fa, where P_miss = FRR and
// P_fa = FAR above. Never exceeds min(beta, 1).
double min_tdcf(const ScoreSet& scores, const TdcfParams& params);

// Score files: one `utterance_id score` line per entry.
struct ScoredUtterance {
  std::string utterance_id;
  double score;
};

std::vector<ScoredUtterance> read_score_file(const std::string& path);
void write_score_file(const std::string& path, const std::vector<ScoredUtterance>& scores);

}  // namespace fastaudio

#endif  // FASTAUDIO_METRICS_HPP_
