// test_metrics.cpp

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
#include <limits>

#include "fastaudio/metrics.hpp"
#include "fastaudio/rng.hpp"
#include "test_util.hpp"

using namespace fastaudio;

namespace {

// Brute-force sweep over a grid finer than the smallest score gap; rates are
// counted directly from the definitions.
struct BruteForce {
  double eer;
  double min_tdcf_of_beta(const ScoreSet& s, double beta) const {
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < frr.size(); ++i) best = std::min(best, beta * frr[i] + far[i]);
    return best;
  }
  std::vector<double> far, frr;
};

BruteForce brute_force(const ScoreSet& s) {
  std::vector<double> all = s.bona_scores;
  all.insert(all.end(), s.spoof_scores.begin(), s.spoof_scores.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  double gap = 1.0;
  for (size_t i = 1; i < all.size(); ++i) gap = std::min(gap, all[i] - all[i - 1]);
  const double step = gap / 3.0;

  BruteForce bf;
  double best_gap = std::numeric_limits<double>::infinity();
  bf.eer = 1.0;
  for (double thr = all.front() - gap; thr <= all.back() + gap; thr += step) {
    int miss = 0, hit = 0;
    for (double v : s.bona_scores) miss += v < thr ? 1 : 0;
    for (double v : s.spoof_scores) hit += v >= thr ? 1 : 0;
    const double frr = static_cast<double>(miss) / s.bona_scores.size();
    const double far = static_cast<double>(hit) / s.spoof_scores.size();
    bf.frr.push_back(frr);
    bf.far.push_back(far);
    if (std::abs(far - frr) < best_gap) {
      best_gap = std::abs(far - frr);
      bf.eer = (far + frr) / 2.0;
    }
  }
  return bf;
}

ScoreSet random_grid_scores(Rng& rng) {
  ScoreSet s;
  const int n_bona = 1 + static_cast<int>(rng.below(8));
  const int n_spoof = 1 + static_cast<int>(rng.below(8));
  for (int i = 0; i < n_bona; ++i) s.bona_scores.push_back(0.1 * static_cast<double>(rng.below(10)));
  for (int i = 0; i < n_spoof; ++i) s.spoof_scores.push_back(0.1 * static_cast<double>(rng.below(10)));
  return s;
}

}  // namespace

TEST_CASE("EER on the worked examples") {
  SUBCASE("perfectly separated") {
    const EerResult r = compute_eer({{0.9, 0.8}, {0.1, 0.2}});
    CHECK(r.eer == 0.0);
  }
  SUBCASE("perfectly reversed") {
    const EerResult r = compute_eer({{0.1}, {0.9}});
    CHECK(r.eer == 1.0);
  }
  SUBCASE("mixed case crosses at 0.4") {
    const EerResult r = compute_eer({{0.7, 0.3}, {0.5, 0.1}});
    CHECK(r.eer == 0.5);
    CHECK(r.threshold == doctest::Approx(0.4).epsilon(1e-12));
  }
  SUBCASE("empty class") {
    CHECK_THROWS_AS(compute_eer({{}, {0.5}}), EmptyScores);
  }
}

TEST_CASE("min t-DCF on the worked examples") {
  SUBCASE("separated scores cost nothing") {
    CHECK(min_tdcf({{0.9, 0.8}, {0.1, 0.2}}, {1.0}) == 0.0);
    CHECK(min_tdcf({{0.9, 0.8}, {0.1, 0.2}}, {7.5}) == 0.0);
  }
  SUBCASE("mixed case") {
    CHECK(min_tdcf({{0.7, 0.3}, {0.5, 0.1}}, {1.0}) == 0.5);
  }
  SUBCASE("beta zero is free") {
    CHECK(min_tdcf({{0.1, 0.2}, {0.8, 0.9}}, {0.0}) == 0.0);
  }
}

TEST_CASE("det points") {
  SUBCASE("one bona above one spoof") {
    const auto pts = det_points({{0.6}, {0.4}});
    REQUIRE(pts.size() == 3);
    CHECK(pts[1].threshold == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(pts[1].far == 0.0);
    CHECK(pts[1].frr == 0.0);
  }
  SUBCASE("duplicate scores collapse") {
    const auto pts = det_points({{0.5, 0.5, 0.5}, {0.5, 0.2}});
    // distinct values 0.2 and 0.5 plus the +inf point
    CHECK(pts.size() == 3);
  }
  SUBCASE("monotone rates on random sets") {
    Rng rng(31);
    for (int trial = 0; trial < 1000; ++trial) {
      ScoreSet s;
      const int nb = 1 + static_cast<int>(rng.below(10));
      const int ns = 1 + static_cast<int>(rng.below(10));
      for (int i = 0; i < nb; ++i) s.bona_scores.push_back(rng.uniform(-2.0, 2.0));
      for (int i = 0; i < ns; ++i) s.spoof_scores.push_back(rng.uniform(-2.0, 2.0));
      const auto pts = det_points(s);
      for (size_t i = 1; i < pts.size(); ++i) {
        CHECK(pts[i].threshold > pts[i - 1].threshold);
        CHECK(pts[i].far <= pts[i - 1].far);
        CHECK(pts[i].frr >= pts[i - 1].frr);
      }
      CHECK(pts.front().far == 1.0);
      CHECK(pts.front().frr == 0.0);
      CHECK(pts.back().far == 0.0);
      CHECK(pts.back().frr == 1.0);
    }
  }
}

TEST_CASE("metrics match the brute-force sweep exactly") {
  Rng rng(47);
  for (int trial = 0; trial < 300; ++trial) {
    const ScoreSet s = random_grid_scores(rng);
    const BruteForce bf = brute_force(s);
    CHECK(compute_eer(s).eer == bf.eer);
    for (double beta : {0.0, 0.5, 1.0, 2.0}) {
      const double got = min_tdcf(s, {beta});
      CHECK(got == bf.min_tdcf_of_beta(s, beta));
      CHECK(got <= std::min(beta, 1.0));
    }
  }
}

TEST_CASE("EER is invariant under strictly increasing transforms") {
  Rng rng(53);
  const auto transforms = std::vector<double (*)(double)>{
      [](double x) { return 2.0 * x + 1.0; },
      [](double x) { return x * x * x; },
      [](double x) { return std::atan(x); },
  };
  for (int trial = 0; trial < 100; ++trial) {
    ScoreSet s;
    for (int i = 0; i < 6; ++i) s.bona_scores.push_back(rng.uniform(-1.0, 1.0));
    for (int i = 0; i < 9; ++i) s.spoof_scores.push_back(rng.uniform(-1.0, 1.0));
    const double base = compute_eer(s).eer;
    for (auto f : transforms) {
      ScoreSet t = s;
      for (double& v : t.bona_scores) v = f(v);
      for (double& v : t.spoof_scores) v = f(v);
      CHECK(compute_eer(t).eer == base);
    }
  }
}

TEST_CASE("EER is invariant under permutations and class-swap negation") {
  Rng rng(59);
  for (int trial = 0; trial < 50; ++trial) {
    ScoreSet s;
    for (int i = 0; i < 7; ++i) s.bona_scores.push_back(rng.uniform(-1.0, 1.0));
    for (int i = 0; i < 5; ++i) s.spoof_scores.push_back(rng.uniform(-1.0, 1.0));
    const double base = compute_eer(s).eer;
    const double tdcf = min_tdcf(s, {1.0});

    ScoreSet shuffled = s;
    std::reverse(shuffled.bona_scores.begin(), shuffled.bona_scores.end());
    std::swap(shuffled.spoof_scores.front(), shuffled.spoof_scores.back());
    CHECK(compute_eer(shuffled).eer == base);
    CHECK(min_tdcf(shuffled, {1.0}) == tdcf);

    ScoreSet mirrored;
    for (double v : s.spoof_scores) mirrored.bona_scores.push_back(-v);
    for (double v : s.bona_scores) mirrored.spoof_scores.push_back(-v);
    CHECK(compute_eer(mirrored).eer == base);
  }
}

TEST_CASE("score files round-trip") {
  testutil::TempDir dir("scorefile");
  std::vector<ScoredUtterance> scores = {{"utt1", 0.25}, {"utt2", -1.5e-3}};
  write_score_file(dir.file("scores.txt"), scores);
  const auto back = read_score_file(dir.file("scores.txt"));
  REQUIRE(back.size() == 2);
  CHECK(back[0].utterance_id == "utt1");
  CHECK(back[0].score == 0.25);
  CHECK(back[1].score == doctest::Approx(-1.5e-3).epsilon(1e-12));
}
