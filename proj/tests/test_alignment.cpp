// Copyright 2026 The GESI Toolkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gesi/alignment.hpp"
#include "gesi/errors.hpp"
#include "test_util.hpp"

using namespace gesi;
using namespace gesi::testutil;

namespace {

MonoSignal delay(const MonoSignal& s, size_t samples) {
  MonoSignal out;
  out.rate_hz = s.rate_hz;
  out.samples.assign(samples, 0.0);
  out.samples.insert(out.samples.end(), s.samples.begin(), s.samples.end());
  return out;
}

EPgram shift_epgram(const EPgram& ep, int channel, int lag) {
  EPgram out = ep;
  const int frames = static_cast<int>(ep.levels[channel].size());
  for (int t = 0; t < frames; ++t) {
    const int src = t - lag;
    out.levels[channel][t] =
        (src >= 0 && src < frames) ? ep.levels[channel][src] : 0.0;
  }
  return out;
}

}  // namespace

TEST_CASE("global_align recovers a known test delay") {
  const auto ref = word(16000.0, 0.5, 2);
  const auto test = delay(ref, 480);
  const auto pair = global_align(ref, test);
  CHECK(pair.lag_samples == 480);
  REQUIRE(pair.reference.samples.size() == pair.test.samples.size());
  REQUIRE(pair.reference.samples.size() == ref.samples.size());
  for (size_t k = 0; k < pair.reference.samples.size(); ++k) {
    CHECK(pair.test.samples[k] == doctest::Approx(ref.samples[k]).epsilon(1e-12));
  }
}

TEST_CASE("global_align: advanced test gives a negative lag") {
  const auto test = word(16000.0, 0.5, 3);
  const auto ref = delay(test, 320);
  const auto pair = global_align(ref, test);
  CHECK(pair.lag_samples == -320);
  REQUIRE(pair.reference.samples.size() == test.samples.size());
}

TEST_CASE("global_align finds polarity-inverted copies (|corr| peak)") {
  auto ref = word(16000.0, 0.5, 4);
  auto test = delay(ref, 100);
  for (auto& v : test.samples) v = -v;
  const auto pair = global_align(ref, test);
  CHECK(pair.lag_samples == 100);
}

TEST_CASE("global_align on identical signals is a zero-lag no-op") {
  const auto ref = word(16000.0, 0.3, 5);
  const auto pair = global_align(ref, ref);
  CHECK(pair.lag_samples == 0);
  CHECK(pair.reference.samples == ref.samples);
  CHECK(pair.test.samples == ref.samples);
}

TEST_CASE("global_align rejects empty or rate-mismatched inputs") {
  const auto ref = word(16000.0, 0.2, 6);
  MonoSignal empty;
  empty.rate_hz = 16000.0;
  CHECK_THROWS_AS(global_align(ref, empty), DataError);
  CHECK_THROWS_AS(global_align(empty, ref), DataError);
  MonoSignal other = ref;
  other.rate_hz = 48000.0;
  CHECK_THROWS_AS(global_align(ref, other), DataError);
}

TEST_CASE("channel_align recovers per-channel frame lags") {
  const auto ep = synthetic_epgram(8, 400, 17);
  EPgram shifted = ep;
  const int lags[8] = {0, 3, -5, 10, -20, 40, 1, -1};
  for (int i = 0; i < 8; ++i) shifted = shift_epgram(shifted, i, lags[i]);

  const auto [aligned, report] = channel_align(ep, shifted);
  REQUIRE(report.channel_lags_frames.size() == 8);
  for (int i = 0; i < 8; ++i) {
    CHECK(std::abs(report.channel_lags_frames[i] - lags[i]) <= 1);
  }
  // Interior cells of the aligned EPgram match the reference shift-free copy.
  for (int i = 0; i < 8; ++i) {
    for (int t = 60; t < 340; ++t) {
      CHECK(aligned.levels[i][t] == doctest::Approx(ep.levels[i][t]).epsilon(1e-9));
    }
  }
}

TEST_CASE("channel_align lags are clamped to the search window") {
  const auto ep = synthetic_epgram(4, 600, 23);
  EPgram shifted = ep;
  for (int i = 0; i < 4; ++i) shifted = shift_epgram(shifted, i, 90);  // 45 ms

  const auto [aligned, report] = channel_align(ep, shifted, 30.0);
  const int max_lag = static_cast<int>(std::lround(30.0 / ep.frame_shift_ms));
  for (int lag : report.channel_lags_frames) {
    CHECK(std::abs(lag) <= max_lag);
  }
}

TEST_CASE("channel_align on identical EPgrams is idempotent with zero lags") {
  const auto ep = synthetic_epgram(6, 300, 31);
  const auto [aligned, report] = channel_align(ep, ep);
  for (int lag : report.channel_lags_frames) CHECK(lag == 0);
  for (int i = 0; i < ep.channels(); ++i) {
    CHECK(aligned.levels[i] == ep.levels[i]);
  }
}

TEST_CASE("channel_align property: random lags within the window, 50 trials") {
  std::mt19937_64 rng(41);
  const int max_lag = 60;
  std::uniform_int_distribution<int> lag_dist(-max_lag + 5, max_lag - 5);
  int exact = 0, total = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto ep = synthetic_epgram(5, 500, 1000 + trial);
    EPgram shifted = ep;
    std::vector<int> lags(5);
    for (int i = 0; i < 5; ++i) {
      lags[i] = lag_dist(rng);
      shifted = shift_epgram(shifted, i, lags[i]);
    }
    const auto [aligned, report] = channel_align(ep, shifted);
    for (int i = 0; i < 5; ++i) {
      ++total;
      if (report.channel_lags_frames[i] == lags[i]) ++exact;
      CHECK(std::abs(report.channel_lags_frames[i] - lags[i]) <= 1);
    }
  }
  // Smooth trajectories should be recovered exactly nearly always.
  CHECK(exact >= total * 95 / 100);
}

TEST_CASE("channel_align rejects shape mismatches") {
  const auto a = synthetic_epgram(4, 100, 1);
  const auto b = synthetic_epgram(5, 100, 1);
  CHECK_THROWS_AS(channel_align(a, b), DataError);
}
