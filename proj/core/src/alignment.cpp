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

#include "gesi/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gesi/dsp.hpp"
#include "gesi/errors.hpp"

namespace gesi {

AlignedPair global_align(const MonoSignal& reference, const MonoSignal& test) {
  if (reference.samples.empty() || test.samples.empty()) {
    throw DataError("global_align: empty signal");
  }
  if (reference.rate_hz != test.rate_hz) {
    throw DataError("global_align: sample-rate mismatch");
  }
  const auto corr = cross_correlate(reference.samples, test.samples);
  const long ref_len = static_cast<long>(reference.samples.size());
  const long test_len = static_cast<long>(test.samples.size());

  long best_lag = 0;
  double best = -1.0;
  for (size_t i = 0; i < corr.size(); ++i) {
    const long lag = static_cast<long>(i) - (ref_len - 1);
    const double v = std::abs(corr[i]);
    if (v > best || (v == best && std::labs(lag) < std::labs(best_lag))) {
      best = v;
      best_lag = lag;
    }
  }

  // Positive lag: test is delayed, drop its leading samples.
  AlignedPair out;
  out.lag_samples = best_lag;
  const long ref_start = best_lag < 0 ? -best_lag : 0;
  const long test_start = best_lag > 0 ? best_lag : 0;
  const long overlap = std::min(ref_len - ref_start, test_len - test_start);
  if (overlap <= 0) throw DataError("global_align: no overlap after alignment");

  out.reference.rate_hz = reference.rate_hz;
  out.test.rate_hz = test.rate_hz;
  out.reference.samples.assign(reference.samples.begin() + ref_start,
                               reference.samples.begin() + ref_start + overlap);
  out.test.samples.assign(test.samples.begin() + test_start,
                          test.samples.begin() + test_start + overlap);
  return out;
}

namespace {

// Normalized correlation of the trajectories at the given frame lag (test
// advanced by `lag` frames against the reference). Means and energies are
// taken over the overlapping frames only so partial overlaps and level
// offsets do not bias the search toward zero lag.
double lag_correlation(const std::vector<double>& ref, const std::vector<double>& test,
                       int lag) {
  const int n = static_cast<int>(ref.size());
  const int t0 = std::max(0, -lag);
  const int t1 = std::min(n, n - lag);
  const int count = t1 - t0;
  if (count < 2) return -1.0;

  double rm = 0.0, tm = 0.0;
  for (int t = t0; t < t1; ++t) {
    rm += ref[t];
    tm += test[t + lag];
  }
  rm /= count;
  tm /= count;

  double acc = 0.0, rr = 0.0, tt = 0.0;
  for (int t = t0; t < t1; ++t) {
    const double dr = ref[t] - rm;
    const double dt = test[t + lag] - tm;
    acc += dr * dt;
    rr += dr * dr;
    tt += dt * dt;
  }
  const double denom = std::sqrt(rr * tt);
  return denom > 0.0 ? acc / denom : 0.0;
}

}  // namespace

std::pair<EPgram, AlignmentReport> channel_align(const EPgram& ep_ref,
                                                 const EPgram& ep_test,
                                                 double t_ma_ms) {
  if (ep_ref.channels() != ep_test.channels() || ep_ref.frames() != ep_test.frames() ||
      ep_ref.frame_shift_ms != ep_test.frame_shift_ms) {
    throw DataError("channel_align: EPgram shape or frame-shift mismatch");
  }
  const int max_lag = static_cast<int>(std::floor(t_ma_ms / ep_ref.frame_shift_ms));
  const int frames = ep_ref.frames();

  EPgram aligned = ep_test;
  AlignmentReport report;
  report.t_ma_ms = t_ma_ms;
  report.channel_lags_frames.resize(ep_ref.channels(), 0);

  for (int i = 0; i < ep_ref.channels(); ++i) {
    const auto& ref_tr = ep_ref.levels[i];
    const auto& test_tr = ep_test.levels[i];

    // Scan lags in order of increasing |lag| so ties favor less correction.
    int best_lag = 0;
    double best = lag_correlation(ref_tr, test_tr, 0);
    for (int a = 1; a <= max_lag; ++a) {
      for (int lag : {a, -a}) {
        const double v = lag_correlation(ref_tr, test_tr, lag);
        if (v > best) {
          best = v;
          best_lag = lag;
        }
      }
    }
    report.channel_lags_frames[i] = best_lag;

    auto& out_tr = aligned.levels[i];
    for (int t = 0; t < frames; ++t) {
      const int u = t + best_lag;
      out_tr[t] = (u >= 0 && u < frames) ? test_tr[u] : 0.0;
    }
  }
  return {std::move(aligned), std::move(report)};
}

}  // namespace gesi
