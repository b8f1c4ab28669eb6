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

#ifndef GESI_ALIGNMENT_HPP_
#define GESI_ALIGNMENT_HPP_

#include <vector>

#include "gesi/audio.hpp"
#include "gesi/frontend.hpp"

namespace gesi {

struct AlignmentReport {
  long global_lag_samples = 0;
  std::vector<int> channel_lags_frames;
  double t_ma_ms = 30.0;
};

struct AlignedPair {
  MonoSignal reference;
  MonoSignal test;
  long lag_samples = 0;
};

/// Removes the global offset between reference and test. The lag maximizing
/// |cross-correlation| is found over all lags; positive lag means the test
/// signal is delayed relative to the reference. Both signals are trimmed to
/// the overlapping region.
AlignedPair global_align(const MonoSignal& reference, const MonoSignal& test);

/// Per-channel alignment of the test EPgram onto the reference. Each test
/// channel is shifted by its peak-correlation lag (mean-removed trajectories,
/// lags limited to +/- t_ma_ms, ties broken toward the smallest |lag|).
/// Vacated frames are filled with the 0 dB AT floor.
std::pair<EPgram, AlignmentReport> channel_align(const EPgram& ep_ref,
                                                 const EPgram& ep_test,
                                                 double t_ma_ms = 30.0);

}  // namespace gesi

#endif  // GESI_ALIGNMENT_HPP_
