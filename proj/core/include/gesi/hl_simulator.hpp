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

#ifndef GESI_HL_SIMULATOR_HPP_
#define GESI_HL_SIMULATOR_HPP_

#include <vector>

#include "gesi/audio.hpp"
#include "gesi/frontend.hpp"
#include "gesi/profiles.hpp"

namespace gesi {

/// Per-channel gain (dB, typically <= 0) over EPgram frames.
struct GainTrajectory {
  std::vector<std::vector<double>> gains_db;  // N x T
  double frame_shift_ms = 0.5;
  double smooth_ms = 2.0;
};

struct HlSimConfig {
  FrontendConfig frontend;
  double smooth_ms = 2.0;
};

/// Gain reduction per cell: EPgram(HL) - EPgram(NH), low-pass smoothed
/// along time (zero phase) with the configured time constant.
GainTrajectory gain_trajectory(const EPgram& ep_nh, const EPgram& ep_hl,
                               double smooth_ms = 2.0);

/// Synthesizes audio a normal-hearing listener would perceive like the
/// target listener hears the input. Zero-phase filterbank analysis,
/// per-channel time-varying gain, summed resynthesis with a static
/// equalizer for the composite filterbank response. Output length equals
/// input length.
MonoSignal synthesize_hl(const MonoSignal& signal, const ListenerProfile& profile,
                         const HlSimConfig& cfg = HlSimConfig{});

}  // namespace gesi

#endif  // GESI_HL_SIMULATOR_HPP_
