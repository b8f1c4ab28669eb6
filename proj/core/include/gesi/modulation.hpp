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

#ifndef GESI_MODULATION_HPP_
#define GESI_MODULATION_HPP_

#include <vector>

#include "gesi/frontend.hpp"
#include "gesi/profiles.hpp"

namespace gesi {

struct MfbConfig {
  /// Band 1 is a low-pass; the rest are octave-spaced band-passes.
  std::vector<double> center_freqs_hz = {1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
  double bandpass_q = 1.0;

  int bands() const { return static_cast<int>(center_freqs_hz.size()); }
  void validate(double frame_rate_hz) const;
};

/// MFB outputs m[channel][band][frame].
struct ModulationEnvelopes {
  std::vector<std::vector<std::vector<double>>> values;
  MfbConfig config;

  int channels() const { return static_cast<int>(values.size()); }
  int bands() const { return values.empty() ? 0 : static_cast<int>(values[0].size()); }
  int frames() const {
    return bands() == 0 ? 0 : static_cast<int>(values[0][0].size());
  }
};

/// Per-band peak gains from the first-order low-pass TMTF model. Band 1 is
/// pinned to (1, 1) to keep the DC modulation level. For j >= 2:
///   A_r[j] = 1 / sqrt(1 + (f_mj / Fc_nh)^2)
///   A_t[j] = 10^((Lps_nh - Lps_hl)/20) / sqrt(1 + (f_mj / Fc_hl)^2)
struct TmtfGains {
  std::vector<double> reference;
  std::vector<double> test;
};
TmtfGains tmtf_gains(const MfbConfig& cfg, const Tmtf& tmtf_nh, const Tmtf& tmtf_hl);

/// Filters each EPgram channel through the modulation filterbank; band j of
/// the output is scaled by gains[j]. Filters are causal with zero initial
/// state; the settling transient is left in the output.
ModulationEnvelopes mod_envelopes(const EPgram& ep, const std::vector<double>& gains,
                                  const MfbConfig& cfg = MfbConfig{});

/// Magnitude response of band `j` at modulation frequency f_hz (design-side,
/// excluding the TMTF gain).
double mfb_band_gain(const MfbConfig& cfg, int band, double f_hz, double frame_rate_hz);

}  // namespace gesi

#endif  // GESI_MODULATION_HPP_
