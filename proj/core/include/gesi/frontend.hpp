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

#ifndef GESI_FRONTEND_HPP_
#define GESI_FRONTEND_HPP_

#include <array>
#include <optional>
#include <vector>

#include "gesi/audio.hpp"
#include "gesi/dsp.hpp"
#include "gesi/profiles.hpp"

namespace gesi {

struct FrontendConfig {
  int n_channels = 100;
  double f_lo_hz = 100.0;
  double f_hi_hz = 8000.0;
  double frame_shift_ms = 0.5;
  /// dB SPL of a 0 dBFS-RMS digital signal. The default places an RMS of
  /// -26 dBFS at the 63 dB Leq presentation level.
  double calibration_db_spl = 89.0;
  double c_act_cap_db = 55.0;
  double l_knee_db_spl = 30.0;
  double l_catch_db_spl = 100.0;
  double envelope_lp_hz = 150.0;
  /// When set, replaces the ISO-shaped absolute-threshold curve with a
  /// flat threshold at this SPL.
  std::optional<double> flat_threshold_db_spl;
  double ep_floor_db = -100.0;

  void validate() const;
};

/// Excitation-pattern sequence: levels[channel][frame] in dB above the NH
/// absolute threshold (0 dB = AT).
struct EPgram {
  std::vector<std::vector<double>> levels;
  std::vector<double> peak_freqs_hz;
  double frame_shift_ms = 0.5;

  int channels() const { return static_cast<int>(levels.size()); }
  int frames() const { return levels.empty() ? 0 : static_cast<int>(levels[0].size()); }
};

/// Hearing loss at one frequency, split into a level-dependent active part
/// and a level-independent passive part (dB, both >= 0, summing to total).
struct HlSplit {
  double active_db = 0.0;
  double passive_db = 0.0;
};

// ERB-rate scale (Glasberg & Moore 1990).
double erb_rate_from_hz(double f_hz);
double erb_rate_to_hz(double erb_rate);
double erb_bandwidth_hz(double f_hz);

/// Channel peak frequencies, equally spaced on the ERB-rate scale.
std::vector<double> channel_frequencies(const FrontendConfig& cfg);

/// Fourth-order gammatone-shaped band-pass: four cascaded two-pole
/// resonator sections, unit gain at fc, cascade -3 dB bandwidth ~= 1 ERB.
std::array<Biquad, 4> design_channel_filter(double fc_hz, double fs_hz);

/// Cascade magnitude response of a channel filter at freq_hz.
double channel_filter_gain(double fc_hz, double fs_hz, double freq_hz);

/// Absolute threshold of hearing in dB SPL (Terhardt-style approximation),
/// or the configured flat override.
double absolute_threshold_db_spl(double f_hz, const FrontendConfig& cfg);

HlSplit split_hl(double hl_total_db, double alpha, double c_act_cap_db = 55.0);

/// Attenuation applied at a given input band level: passive loss plus the
/// active loss scaled by a ramp that is 1 below l_knee, 0 above l_catch
/// (loudness catch-up) and linear in between.
double io_loss(double level_db_spl, const HlSplit& split,
               double l_knee_db_spl = 30.0, double l_catch_db_spl = 100.0);

EPgram analyze_epgram(const MonoSignal& signal, const ListenerProfile& profile,
                      const FrontendConfig& cfg = FrontendConfig{});

}  // namespace gesi

#endif  // GESI_FRONTEND_HPP_
