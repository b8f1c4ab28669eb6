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

#include "gesi/frontend.hpp"

#include <algorithm>
#include <cmath>

#include "gesi/errors.hpp"

namespace gesi {

namespace {
constexpr double kPi = 3.14159265358979323846;
// Cascade of four identical resonators reaches -3 dB where each section is
// at -0.75 dB; this converts the per-section bandwidth to the cascade's.
const double kSectionBwFactor = 1.0 / std::sqrt(std::pow(2.0, 0.25) - 1.0);
// Half-wave rectified tone has DC A/pi; scale so the envelope reads RMS.
const double kEnvToRms = kPi / std::sqrt(2.0);
}  // namespace

void FrontendConfig::validate() const {
  if (n_channels < 4) throw DataError("frontend: n_channels must be >= 4");
  if (!(f_lo_hz > 0.0 && f_lo_hz < f_hi_hz)) throw DataError("frontend: need 0 < f_lo < f_hi");
  if (!(frame_shift_ms > 0.0)) throw DataError("frontend: frame_shift_ms must be > 0");
}

double erb_rate_from_hz(double f_hz) {
  return 21.4 * std::log10(0.00437 * f_hz + 1.0);
}

double erb_rate_to_hz(double erb_rate) {
  return (std::pow(10.0, erb_rate / 21.4) - 1.0) / 0.00437;
}

double erb_bandwidth_hz(double f_hz) {
  return 24.7 * (0.00437 * f_hz + 1.0);
}

std::vector<double> channel_frequencies(const FrontendConfig& cfg) {
  cfg.validate();
  const double e_lo = erb_rate_from_hz(cfg.f_lo_hz);
  const double e_hi = erb_rate_from_hz(cfg.f_hi_hz);
  std::vector<double> freqs(cfg.n_channels);
  for (int i = 0; i < cfg.n_channels; ++i) {
    const double e = e_lo + (e_hi - e_lo) * i / (cfg.n_channels - 1);
    freqs[i] = erb_rate_to_hz(e);
  }
  return freqs;
}

std::array<Biquad, 4> design_channel_filter(double fc_hz, double fs_hz) {
  // Keep the resonance safely below Nyquist; at fc == fs/2 the numerator
  // zero at z = -1 cancels the resonance and the unit-gain normalization
  // is ill-conditioned.
  const double fc = std::min(fc_hz, 0.47 * fs_hz);
  const double bw = erb_bandwidth_hz(fc) * kSectionBwFactor;
  Biquad section = Biquad::resonator(fc, bw, fs_hz);
  return {section, section, section, section};
}

double channel_filter_gain(double fc_hz, double fs_hz, double freq_hz) {
  const auto sections = design_channel_filter(fc_hz, fs_hz);
  const double w = 2.0 * kPi * freq_hz / fs_hz;
  double g = 1.0;
  for (const auto& s : sections) g *= std::abs(s.response(w));
  return g;
}

double absolute_threshold_db_spl(double f_hz, const FrontendConfig& cfg) {
  if (cfg.flat_threshold_db_spl) return *cfg.flat_threshold_db_spl;
  const double khz = f_hz / 1000.0;
  return 3.64 * std::pow(khz, -0.8) -
         6.5 * std::exp(-0.6 * (khz - 3.3) * (khz - 3.3)) +
         1e-3 * std::pow(khz, 4.0);
}

HlSplit split_hl(double hl_total_db, double alpha, double c_act_cap_db) {
  if (hl_total_db < 0.0) throw DataError("split_hl: negative total hearing loss");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DataError("split_hl: alpha outside [0, 1]");
  HlSplit split;
  split.active_db = (1.0 - alpha) * std::min(hl_total_db, c_act_cap_db);
  split.passive_db = hl_total_db - split.active_db;
  return split;
}

double io_loss(double level_db_spl, const HlSplit& split,
               double l_knee_db_spl, double l_catch_db_spl) {
  double ramp;
  if (level_db_spl <= l_knee_db_spl) {
    ramp = 1.0;
  } else if (level_db_spl >= l_catch_db_spl) {
    ramp = 0.0;
  } else {
    ramp = (l_catch_db_spl - level_db_spl) / (l_catch_db_spl - l_knee_db_spl);
  }
  return split.passive_db + split.active_db * ramp;
}

EPgram analyze_epgram(const MonoSignal& signal, const ListenerProfile& profile,
                      const FrontendConfig& cfg) {
  cfg.validate();
  profile.validate();
  if (signal.samples.empty()) throw DataError("analyze_epgram: empty signal");
  if (signal.rate_hz < 16000.0) {
    throw DataError("analyze_epgram: sample rate must be >= 16 kHz");
  }
  const double fs = signal.rate_hz;
  const int hop = std::max(1, static_cast<int>(std::lround(fs * cfg.frame_shift_ms / 1000.0)));
  const size_t n = signal.samples.size();
  const int frames = 1 + static_cast<int>((n - 1) / hop);
  if (frames < 1) throw DataError("analyze_epgram: signal shorter than one frame");

  EPgram ep;
  ep.frame_shift_ms = cfg.frame_shift_ms;
  ep.peak_freqs_hz = channel_frequencies(cfg);
  ep.levels.assign(cfg.n_channels, std::vector<double>(frames));

  std::vector<double> band(n), env(n);
  for (int i = 0; i < cfg.n_channels; ++i) {
    const double fc = ep.peak_freqs_hz[i];
    auto sections = design_channel_filter(fc, fs);
    for (size_t k = 0; k < n; ++k) {
      double x = signal.samples[k];
      for (auto& s : sections) x = s.process(x);
      band[k] = x;
    }

    Biquad env_lp = Biquad::lowpass(cfg.envelope_lp_hz, 1.0 / std::sqrt(2.0), fs);
    for (size_t k = 0; k < n; ++k) {
      env[k] = env_lp.process(band[k] > 0.0 ? band[k] : 0.0);
    }

    const double hl_total = interpolate_hl(profile.audiogram, fc);
    const HlSplit split = split_hl(std::max(hl_total, 0.0), profile.alpha, cfg.c_act_cap_db);
    const double at = absolute_threshold_db_spl(fc, cfg);

    for (int t = 0; t < frames; ++t) {
      const double e = std::max(env[static_cast<size_t>(t) * hop], 0.0);
      const double level = 20.0 * std::log10(std::max(e * kEnvToRms, 1e-10)) +
                           cfg.calibration_db_spl;
      const double loss = io_loss(level, split, cfg.l_knee_db_spl, cfg.l_catch_db_spl);
      ep.levels[i][t] = std::max(level - loss - at, cfg.ep_floor_db);
    }
  }
  return ep;
}

}  // namespace gesi
