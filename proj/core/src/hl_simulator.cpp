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

#include "gesi/hl_simulator.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "gesi/dsp.hpp"
#include "gesi/errors.hpp"

namespace gesi {

GainTrajectory gain_trajectory(const EPgram& ep_nh, const EPgram& ep_hl,
                               double smooth_ms) {
  if (ep_nh.channels() != ep_hl.channels() || ep_nh.frames() != ep_hl.frames()) {
    throw DataError("gain_trajectory: EPgram shape mismatch");
  }
  GainTrajectory traj;
  traj.frame_shift_ms = ep_nh.frame_shift_ms;
  traj.smooth_ms = smooth_ms;
  const int n = ep_nh.channels();
  const int frames = ep_nh.frames();
  traj.gains_db.assign(n, std::vector<double>(frames));

  const double frame_rate = 1000.0 / ep_nh.frame_shift_ms;
  // One-pole smoothing with the given time constant, run both directions
  // so the gain track stays phase-aligned with the excitation.
  const double a = smooth_ms > 0.0
                       ? std::exp(-1.0 / (frame_rate * smooth_ms / 1000.0))
                       : 0.0;
  for (int i = 0; i < n; ++i) {
    auto& g = traj.gains_db[i];
    for (int t = 0; t < frames; ++t) g[t] = ep_hl.levels[i][t] - ep_nh.levels[i][t];
    if (a > 0.0) {
      double state = g[0];
      for (int t = 0; t < frames; ++t) state = g[t] = a * state + (1.0 - a) * g[t];
      state = g[frames - 1];
      for (int t = frames - 1; t >= 0; --t) state = g[t] = a * state + (1.0 - a) * g[t];
    }
  }
  return traj;
}

namespace {

// Zero-phase band filtering: forward pass, then reverse pass with fresh state.
std::vector<double> filtfilt_channel(const std::vector<double>& x, double fc_hz,
                                     double fs_hz) {
  auto sections = design_channel_filter(fc_hz, fs_hz);
  std::vector<double> y(x.size());
  for (size_t k = 0; k < x.size(); ++k) {
    double v = x[k];
    for (auto& s : sections) v = s.process(v);
    y[k] = v;
  }
  for (auto& s : sections) s.reset();
  for (size_t k = y.size(); k-- > 0;) {
    double v = y[k];
    for (auto& s : sections) v = s.process(v);
    y[k] = v;
  }
  return y;
}

}  // namespace

MonoSignal synthesize_hl(const MonoSignal& signal, const ListenerProfile& profile,
                         const HlSimConfig& cfg) {
  if (signal.samples.empty()) throw DataError("synthesize_hl: empty signal");
  const double fs = signal.rate_hz;
  const size_t n = signal.samples.size();
  const size_t pad = 4096;

  const ListenerProfile nh = ListenerProfile::normal_hearing();
  const EPgram ep_nh = analyze_epgram(signal, nh, cfg.frontend);
  const EPgram ep_hl = analyze_epgram(signal, profile, cfg.frontend);
  const GainTrajectory traj = gain_trajectory(ep_nh, ep_hl, cfg.smooth_ms);

  const int hop = std::max(1, static_cast<int>(std::lround(fs * cfg.frontend.frame_shift_ms / 1000.0)));
  const int frames = ep_nh.frames();

  std::vector<double> padded(n + 2 * pad, 0.0);
  std::copy(signal.samples.begin(), signal.samples.end(), padded.begin() + pad);

  std::vector<double> sum(padded.size(), 0.0);
  for (int i = 0; i < ep_nh.channels(); ++i) {
    const std::vector<double> band = filtfilt_channel(padded, ep_nh.peak_freqs_hz[i], fs);
    const auto& g = traj.gains_db[i];
    for (size_t k = 0; k < padded.size(); ++k) {
      // Linear interpolation of the frame-rate gain track at sample k.
      const double pos = (static_cast<double>(k) - pad) / hop;
      double gain_db;
      if (pos <= 0.0) {
        gain_db = g[0];
      } else if (pos >= frames - 1) {
        gain_db = g[frames - 1];
      } else {
        const int t0 = static_cast<int>(pos);
        const double frac = pos - t0;
        gain_db = g[t0] + frac * (g[t0 + 1] - g[t0]);
      }
      sum[k] += band[k] * std::pow(10.0, gain_db / 20.0);
    }
  }

  // Equalize the composite filterbank response so a zero-gain pass is an
  // identity inside the channel range.
  const size_t fft_n = next_pow2(sum.size());
  std::vector<std::complex<double>> spec(fft_n);
  for (size_t k = 0; k < sum.size(); ++k) spec[k] = sum[k];
  fft(spec, false);

  std::vector<double> total(fft_n / 2 + 1);
  double t_max = 0.0;
  for (size_t b = 0; b <= fft_n / 2; ++b) {
    const double f = static_cast<double>(b) * fs / fft_n;
    double acc = 0.0;
    for (double fc : ep_nh.peak_freqs_hz) {
      const double g1 = channel_filter_gain(fc, fs, f);
      acc += g1 * g1;  // forward-backward response per channel is |H|^2
    }
    total[b] = acc;
    t_max = std::max(t_max, acc);
  }
  const double floor_t = t_max * 1e-3;
  for (size_t b = 0; b < fft_n; ++b) {
    const size_t bb = b <= fft_n / 2 ? b : fft_n - b;
    spec[b] *= (total[bb] > floor_t) ? 1.0 / total[bb] : 0.0;
  }
  fft(spec, true);

  MonoSignal out;
  out.rate_hz = fs;
  out.samples.resize(n);
  for (size_t k = 0; k < n; ++k) out.samples[k] = spec[k + pad].real();
  return out;
}

}  // namespace gesi
