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

#include "gesi/stimulus.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>

#include "gesi/dsp.hpp"
#include "gesi/errors.hpp"

namespace gesi {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void StftConfig::validate() const {
  if (!(window_ms > 0.0 && hop_ms > 0.0 && hop_ms < window_ms)) {
    throw DataError("stft: need 0 < hop < window");
  }
}

MonoSignal apply_rir(const MonoSignal& signal, const MonoSignal& rir) {
  if (signal.samples.empty() || rir.samples.empty()) {
    throw DataError("apply_rir: empty input");
  }
  if (signal.rate_hz != rir.rate_hz) {
    throw DataError("apply_rir: sample-rate mismatch");
  }
  MonoSignal out;
  out.rate_hz = signal.rate_hz;
  out.samples = convolve(signal.samples, rir.samples);
  return out;
}

SnrMix mix_at_snr(const MonoSignal& speech, const MonoSignal& noise, double snr_db) {
  if (speech.samples.empty() || noise.samples.empty()) {
    throw DataError("mix_at_snr: empty input");
  }
  const double speech_rms = rms(speech.samples);
  if (speech_rms <= 0.0) throw DataError("mix_at_snr: zero-energy speech");

  SnrMix out;
  out.scaled_noise.rate_hz = noise.rate_hz;
  out.scaled_noise.samples.resize(speech.samples.size());
  for (size_t i = 0; i < speech.samples.size(); ++i) {
    out.scaled_noise.samples[i] = noise.samples[i % noise.samples.size()];
  }
  const double noise_rms = rms(out.scaled_noise.samples);
  if (noise_rms <= 0.0) throw DataError("mix_at_snr: zero-energy noise");

  const double scale = speech_rms / (noise_rms * std::pow(10.0, snr_db / 20.0));
  for (auto& v : out.scaled_noise.samples) v *= scale;

  out.mixture.rate_hz = speech.rate_hz;
  out.mixture.samples.resize(speech.samples.size());
  for (size_t i = 0; i < speech.samples.size(); ++i) {
    out.mixture.samples[i] = speech.samples[i] + out.scaled_noise.samples[i];
  }
  return out;
}

namespace {

struct StftPlan {
  int win = 0;
  int hop = 0;
  int fft_size = 0;
  int pad = 0;
  int n_frames = 0;
  std::vector<double> window;
};

StftPlan make_plan(const StftConfig& cfg, double fs, size_t n) {
  cfg.validate();
  StftPlan p;
  p.win = std::max(4, static_cast<int>(std::lround(cfg.window_ms * fs / 1000.0)));
  p.hop = std::max(1, static_cast<int>(std::lround(cfg.hop_ms * fs / 1000.0)));
  p.fft_size = static_cast<int>(next_pow2(p.win));
  p.pad = p.win;
  p.window.resize(p.win);
  for (int k = 0; k < p.win; ++k) {
    p.window[k] = 0.5 - 0.5 * std::cos(2.0 * kPi * k / p.win);  // periodic Hann
  }
  const size_t padded = n + 2 * p.pad;
  p.n_frames = static_cast<int>((padded + p.hop - 1) / p.hop);
  return p;
}

using SpecFn = std::function<void(int frame, std::vector<std::complex<double>>& bins)>;

std::vector<std::vector<std::complex<double>>> analyze(const StftPlan& p,
                                                       const std::vector<double>& x) {
  std::vector<std::vector<std::complex<double>>> frames(p.n_frames);
  for (int m = 0; m < p.n_frames; ++m) {
    std::vector<std::complex<double>> buf(p.fft_size, 0.0);
    const long start = static_cast<long>(m) * p.hop - p.pad;
    for (int k = 0; k < p.win; ++k) {
      const long idx = start + k;
      const double v = (idx >= 0 && idx < static_cast<long>(x.size())) ? x[idx] : 0.0;
      buf[k] = v * p.window[k];
    }
    fft(buf, false);
    frames[m] = std::move(buf);
  }
  return frames;
}

std::vector<double> synthesize(const StftPlan& p,
                               std::vector<std::vector<std::complex<double>>>& frames,
                               size_t n) {
  std::vector<double> acc(n, 0.0), norm(n, 0.0);
  for (int m = 0; m < p.n_frames; ++m) {
    fft(frames[m], true);
    const long start = static_cast<long>(m) * p.hop - p.pad;
    for (int k = 0; k < p.win; ++k) {
      const long idx = start + k;
      if (idx < 0 || idx >= static_cast<long>(n)) continue;
      acc[idx] += frames[m][k].real() * p.window[k];
      norm[idx] += p.window[k] * p.window[k];
    }
  }
  for (size_t i = 0; i < n; ++i) {
    if (norm[i] > 1e-12) acc[i] /= norm[i];
  }
  return acc;
}

}  // namespace

MonoSignal stft_roundtrip(const MonoSignal& signal, const StftConfig& stft) {
  if (signal.samples.empty()) throw DataError("stft_roundtrip: empty input");
  const StftPlan p = make_plan(stft, signal.rate_hz, signal.samples.size());
  auto frames = analyze(p, signal.samples);
  MonoSignal out;
  out.rate_hz = signal.rate_hz;
  out.samples = synthesize(p, frames, signal.samples.size());
  return out;
}

MonoSignal ideal_ratio_mask(const MonoSignal& clean, const MonoSignal& noise,
                            const StftConfig& stft, double exponent) {
  if (clean.samples.empty()) throw DataError("ideal_ratio_mask: empty clean signal");
  const size_t n = clean.samples.size();
  std::vector<double> noise_fit(n);
  for (size_t i = 0; i < n; ++i) {
    noise_fit[i] = noise.samples.empty() ? 0.0 : noise.samples[i % noise.samples.size()];
  }
  std::vector<double> mixture(n);
  for (size_t i = 0; i < n; ++i) mixture[i] = clean.samples[i] + noise_fit[i];

  const StftPlan p = make_plan(stft, clean.rate_hz, n);
  const auto spec_s = analyze(p, clean.samples);
  const auto spec_n = analyze(p, noise_fit);
  auto spec_m = analyze(p, mixture);

  for (int m = 0; m < p.n_frames; ++m) {
    for (int b = 0; b < p.fft_size; ++b) {
      const double es = std::norm(spec_s[m][b]);
      const double en = std::norm(spec_n[m][b]);
      const double mask = (es + en) > 0.0 ? std::pow(es / (es + en), exponent) : 0.0;
      spec_m[m][b] *= mask;
    }
  }

  MonoSignal out;
  out.rate_hz = clean.rate_hz;
  out.samples = synthesize(p, spec_m, n);
  return out;
}

}  // namespace gesi
