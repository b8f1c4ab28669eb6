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

// End-to-end acceptance checks. Each criterion prints one [PASS]/[FAIL]
// line; the exit code is the number of failed criteria.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <numeric>
#include <random>
#include <vector>

#include "gesi/batch.hpp"
#include "gesi/dsp.hpp"
#include "gesi/hl_simulator.hpp"
#include "gesi/metric.hpp"
#include "gesi/modulation.hpp"
#include "gesi/stats.hpp"
#include "gesi/stimulus.hpp"
#include "test_util.hpp"

using namespace gesi;
using namespace gesi::testutil;

namespace {

int g_failures = 0;

void report(int index, const char* name, bool ok, const std::string& detail = "") {
  std::printf("[%s] %2d. %s%s%s\n", ok ? "PASS" : "FAIL", index, name,
              detail.empty() ? "" : ": ", detail.c_str());
  if (!ok) ++g_failures;
}

ModulationEnvelopes random_envelopes(int channels, int bands, int frames,
                                     std::mt19937_64& rng) {
  ModulationEnvelopes m;
  m.values.assign(channels, std::vector<std::vector<double>>(
                                bands, std::vector<double>(frames)));
  std::normal_distribution<double> dist(0.0, 1.0);
  for (auto& ch : m.values) {
    for (auto& band : ch) {
      for (auto& v : band) v = dist(rng);
    }
  }
  return m;
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

double steady_rms_db(const MonoSignal& s) {
  const size_t t0 = s.samples.size() / 4, t1 = 3 * s.samples.size() / 4;
  std::vector<double> mid(s.samples.begin() + t0, s.samples.begin() + t1);
  return rms_db(mid);
}

// Noise with the long-term spectrum of the probe word: randomized phases of
// its zero-padded FFT.
MonoSignal speech_shaped_noise(const MonoSignal& speech, uint64_t seed) {
  const size_t n = next_pow2(speech.samples.size());
  std::vector<std::complex<double>> spec(n);
  for (size_t k = 0; k < speech.samples.size(); ++k) spec[k] = speech.samples[k];
  fft(spec, false);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  for (size_t k = 1; k < n / 2; ++k) {
    const double mag = std::abs(spec[k]);
    const double ph = phase(rng);
    spec[k] = std::polar(mag, ph);
    spec[n - k] = std::conj(spec[k]);
  }
  spec[0] = 0.0;
  spec[n / 2] = std::abs(spec[n / 2]);
  fft(spec, true);
  MonoSignal out;
  out.rate_hz = speech.rate_hz;
  out.samples.resize(speech.samples.size());
  for (size_t k = 0; k < out.samples.size(); ++k) out.samples[k] = spec[k].real();
  return out;
}

char buffer[256];

std::string fmt(const char* pattern, double a, double b = 0.0) {
  std::snprintf(buffer, sizeof(buffer), pattern, a, b);
  return buffer;
}

void criterion_1_identity_pipeline() {
  const auto ref = word(48000.0, 1.0, 11);
  PredictionParams params;  // N = 100, M = 6 defaults
  params.unit_weights = true;
  params.mode = NormalizationMode::kLiteral;

  const auto start = std::chrono::steady_clock::now();
  const auto rec_lit = predict(ref, ref, ListenerProfile::normal_hearing(), params);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  params.mode = NormalizationMode::kChannelSum;
  const auto rec_cs = predict(ref, ref, ListenerProfile::normal_hearing(), params);

  // All S_ij = 1 makes literal d exactly 1 and channel_sum d exactly N.
  const bool ok = rec_lit.zero_denominator_count == 0 &&
                  std::abs(rec_lit.d - 1.0) < 1e-6 &&
                  std::abs(rec_cs.d - rec_cs.n_channels) < 1e-6 * rec_cs.n_channels &&
                  seconds < 5.0;
  report(1, "identity pipeline: S_ij = 1, d at mode maximum, runtime", ok,
         fmt("d_literal=%.9f, runtime=%.2fs", rec_lit.d, seconds));
}

void criterion_2_tmtf_constants() {
  MfbConfig cfg;
  cfg.center_freqs_hz = {1.0, 51.0};
  const Tmtf nh = nh_reference_tmtf();
  const auto g = tmtf_gains(cfg, nh, nh);
  const bool ok = g.reference[0] == 1.0 && g.test[0] == 1.0 &&
                  std::abs(g.reference[1] - 1.0 / std::sqrt(2.0)) < 1e-9 &&
                  std::abs(g.test[1] - 1.0 / std::sqrt(2.0)) < 1e-9;
  report(2, "TMTF gains: A(Fc) = 1/sqrt(2) within 1e-9, A_1 = 1 exactly", ok);
}

void criterion_3_sigmoid_midpoint() {
  const SigmoidParams p;  // a=-23.3, b=13.5, i_max=85
  const double d_mid = 13.5 / 23.3;
  bool ok = std::abs(sigmoid(d_mid, p) - 42.5) < 1e-9;
  // a*d + b = 0 gives the midpoint for arbitrary parameters too.
  const SigmoidParams q{-10.0, 4.0, 85.0};
  ok = ok && std::abs(sigmoid(0.4, q) - 42.5) < 1e-9;
  report(3, "sigmoid midpoint: I = 42.5 at a*d + b = 0 and d = 13.5/23.3", ok,
         fmt("I(13.5/23.3)=%.12f", sigmoid(d_mid, p)));
}

void criterion_4_gain_exponent_law() {
  std::mt19937_64 rng(44);
  std::uniform_real_distribution<double> gain_dist(0.2, 5.0);
  std::uniform_real_distribution<double> rho_dist(0.1, 0.9);
  bool ok = true;
  double worst = 0.0;
  for (int trial = 0; trial < 1000 && ok; ++trial) {
    const auto m = random_envelopes(1, 1, 32, rng);
    const double g = gain_dist(rng);
    const double rho = rho_dist(rng);
    ModulationEnvelopes scaled = m;
    for (auto& v : scaled.values[0][0]) v *= g;
    const auto w = WeightSet::unit(1, 32);
    const double s_base = similarity(m, m, w, rho).s[0][0];
    const double s_scaled = similarity(m, scaled, w, rho).s[0][0];
    const double err =
        std::abs(s_scaled / s_base - std::pow(g, 2.0 * rho - 1.0));
    worst = std::max(worst, err);
    if (err >= 1e-9) ok = false;

    // Exact gain invariance at rho = 0.5.
    const double s_half = similarity(m, scaled, w, 0.5).s[0][0];
    const double s_half_base = similarity(m, m, w, 0.5).s[0][0];
    if (std::abs(s_half - s_half_base) >= 1e-12) ok = false;
  }
  report(4, "gain-exponent law g^(2*rho-1) on 1000 pairs, invariance at rho=0.5",
         ok, fmt("max deviation %.3g", worst));
}

void criterion_5_alignment() {
  std::mt19937_64 rng(55);
  const int max_lag = 60;  // 30 ms at 0.5 ms frames
  std::uniform_int_distribution<int> lag_dist(-max_lag, max_lag);
  int recovered = 0, total = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto ep = synthetic_epgram(1, 500, 7000 + trial);
    const int lag = lag_dist(rng);
    const auto shifted = shift_epgram(ep, 0, lag);
    const auto [aligned, rep] = channel_align(ep, shifted);
    ++total;
    if (std::abs(rep.channel_lags_frames[0] - lag) <= 1) ++recovered;
  }

  // Shifts beyond the window are clamped to it.
  bool clamped = true;
  for (int trial = 0; trial < 5; ++trial) {
    const auto ep = synthetic_epgram(1, 600, 8000 + trial);
    const auto shifted = shift_epgram(ep, 0, 90);
    const auto [aligned, rep] = channel_align(ep, shifted);
    if (std::abs(rep.channel_lags_frames[0]) > max_lag) clamped = false;
  }
  report(5, "alignment: lags <= 30 ms recovered within 1 frame, larger clamped",
         recovered == total && clamped, fmt("%g/%g trials", recovered, total));
}

void criterion_6_hl_simulator() {
  HlSimConfig cfg;
  cfg.frontend.n_channels = 40;
  const auto sig = word(16000.0, 0.6, 66);

  bool medians_ok = true;
  double worst_median = 0.0;
  for (const auto& profile : {flat_loss_profile(40.0, 1.0), oa7_profile()}) {
    const auto simulated = synthesize_hl(sig, profile, cfg);
    const auto ep_target = analyze_epgram(sig, profile, cfg.frontend);
    const auto ep_sim =
        analyze_epgram(simulated, ListenerProfile::normal_hearing(), cfg.frontend);
    std::vector<double> errors;
    const int t0 = ep_target.frames() / 4, t1 = 3 * ep_target.frames() / 4;
    for (int i = 0; i < ep_target.channels(); ++i) {
      for (int t = t0; t < t1; ++t) {
        if (ep_target.levels[i][t] > 0.0) {
          errors.push_back(std::abs(ep_sim.levels[i][t] - ep_target.levels[i][t]));
        }
      }
    }
    std::nth_element(errors.begin(), errors.begin() + errors.size() / 2, errors.end());
    const double median = errors[errors.size() / 2];
    worst_median = std::max(worst_median, median);
    if (median > 3.0) medians_ok = false;
  }

  // Passive-only loss attenuates steady tones by the interpolated audiogram.
  bool attenuation_ok = true;
  {
    ListenerProfile oa1 = oa7_profile();
    oa1.alpha = 1.0;
    for (double freq : {1000.0, 4000.0}) {
      const auto probe = tone(freq, 16000.0, 0.4);
      const auto out = synthesize_hl(probe, oa1, cfg);
      const double drop = steady_rms_db(probe) - steady_rms_db(out);
      if (std::abs(drop - interpolate_hl(oa1.audiogram, freq)) > 2.0) {
        attenuation_ok = false;
      }
    }
  }

  // Recruitment: the softer probe loses more than the louder one.
  const auto profile = flat_loss_profile(40.0, 0.5);
  const auto soft = tone(1000.0, 16000.0, 0.4, 0.005);
  const auto loud = tone(1000.0, 16000.0, 0.4, 0.5);
  const double drop_soft =
      steady_rms_db(soft) - steady_rms_db(synthesize_hl(soft, profile, cfg));
  const double drop_loud =
      steady_rms_db(loud) - steady_rms_db(synthesize_hl(loud, profile, cfg));
  const bool recruitment_ok = drop_soft > drop_loud;

  report(6, "HL simulator: self-consistency <= 3 dB, audiogram match, recruitment",
         medians_ok && attenuation_ok && recruitment_ok,
         fmt("worst median %.2f dB, drop soft-loud %.1f dB", worst_median,
             drop_soft - drop_loud));
}

void criterion_7_snr_monotonicity() {
  const auto ref = word(16000.0, 0.4, 77);
  PredictionParams params;
  params.frontend.n_channels = 24;
  const auto nh = ListenerProfile::normal_hearing();
  const std::vector<double> snrs = {-6.0, 0.0, 6.0, 12.0};

  std::vector<double> mean_d;
  for (double snr : snrs) {
    double acc = 0.0;
    for (uint64_t seed = 0; seed < 10; ++seed) {
      const auto mix = mix_at_snr(ref, noise(16000.0, 0.4, 100 + seed), snr);
      acc += predict(ref, mix.mixture, nh, params).d;
    }
    mean_d.push_back(acc / 10.0);
  }

  bool increasing = true;
  for (size_t k = 1; k < mean_d.size(); ++k) {
    if (mean_d[k] <= mean_d[k - 1]) increasing = false;
  }
  const double rank_corr = spearman(mean_d, snrs);
  report(7, "SNR monotonicity: mean d strictly increasing, Spearman = 1.0",
         increasing && rank_corr == 1.0,
         fmt("d(-6)=%.3f, d(+12)=%.3f", mean_d.front(), mean_d.back()));
}

void criterion_8_irm() {
  const auto clean = word(16000.0, 0.6, 88);

  MonoSignal zero;
  zero.rate_hz = clean.rate_hz;
  zero.samples.assign(clean.samples.size(), 0.0);
  const auto identity = ideal_ratio_mask(clean, zero);
  std::vector<double> err(clean.samples.size());
  for (size_t k = 0; k < err.size(); ++k) {
    err[k] = identity.samples[k] - clean.samples[k];
  }
  const bool identity_ok = rms(err) < 1e-9;

  const auto ssn = speech_shaped_noise(clean, 89);
  const auto mix = mix_at_snr(clean, ssn, 0.0);
  const auto enhanced = ideal_ratio_mask(clean, mix.scaled_noise);
  auto residual_snr = [&](const MonoSignal& s) {
    std::vector<double> e(s.samples.size());
    for (size_t k = 0; k < e.size(); ++k) e[k] = s.samples[k] - clean.samples[k];
    return 20.0 * std::log10(rms(clean.samples) / (rms(e) + 1e-30));
  };
  const double gain_db = residual_snr(enhanced) - residual_snr(mix.mixture);
  report(8, "IRM: zero-noise identity at 1e-9 RMS, > 5 dB gain at 0 dB SNR",
         identity_ok && gain_db > 5.0, fmt("SNR gain %.1f dB", gain_db));
}

void criterion_9_statistics() {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> dist(0.0, 1.0);

  bool rmse_ok = true, r_ok = true;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> x(15), y(15);
    for (size_t k = 0; k < 15; ++k) {
      x[k] = 50.0 + 20.0 * dist(rng);
      y[k] = 0.5 * x[k] + 10.0 * dist(rng);
    }
    double sq = 0.0;
    for (size_t k = 0; k < 15; ++k) sq += (x[k] - y[k]) * (x[k] - y[k]);
    if (std::abs(rmse(x, y) - std::sqrt(sq / 15.0)) >= 1e-12) rmse_ok = false;

    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / 15.0;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / 15.0;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (size_t k = 0; k < 15; ++k) {
      sxy += (x[k] - mx) * (y[k] - my);
      sxx += (x[k] - mx) * (x[k] - mx);
      syy += (y[k] - my) * (y[k] - my);
    }
    if (std::abs(pearson(x, y).r - sxy / std::sqrt(sxx * syy)) >= 1e-12) r_ok = false;
  }

  // p-value vs a 1e5-resample permutation oracle.
  std::vector<double> x(15), y(15);
  for (size_t k = 0; k < 15; ++k) {
    x[k] = dist(rng);
    y[k] = 0.5 * x[k] + dist(rng);
  }
  const auto res = pearson(x, y);
  auto corr = [](const std::vector<double>& a, const std::vector<double>& b) {
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / a.size();
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / b.size();
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (size_t k = 0; k < a.size(); ++k) {
      sab += (a[k] - ma) * (b[k] - mb);
      saa += (a[k] - ma) * (a[k] - ma);
      sbb += (b[k] - mb) * (b[k] - mb);
    }
    return sab / std::sqrt(saa * sbb);
  };
  const double r_obs = std::abs(corr(x, y));
  std::vector<double> perm = y;
  int exceed = 0;
  for (int it = 0; it < 100000; ++it) {
    std::shuffle(perm.begin(), perm.end(), rng);
    if (std::abs(corr(x, perm)) >= r_obs) ++exceed;
  }
  const double p_perm = exceed / 100000.0;
  const bool p_ok = std::abs(res.p_two_sided - p_perm) < 0.02;

  // Sigmoid fit recovery and grid-beating.
  const SigmoidParams truth{-21.0, 12.0, 85.0};
  std::vector<std::pair<double, double>> clean_pairs, noisy_pairs;
  for (int k = 0; k <= 25; ++k) {
    const double d = 0.25 + 0.5 * k / 25.0;
    clean_pairs.emplace_back(d, sigmoid(d, truth));
    noisy_pairs.emplace_back(
        d, std::clamp(sigmoid(d, truth) + 4.0 * dist(rng), 0.0, 100.0));
  }
  const auto fit_clean = fit_sigmoid(clean_pairs, 85.0);
  const bool recover_ok = std::abs(fit_clean.a - truth.a) < 0.01 * std::abs(truth.a) &&
                          std::abs(fit_clean.b - truth.b) < 0.01 * std::abs(truth.b);

  auto sse = [&](const SigmoidParams& p) {
    double acc = 0.0;
    for (const auto& [d, si] : noisy_pairs) {
      const double e = sigmoid(d, p) - si;
      acc += e * e;
    }
    return acc;
  };
  const auto fit_noisy = fit_sigmoid(noisy_pairs, 85.0);
  const double fit_sse = sse(fit_noisy);
  bool beats_grid = true;
  for (int ia = 0; ia < 100 && beats_grid; ++ia) {
    for (int ib = 0; ib < 100; ++ib) {
      SigmoidParams p{-60.0 + 0.6 * ia, -10.0 + 0.4 * ib, 85.0};
      if (sse(p) < fit_sse - 1e-9) {
        beats_grid = false;
        break;
      }
    }
  }

  report(9, "statistics: brute-force, permutation-p, sigmoid fit oracles",
         rmse_ok && r_ok && p_ok && recover_ok && beats_grid,
         fmt("p=%.4f vs permutation %.4f", res.p_two_sided, p_perm));
}

void criterion_10_determinism() {
  namespace fs = std::filesystem;
  const fs::path dir =
      fs::temp_directory_path() / ("gesi_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);

  const auto ref = word(16000.0, 0.3, 110);
  const auto mix = mix_at_snr(ref, noise(16000.0, 0.3, 111), 0.0);
  const std::string ref_path = (dir / "ref.wav").string();
  const std::string deg_path = (dir / "deg.wav").string();
  write_wav(ref_path, ref);
  write_wav(deg_path, mix.mixture);

  Manifest manifest;
  for (int k = 0; k < 40; ++k) {
    ManifestRecord r;
    r.reference_path = ref_path;
    r.test_path = (k % 2 == 0) ? ref_path : deg_path;
    r.condition = (k % 2 == 0) ? "clean" : "noisy";
    r.snr_db = -6.0 + 2.0 * (k % 10);
    r.listener_id = "NH";
    r.subjective_si_percent = 30.0 + k;
    manifest.records.push_back(r);
  }

  BatchParams params;
  params.prediction.frontend.n_channels = 16;
  params.workers = 4;
  params.seed = 0;
  const std::string run1 = prediction_table_csv(batch_predict(manifest, {}, params));
  const std::string run2 = prediction_table_csv(batch_predict(manifest, {}, params));
  fs::remove_all(dir);
  report(10, "determinism: 40-row batch outputs byte-identical across runs",
         !run1.empty() && run1 == run2, fmt("%g bytes", double(run1.size())));
}

}  // namespace

int main() {
  criterion_1_identity_pipeline();
  criterion_2_tmtf_constants();
  criterion_3_sigmoid_midpoint();
  criterion_4_gain_exponent_law();
  criterion_5_alignment();
  criterion_6_hl_simulator();
  criterion_7_snr_monotonicity();
  criterion_8_irm();
  criterion_9_statistics();
  criterion_10_determinism();
  std::printf("%d of 10 criteria passed\n", 10 - g_failures);
  return g_failures;
}
