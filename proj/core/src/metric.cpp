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

#include "gesi/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "gesi/errors.hpp"

namespace gesi {

F0Track estimate_f0(const MonoSignal& reference, double frame_shift_ms,
                    const F0Config& cfg) {
  if (reference.samples.empty()) throw DataError("estimate_f0: empty reference");
  const double fs = reference.rate_hz;
  const size_t n = reference.samples.size();

  const int win = std::max(2, static_cast<int>(std::lround(cfg.window_ms * fs / 1000.0)));
  const int hop = std::max(1, static_cast<int>(std::lround(cfg.hop_ms * fs / 1000.0)));
  const int lag_min = std::max(1, static_cast<int>(std::floor(fs / cfg.f_max_hz)));
  const int lag_max = static_cast<int>(std::ceil(fs / cfg.f_min_hz));

  std::vector<double> coarse;
  for (size_t start = 0; start < n; start += hop) {
    const size_t end = std::min(start + win, n);
    const int len = static_cast<int>(end - start);
    double f0 = 0.0;  // 0 marks unvoiced for now
    if (len > 2 * lag_min) {
      const double* x = reference.samples.data() + start;
      double m = 0.0;
      for (int k = 0; k < len; ++k) m += x[k];
      m /= len;
      double r0 = 0.0;
      for (int k = 0; k < len; ++k) r0 += (x[k] - m) * (x[k] - m);

      if (r0 > 1e-12) {
        const int hi = std::min(lag_max, len - 1);
        int best_lag = 0;
        double best = -1.0;
        std::vector<double> r(hi + 1, 0.0);
        for (int lag = lag_min; lag <= hi; ++lag) {
          double acc = 0.0;
          for (int k = 0; k + lag < len; ++k) acc += (x[k] - m) * (x[k + lag] - m);
          r[lag] = acc / r0;
          if (r[lag] > best) {
            best = r[lag];
            best_lag = lag;
          }
        }
        if (best_lag > 0 && best > cfg.voicing_threshold) {
          // Parabolic refinement around the peak.
          double lag = best_lag;
          if (best_lag > lag_min && best_lag < hi) {
            const double y0 = r[best_lag - 1], y1 = r[best_lag], y2 = r[best_lag + 1];
            const double denom = y0 - 2.0 * y1 + y2;
            if (std::abs(denom) > 1e-12) lag += 0.5 * (y0 - y2) / denom;
          }
          f0 = fs / lag;
        }
      }
    }
    coarse.push_back(f0);
  }

  F0Track track;
  const int ep_hop = std::max(1, static_cast<int>(std::lround(fs * frame_shift_ms / 1000.0)));
  const int frames = 1 + static_cast<int>((n - 1) / ep_hop);
  track.f0_hz.resize(frames);
  for (int t = 0; t < frames; ++t) {
    const size_t sample = static_cast<size_t>(t) * ep_hop;
    size_t ci = std::min(sample / hop, coarse.size() - 1);
    track.f0_hz[t] = coarse[ci] > 0.0 ? coarse[ci] : track.epsilon_hz;
  }
  return track;
}

WeightSet WeightSet::unit(int channels, int frames) {
  WeightSet w;
  w.ssi.assign(channels, std::vector<double>(frames, 1.0));
  w.eff.assign(channels, 1.0);
  w.n_audible = channels;
  return w;
}

std::vector<std::vector<double>> ssi_weight(const F0Track& f0,
                                            const std::vector<double>& peak_freqs_hz,
                                            double h_max) {
  if (!(h_max > 0.0)) throw DataError("ssi_weight: h_max must be > 0");
  const int n = static_cast<int>(peak_freqs_hz.size());
  const int frames = static_cast<int>(f0.f0_hz.size());
  std::vector<std::vector<double>> w(n, std::vector<double>(frames));
  for (int t = 0; t < frames; ++t) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const double raw = std::min(peak_freqs_hz[i] / (h_max * f0.f0_hz[t]), 1.0);
      w[i][t] = raw;
      sum += raw;
    }
    for (int i = 0; i < n; ++i) w[i][t] /= sum;
  }
  return w;
}

EfficiencyWeights efficiency_weight(const EPgram& ep_test, double eta) {
  if (eta < 0.0) throw DataError("efficiency_weight: eta must be >= 0");
  const int n = ep_test.channels();
  const int frames = ep_test.frames();
  EfficiencyWeights out;
  out.weights.assign(n, 0.0);

  std::vector<bool> audible(n, false);
  for (int i = 0; i < n; ++i) {
    double mean = 0.0;
    for (int t = 0; t < frames; ++t) mean += ep_test.levels[i][t];
    mean /= frames;
    if (mean > 0.0) {
      audible[i] = true;
      ++out.n_audible;
    }
  }
  if (out.n_audible == 0) {
    out.inaudible = true;
    return out;
  }
  const double w = std::pow(static_cast<double>(n) / out.n_audible, eta);
  for (int i = 0; i < n; ++i) {
    if (audible[i]) out.weights[i] = w;
  }
  return out;
}

std::string to_string(NormalizationMode mode) {
  return mode == NormalizationMode::kLiteral ? "literal" : "channel_sum";
}

NormalizationMode normalization_mode_from_string(const std::string& name) {
  if (name == "literal") return NormalizationMode::kLiteral;
  if (name == "channel_sum") return NormalizationMode::kChannelSum;
  throw DataError("unknown normalization mode: " + name);
}

SimilarityResult similarity(const ModulationEnvelopes& m_ref,
                            const ModulationEnvelopes& m_test,
                            const WeightSet& weights, double rho) {
  if (m_ref.channels() != m_test.channels() || m_ref.bands() != m_test.bands() ||
      m_ref.frames() != m_test.frames()) {
    throw DataError("similarity: envelope shape mismatch");
  }
  if (!(rho >= 0.0 && rho <= 1.0)) throw DataError("similarity: rho outside [0, 1]");

  const int n = m_ref.channels();
  const int m = m_ref.bands();
  const int frames = m_ref.frames();

  SimilarityResult result;
  result.rho = rho;
  result.s.assign(n, std::vector<double>(m, 0.0));

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      const auto& mr = m_ref.values[i][j];
      const auto& mt = m_test.values[i][j];
      double num = 0.0, er = 0.0, et = 0.0;
      for (int t = 0; t < frames; ++t) {
        num += weights.combined(i, t) * mr[t] * mt[t];
        er += mr[t] * mr[t];
        et += mt[t] * mt[t];
      }
      if (er <= 0.0 || et <= 0.0) {
        ++result.zero_denominator_count;
        continue;
      }
      result.s[i][j] = num / (std::pow(er, rho) * std::pow(et, 1.0 - rho));
    }
  }
  return result;
}

double metric_d(const std::vector<std::vector<double>>& s,
                const std::vector<double>& band_weights, NormalizationMode mode) {
  const int n = static_cast<int>(s.size());
  if (n == 0) throw DataError("metric_d: empty similarity matrix");
  const int m = static_cast<int>(s[0].size());
  if (static_cast<int>(band_weights.size()) != m) {
    throw DataError("metric_d: band weight count mismatch");
  }

  double acc = 0.0;
  for (int j = 0; j < m; ++j) {
    double col = 0.0;
    for (int i = 0; i < n; ++i) col += s[i][j];
    acc += band_weights[j] * col;
  }
  return mode == NormalizationMode::kLiteral ? acc / (static_cast<double>(m) * n)
                                             : acc / m;
}

double sigmoid(double d, const SigmoidParams& params) {
  const double x = std::clamp(params.a * d + params.b, -500.0, 500.0);
  return params.i_max / (1.0 + std::exp(x));
}

namespace {

double fit_residual(const std::vector<std::pair<double, double>>& pairs,
                    double a, double b, double i_max) {
  double acc = 0.0;
  for (const auto& [d, si] : pairs) {
    const double r = sigmoid(d, {a, b, i_max}) - si;
    acc += r * r;
  }
  return acc;
}

}  // namespace

SigmoidParams fit_sigmoid(const std::vector<std::pair<double, double>>& d_si_pairs,
                          double i_max) {
  if (!(i_max > 0.0 && i_max <= 100.0)) throw DataError("fit_sigmoid: i_max outside (0, 100]");
  std::set<double> distinct;
  std::set<double> distinct_si;
  for (const auto& [d, si] : d_si_pairs) {
    distinct.insert(d);
    distinct_si.insert(si);
  }
  if (distinct.size() < 2) {
    throw DataError("fit_sigmoid: need at least 2 pairs with distinct d");
  }
  if (distinct_si.size() < 2) {
    throw DataError("fit_sigmoid: degenerate fit, all SI values identical");
  }

  // Coarse grid over a generous search box.
  double best_a = 0.0, best_b = 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (int ia = 0; ia <= 140; ++ia) {
    const double a = -300.0 + ia * 2.5;  // [-300, 50]
    for (int ib = 0; ib <= 110; ++ib) {
      const double b = -30.0 + ib * 1.0;  // [-30, 80]
      const double r = fit_residual(d_si_pairs, a, b, i_max);
      if (r < best) {
        best = r;
        best_a = a;
        best_b = b;
      }
    }
  }

  // Damped Gauss-Newton refinement.
  double a = best_a, b = best_b;
  double lambda = 1e-3;
  double res = fit_residual(d_si_pairs, a, b, i_max);
  for (int iter = 0; iter < 200; ++iter) {
    double jtj00 = 0.0, jtj01 = 0.0, jtj11 = 0.0, jtr0 = 0.0, jtr1 = 0.0;
    for (const auto& [d, si] : d_si_pairs) {
      const double pred = sigmoid(d, {a, b, i_max});
      const double r = pred - si;
      const double dIdb = -pred * (1.0 - pred / i_max);
      const double dIda = dIdb * d;
      jtj00 += dIda * dIda;
      jtj01 += dIda * dIdb;
      jtj11 += dIdb * dIdb;
      jtr0 += dIda * r;
      jtr1 += dIdb * r;
    }
    const double m00 = jtj00 + lambda * (1.0 + jtj00);
    const double m11 = jtj11 + lambda * (1.0 + jtj11);
    const double det = m00 * m11 - jtj01 * jtj01;
    if (std::abs(det) < 1e-30) break;
    const double da = (-jtr0 * m11 + jtr1 * jtj01) / det;
    const double db = (-jtr1 * m00 + jtr0 * jtj01) / det;

    const double trial = fit_residual(d_si_pairs, a + da, b + db, i_max);
    if (trial <= res) {
      a += da;
      b += db;
      res = trial;
      lambda = std::max(lambda * 0.3, 1e-12);
      if (std::abs(da) + std::abs(db) < 1e-10) break;
    } else {
      lambda *= 10.0;
      if (lambda > 1e12) break;
    }
  }

  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw NumericError("fit_sigmoid: non-finite parameters");
  }
  return SigmoidParams{a, b, i_max};
}

PredictionRecord predict(const MonoSignal& reference, const MonoSignal& test,
                         const ListenerProfile& profile,
                         const PredictionParams& params) {
  const AlignedPair aligned = global_align(reference, test);

  const ListenerProfile nh = ListenerProfile::normal_hearing();
  const EPgram ep_ref = analyze_epgram(aligned.reference, nh, params.frontend);
  const EPgram ep_test_raw = analyze_epgram(aligned.test, profile, params.frontend);
  auto [ep_test, align_report] = channel_align(ep_ref, ep_test_raw, params.t_ma_ms);

  WeightSet weights;
  if (params.unit_weights) {
    weights = WeightSet::unit(ep_ref.channels(), ep_ref.frames());
  } else {
    const F0Track f0 = estimate_f0(aligned.reference, params.frontend.frame_shift_ms);
    weights.ssi = ssi_weight(f0, ep_ref.peak_freqs_hz, params.h_max);
    const EfficiencyWeights eff = efficiency_weight(ep_test, params.eta);
    weights.eff = eff.weights;
    weights.n_audible = eff.n_audible;
    weights.inaudible = eff.inaudible;
    weights.h_max = params.h_max;
    weights.eta = params.eta;
  }

  TmtfGains gains;
  if (params.tmtf_gains_enabled) {
    gains = tmtf_gains(params.mfb, nh_reference_tmtf(), profile.tmtf);
  } else {
    gains.reference.assign(params.mfb.bands(), 1.0);
    gains.test.assign(params.mfb.bands(), 1.0);
  }
  const ModulationEnvelopes m_ref = mod_envelopes(ep_ref, gains.reference, params.mfb);
  const ModulationEnvelopes m_test = mod_envelopes(ep_test, gains.test, params.mfb);

  PredictionRecord rec;
  rec.sigmoid = params.sigmoid;
  rec.rho = params.rho;
  rec.eta = params.eta;
  rec.h_max = params.h_max;
  rec.n_channels = ep_ref.channels();
  rec.n_bands = params.mfb.bands();
  rec.mode = params.mode;
  rec.global_lag_samples = aligned.lag_samples;
  for (int lag : align_report.channel_lags_frames) {
    rec.max_abs_channel_lag_frames = std::max(rec.max_abs_channel_lag_frames, std::abs(lag));
  }
  rec.n_audible = weights.n_audible;
  rec.inaudible = weights.inaudible;

  if (weights.inaudible) {
    rec.d = 0.0;
  } else {
    const SimilarityResult sim = similarity(m_ref, m_test, weights, params.rho);
    rec.zero_denominator_count = sim.zero_denominator_count;
    const std::vector<double> band_weights(params.mfb.bands(), 1.0);
    rec.d = metric_d(sim.s, band_weights, params.mode);
  }
  rec.intelligibility_percent = sigmoid(rec.d, params.sigmoid);
  return rec;
}

}  // namespace gesi
