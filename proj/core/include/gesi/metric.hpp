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

#ifndef GESI_METRIC_HPP_
#define GESI_METRIC_HPP_

#include <string>
#include <utility>
#include <vector>

#include "gesi/alignment.hpp"
#include "gesi/audio.hpp"
#include "gesi/frontend.hpp"
#include "gesi/modulation.hpp"
#include "gesi/profiles.hpp"

namespace gesi {

/// Per-frame fundamental frequency of the reference speech, at the EPgram
/// frame rate. Unvoiced frames carry epsilon_hz so the SSI weight
/// degenerates to uniform there.
struct F0Track {
  std::vector<double> f0_hz;
  double epsilon_hz = 1e-4;
};

struct F0Config {
  double f_min_hz = 70.0;
  double f_max_hz = 400.0;
  double window_ms = 40.0;
  double hop_ms = 10.0;
  double voicing_threshold = 0.3;  // normalized autocorrelation peak
};

/// Autocorrelation F0 estimator, resampled (sample-and-hold) to the EPgram
/// frame grid of the given frame shift.
F0Track estimate_f0(const MonoSignal& reference, double frame_shift_ms = 0.5,
                    const F0Config& cfg = F0Config{});

/// Channel weights: ssi[i][t] (sums to 1 across i for every frame) times the
/// per-channel efficiency weight eff[i].
struct WeightSet {
  std::vector<std::vector<double>> ssi;  // N x T
  std::vector<double> eff;               // N
  double h_max = 5.0;
  double eta = 0.7;
  int n_audible = 0;
  bool inaudible = false;

  double combined(int channel, int frame) const {
    return ssi[channel][frame] * eff[channel];
  }
  static WeightSet unit(int channels, int frames);
};

/// SSI weight: w'_i(t) = min(f_p,i / (h_max * F0(t)), 1), normalized across
/// channels to sum 1 per frame.
std::vector<std::vector<double>> ssi_weight(const F0Track& f0,
                                            const std::vector<double>& peak_freqs_hz,
                                            double h_max = 5.0);

struct EfficiencyWeights {
  std::vector<double> weights;  // (N/N_AT)^eta on audible channels, else 0
  int n_audible = 0;
  bool inaudible = false;
};

/// Audible channels are those whose time-averaged EP exceeds 0 dB (the AT).
EfficiencyWeights efficiency_weight(const EPgram& ep_test, double eta = 0.7);

enum class NormalizationMode { kLiteral, kChannelSum };

std::string to_string(NormalizationMode mode);
NormalizationMode normalization_mode_from_string(const std::string& name);

struct SimilarityResult {
  std::vector<std::vector<double>> s;  // N x M
  double rho = 0.52;
  int zero_denominator_count = 0;
};

/// Extended cosine similarity per (channel, band):
///   S_ij = sum_t w_i(t) m_r m_t / ((sum m_r^2)^rho * (sum m_t^2)^(1-rho))
/// Zero-energy denominators yield S_ij = 0 and are counted.
SimilarityResult similarity(const ModulationEnvelopes& m_ref,
                            const ModulationEnvelopes& m_test,
                            const WeightSet& weights, double rho = 0.52);

/// Scalar metric. Literal mode averages w_j * S_ij over all (i, j);
/// channel_sum mode averages the per-band channel sums over bands only.
double metric_d(const std::vector<std::vector<double>>& s,
                const std::vector<double>& band_weights, NormalizationMode mode);

struct SigmoidParams {
  double a = -23.3;
  double b = 13.5;
  double i_max = 85.0;
};

/// I = I_max / (1 + exp(a * d + b)), overflow-safe.
double sigmoid(double d, const SigmoidParams& params);

/// Least-squares fit of (a, b) for fixed i_max: coarse grid search followed
/// by damped Gauss-Newton refinement. Deterministic.
SigmoidParams fit_sigmoid(const std::vector<std::pair<double, double>>& d_si_pairs,
                          double i_max = 85.0);

struct PredictionParams {
  FrontendConfig frontend;
  MfbConfig mfb;
  double rho = 0.52;
  double eta = 0.7;
  double h_max = 5.0;
  double t_ma_ms = 30.0;
  NormalizationMode mode = NormalizationMode::kChannelSum;
  SigmoidParams sigmoid;
  bool tmtf_gains_enabled = true;
  bool unit_weights = false;  // diagnostic: bypass SSI/efficiency weighting
};

struct PredictionRecord {
  std::string reference_id;
  std::string test_id;
  double d = 0.0;
  double intelligibility_percent = 0.0;
  SigmoidParams sigmoid;
  double rho = 0.52;
  double eta = 0.7;
  double h_max = 5.0;
  int n_channels = 0;
  int n_bands = 0;
  NormalizationMode mode = NormalizationMode::kChannelSum;
  long global_lag_samples = 0;
  int max_abs_channel_lag_frames = 0;
  int n_audible = 0;
  int zero_denominator_count = 0;
  bool inaudible = false;
};

/// Full pipeline: align -> EPgrams -> channel align -> MFB -> weights ->
/// similarity -> d -> I.
PredictionRecord predict(const MonoSignal& reference, const MonoSignal& test,
                         const ListenerProfile& profile,
                         const PredictionParams& params = PredictionParams{});

}  // namespace gesi

#endif  // GESI_METRIC_HPP_
