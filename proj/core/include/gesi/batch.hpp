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

#ifndef GESI_BATCH_HPP_
#define GESI_BATCH_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gesi/metric.hpp"
#include "gesi/profiles.hpp"
#include "gesi/stats.hpp"

namespace gesi {

struct BatchParams {
  PredictionParams prediction;
  int workers = 4;
  uint64_t seed = 0;
};

/// One manifest row with its prediction result. Failures are recorded per
/// row; the batch keeps going.
struct PredictionRow {
  ManifestRecord record;
  PredictionRecord prediction;
  bool ok = false;
  std::string error;
};

/// Runs the pipeline over every manifest row with a bounded worker pool.
/// Results come back in manifest order. Listener ids resolve through the
/// profile map; "NH" falls back to the built-in normal-hearing profile.
std::vector<PredictionRow> batch_predict(
    const Manifest& manifest, const std::map<std::string, ListenerProfile>& profiles,
    const BatchParams& params = BatchParams{});

/// Deterministic CSV rendering of prediction rows (stable formatting, byte
/// identical across runs for identical inputs).
std::string prediction_table_csv(const std::vector<PredictionRow>& rows);

/// Parses a table produced by prediction_table_csv (columns matched by
/// header name; unknown columns ignored).
std::vector<PredictionRow> parse_prediction_table_csv(const std::string& text);

struct ConditionCurvePoint {
  std::string condition;
  double snr_db = 0.0;
  double mean_predicted = 0.0;
  double mean_subjective = 0.0;
  MeanCi predicted_ci;
  int count = 0;
};

struct EvaluationReport {
  SigmoidParams fitted;
  double overall_rmse = 0.0;
  std::vector<std::pair<std::string, double>> rmse_per_listener;
  std::vector<std::pair<std::string, double>> rmse_per_condition;
  std::vector<ConditionCurvePoint> curves;
  bool have_pearson = false;
  PearsonResult pearson_pred_vs_subjective;
  std::string config_echo;
};

/// Fits (a, b) on the training rows' (d, subjective SI) pairs, then scores
/// the evaluation rows with the fitted sigmoid.
EvaluationReport fit_and_evaluate(const std::vector<PredictionRow>& train,
                                  const std::vector<PredictionRow>& eval,
                                  double i_max = 85.0);

struct SubsampleSummary {
  double mean_rmse = 0.0;
  double stddev_rmse = 0.0;
  std::vector<double> per_repeat_rmse;
};

/// Repeated k-of-N listener subsampling: fit on the sampled listeners,
/// evaluate on the rest.
SubsampleSummary subsample_evaluate(const std::vector<PredictionRow>& rows,
                                    int k_listeners, int repeats, uint64_t seed,
                                    double i_max = 85.0);

}  // namespace gesi

#endif  // GESI_BATCH_HPP_
