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

#ifndef GESI_STATS_HPP_
#define GESI_STATS_HPP_

#include <utility>
#include <vector>

namespace gesi {

/// Root-mean-square error between predicted and subjective scores (%).
double rmse(const std::vector<double>& predicted, const std::vector<double>& subjective);

struct PearsonResult {
  double r = 0.0;
  double p_two_sided = 1.0;
};

/// Sample Pearson correlation with a two-sided p-value from the exact tail
/// of the t-distribution (regularized incomplete beta, continued fraction).
PearsonResult pearson(const std::vector<double>& x, const std::vector<double>& y);

/// Spearman rank correlation (average ranks on ties).
double spearman(const std::vector<double>& x, const std::vector<double>& y);

/// Regularized incomplete beta function I_x(a, b).
double regularized_incomplete_beta(double a, double b, double x);

/// Two-sided p-value of a t statistic with nu degrees of freedom.
double t_test_p_two_sided(double t, double nu);

struct MeanCi {
  double mean = 0.0;
  double half_width = 0.0;  // 1.96 * standard error
};

MeanCi mean_ci95(const std::vector<double>& values);

}  // namespace gesi

#endif  // GESI_STATS_HPP_
