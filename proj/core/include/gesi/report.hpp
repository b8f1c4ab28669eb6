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

#ifndef GESI_REPORT_HPP_
#define GESI_REPORT_HPP_

#include <string>

#include "gesi/batch.hpp"

namespace gesi {

/// CSV tables for an evaluation report (curves, per-listener and
/// per-condition RMSE).
std::string evaluation_report_csv(const EvaluationReport& report);

/// SI-vs-SNR curves, one polyline per condition, 95% CI error bars where a
/// point aggregates two or more records. Vector graphics (SVG).
std::string si_curves_svg(const EvaluationReport& report);

/// RMSE bar chart per listener.
std::string rmse_bars_svg(const EvaluationReport& report);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace gesi

#endif  // GESI_REPORT_HPP_
