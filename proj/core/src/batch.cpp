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

#include "gesi/batch.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "gesi/audio.hpp"
#include "gesi/errors.hpp"

namespace gesi {

std::vector<PredictionRow> batch_predict(
    const Manifest& manifest, const std::map<std::string, ListenerProfile>& profiles,
    const BatchParams& params) {
  const size_t n = manifest.records.size();
  std::vector<PredictionRow> rows(n);
  for (size_t i = 0; i < n; ++i) rows[i].record = manifest.records[i];
  if (n == 0) return rows;

  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= n) return;
      PredictionRow& row = rows[i];
      try {
        ListenerProfile profile;
        auto it = profiles.find(row.record.listener_id);
        if (it != profiles.end()) {
          profile = it->second;
        } else if (row.record.listener_id == "NH" || row.record.listener_id.empty()) {
          profile = ListenerProfile::normal_hearing();
        } else {
          throw DataError("unknown listener id: " + row.record.listener_id);
        }
        const MonoSignal ref = read_wav(row.record.reference_path);
        const MonoSignal test = read_wav(row.record.test_path);
        row.prediction = predict(ref, test, profile, params.prediction);
        row.prediction.reference_id = row.record.reference_path;
        row.prediction.test_id = row.record.test_path;
        row.ok = true;
      } catch (const std::exception& e) {
        row.ok = false;
        row.error = e.what();
      }
    }
  };

  const int n_workers = std::max(1, std::min<int>(params.workers, static_cast<int>(n)));
  std::vector<std::thread> pool;
  for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return rows;
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace

std::string prediction_table_csv(const std::vector<PredictionRow>& rows) {
  std::ostringstream out;
  out << "ref,test,condition,snr_db,listener,subjective_si,status,d,intelligibility,"
         "a,b,i_max,rho,eta,h_max,n_channels,m_bands,mode,global_lag_samples,"
         "max_channel_lag_frames,n_audible,zero_denominators,error\n";
  for (const auto& row : rows) {
    const auto& r = row.record;
    const auto& p = row.prediction;
    out << r.reference_path << ',' << r.test_path << ',' << r.condition << ','
        << fmt(r.snr_db) << ',' << r.listener_id << ','
        << (r.subjective_si_percent ? fmt(*r.subjective_si_percent) : std::string()) << ','
        << (row.ok ? "ok" : "error") << ',';
    if (row.ok) {
      out << fmt(p.d) << ',' << fmt(p.intelligibility_percent) << ',' << fmt(p.sigmoid.a)
          << ',' << fmt(p.sigmoid.b) << ',' << fmt(p.sigmoid.i_max) << ',' << fmt(p.rho)
          << ',' << fmt(p.eta) << ',' << fmt(p.h_max) << ',' << p.n_channels << ','
          << p.n_bands << ',' << to_string(p.mode) << ',' << p.global_lag_samples << ','
          << p.max_abs_channel_lag_frames << ',' << p.n_audible << ','
          << p.zero_denominator_count << ',';
    } else {
      out << ",,,,,,,,,,,,,,,";
    }
    std::string err = row.error;
    std::replace(err.begin(), err.end(), ',', ';');
    out << err << '\n';
  }
  return out.str();
}

std::vector<PredictionRow> parse_prediction_table_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> header;
  std::vector<PredictionRow> rows;

  auto split = [](const std::string& s) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : s) {
      if (c == ',') {
        fields.push_back(cur);
        cur.clear();
      } else if (c != '\r') {
        cur.push_back(c);
      }
    }
    fields.push_back(cur);
    return fields;
  };

  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto fields = split(line);
    if (header.empty()) {
      header = std::move(fields);
      continue;
    }
    std::map<std::string, std::string> row;
    for (size_t i = 0; i < header.size() && i < fields.size(); ++i) {
      row[header[i]] = fields[i];
    }
    PredictionRow pr;
    pr.record.reference_path = row["ref"];
    pr.record.test_path = row["test"];
    pr.record.condition = row["condition"];
    pr.record.listener_id = row["listener"];
    try {
      if (!row["snr_db"].empty()) pr.record.snr_db = std::stod(row["snr_db"]);
      if (!row["subjective_si"].empty()) {
        pr.record.subjective_si_percent = std::stod(row["subjective_si"]);
      }
      pr.ok = row["status"] == "ok";
      if (pr.ok) {
        pr.prediction.d = std::stod(row["d"]);
        pr.prediction.intelligibility_percent = std::stod(row["intelligibility"]);
        pr.prediction.sigmoid.a = std::stod(row["a"]);
        pr.prediction.sigmoid.b = std::stod(row["b"]);
        pr.prediction.sigmoid.i_max = std::stod(row["i_max"]);
      } else {
        pr.error = row["error"];
      }
    } catch (const std::exception&) {
      throw DataError("prediction table: malformed row: " + line);
    }
    rows.push_back(std::move(pr));
  }
  return rows;
}

EvaluationReport fit_and_evaluate(const std::vector<PredictionRow>& train,
                                  const std::vector<PredictionRow>& eval,
                                  double i_max) {
  std::vector<std::pair<double, double>> pairs;
  for (const auto& row : train) {
    if (row.ok && row.record.subjective_si_percent) {
      pairs.emplace_back(row.prediction.d, *row.record.subjective_si_percent);
    }
  }
  EvaluationReport report;
  report.fitted = fit_sigmoid(pairs, i_max);

  std::map<std::string, std::vector<std::pair<double, double>>> by_listener, by_condition;
  std::map<std::pair<std::string, double>, std::vector<std::pair<double, double>>> by_point;
  std::vector<double> pred_all, subj_all;

  for (const auto& row : eval) {
    if (!row.ok) continue;
    const double predicted = sigmoid(row.prediction.d, report.fitted);
    const double subjective = row.record.subjective_si_percent.value_or(
        std::numeric_limits<double>::quiet_NaN());
    auto& pt = by_point[{row.record.condition, row.record.snr_db}];
    pt.emplace_back(predicted, subjective);
    if (row.record.subjective_si_percent) {
      by_listener[row.record.listener_id].emplace_back(predicted, subjective);
      by_condition[row.record.condition].emplace_back(predicted, subjective);
      pred_all.push_back(predicted);
      subj_all.push_back(subjective);
    }
  }

  auto rmse_of = [](const std::vector<std::pair<double, double>>& ps) {
    std::vector<double> p, s;
    for (const auto& [a, b] : ps) {
      p.push_back(a);
      s.push_back(b);
    }
    return rmse(p, s);
  };

  for (const auto& [listener, ps] : by_listener) {
    report.rmse_per_listener.emplace_back(listener, rmse_of(ps));
  }
  for (const auto& [condition, ps] : by_condition) {
    report.rmse_per_condition.emplace_back(condition, rmse_of(ps));
  }
  if (!pred_all.empty()) {
    report.overall_rmse = rmse(pred_all, subj_all);
    if (pred_all.size() >= 3) {
      try {
        report.pearson_pred_vs_subjective = pearson(pred_all, subj_all);
        report.have_pearson = true;
      } catch (const NumericError&) {
        report.have_pearson = false;
      }
    }
  }

  for (const auto& [key, ps] : by_point) {
    ConditionCurvePoint pt;
    pt.condition = key.first;
    pt.snr_db = key.second;
    pt.count = static_cast<int>(ps.size());
    std::vector<double> preds;
    double subj_sum = 0.0;
    int subj_n = 0;
    for (const auto& [p, s] : ps) {
      preds.push_back(p);
      if (std::isfinite(s)) {
        subj_sum += s;
        ++subj_n;
      }
    }
    pt.predicted_ci = mean_ci95(preds);
    pt.mean_predicted = pt.predicted_ci.mean;
    pt.mean_subjective = subj_n > 0 ? subj_sum / subj_n : 0.0;
    report.curves.push_back(std::move(pt));
  }
  return report;
}

SubsampleSummary subsample_evaluate(const std::vector<PredictionRow>& rows,
                                    int k_listeners, int repeats, uint64_t seed,
                                    double i_max) {
  std::set<std::string> listener_set;
  for (const auto& row : rows) {
    if (row.ok && row.record.subjective_si_percent) {
      listener_set.insert(row.record.listener_id);
    }
  }
  std::vector<std::string> listeners(listener_set.begin(), listener_set.end());
  if (static_cast<int>(listeners.size()) <= k_listeners) {
    throw DataError("subsample_evaluate: need more listeners than the sample size");
  }

  std::mt19937_64 rng(seed);
  SubsampleSummary out;
  for (int rep = 0; rep < repeats; ++rep) {
    std::vector<std::string> shuffled = listeners;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    std::set<std::string> train_ids(shuffled.begin(), shuffled.begin() + k_listeners);

    std::vector<PredictionRow> train, eval;
    for (const auto& row : rows) {
      if (!row.ok || !row.record.subjective_si_percent) continue;
      (train_ids.count(row.record.listener_id) ? train : eval).push_back(row);
    }
    const EvaluationReport rep_report = fit_and_evaluate(train, eval, i_max);
    out.per_repeat_rmse.push_back(rep_report.overall_rmse);
  }

  double sum = 0.0;
  for (double v : out.per_repeat_rmse) sum += v;
  out.mean_rmse = sum / out.per_repeat_rmse.size();
  double var = 0.0;
  for (double v : out.per_repeat_rmse) var += (v - out.mean_rmse) * (v - out.mean_rmse);
  out.stddev_rmse = out.per_repeat_rmse.size() > 1
                        ? std::sqrt(var / (out.per_repeat_rmse.size() - 1))
                        : 0.0;
  return out;
}

}  // namespace gesi
