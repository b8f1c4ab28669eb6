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

#include "gesi/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "gesi/errors.hpp"

namespace gesi {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// Plot geometry shared by both charts.
constexpr double kW = 640.0, kH = 420.0;
constexpr double kL = 70.0, kR = 30.0, kT = 30.0, kB = 60.0;

double map_x(double v, double lo, double hi) {
  return kL + (v - lo) / (hi - lo) * (kW - kL - kR);
}
double map_y(double v, double lo, double hi) {
  return kH - kB - (v - lo) / (hi - lo) * (kH - kT - kB);
}

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                         "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

}  // namespace

std::string evaluation_report_csv(const EvaluationReport& report) {
  std::ostringstream out;
  out << "table,key,snr_db,value,ci_half_width,count\n";
  out << "fit,a,," << fmt(report.fitted.a) << ",,\n";
  out << "fit,b,," << fmt(report.fitted.b) << ",,\n";
  out << "fit,i_max,," << fmt(report.fitted.i_max) << ",,\n";
  out << "rmse,overall,," << fmt(report.overall_rmse) << ",,\n";
  for (const auto& [listener, v] : report.rmse_per_listener) {
    out << "rmse_listener," << listener << ",," << fmt(v) << ",,\n";
  }
  for (const auto& [condition, v] : report.rmse_per_condition) {
    out << "rmse_condition," << condition << ",," << fmt(v) << ",,\n";
  }
  for (const auto& pt : report.curves) {
    out << "curve," << pt.condition << ',' << fmt(pt.snr_db) << ','
        << fmt(pt.mean_predicted) << ',' << fmt(pt.predicted_ci.half_width) << ','
        << pt.count << '\n';
  }
  if (report.have_pearson) {
    out << "pearson,r,," << fmt(report.pearson_pred_vs_subjective.r) << ",,\n";
    out << "pearson,p,," << fmt(report.pearson_pred_vs_subjective.p_two_sided) << ",,\n";
  }
  return out.str();
}

std::string si_curves_svg(const EvaluationReport& report) {
  if (report.curves.empty()) throw DataError("si_curves_svg: no curve points");

  double snr_lo = 1e30, snr_hi = -1e30;
  for (const auto& pt : report.curves) {
    snr_lo = std::min(snr_lo, pt.snr_db);
    snr_hi = std::max(snr_hi, pt.snr_db);
  }
  if (snr_lo == snr_hi) {
    snr_lo -= 1.0;
    snr_hi += 1.0;
  }
  const double y_lo = 0.0, y_hi = 100.0;

  std::map<std::string, std::vector<const ConditionCurvePoint*>> by_condition;
  for (const auto& pt : report.curves) by_condition[pt.condition].push_back(&pt);
  for (auto& [cond, pts] : by_condition) {
    std::sort(pts.begin(), pts.end(), [](const auto* a, const auto* b) {
      return a->snr_db < b->snr_db;
    });
  }

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\""
    << kH << "\" viewBox=\"0 0 " << kW << ' ' << kH << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<line x1=\"" << kL << "\" y1=\"" << kH - kB << "\" x2=\"" << kW - kR
    << "\" y2=\"" << kH - kB << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << kL << "\" y1=\"" << kT << "\" x2=\"" << kL << "\" y2=\""
    << kH - kB << "\" stroke=\"black\"/>\n";
  for (int y = 0; y <= 100; y += 20) {
    const double py = map_y(y, y_lo, y_hi);
    s << "<text x=\"" << kL - 8 << "\" y=\"" << py + 4
      << "\" text-anchor=\"end\" font-size=\"12\">" << y << "</text>\n";
  }
  s << "<text x=\"" << (kL + kW - kR) / 2 << "\" y=\"" << kH - 15
    << "\" text-anchor=\"middle\" font-size=\"13\">SNR (dB)</text>\n";
  s << "<text x=\"18\" y=\"" << (kT + kH - kB) / 2
    << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
    << (kT + kH - kB) / 2 << ")\">SI (%)</text>\n";

  int ci = 0;
  double legend_y = kT + 6.0;
  for (const auto& [cond, pts] : by_condition) {
    const char* color = kColors[ci % 8];
    std::ostringstream poly;
    for (const auto* pt : pts) {
      const double px = map_x(pt->snr_db, snr_lo, snr_hi);
      const double py = map_y(pt->mean_predicted, y_lo, y_hi);
      poly << px << ',' << py << ' ';
      s << "<circle cx=\"" << px << "\" cy=\"" << py << "\" r=\"3.5\" fill=\""
        << color << "\"/>\n";
      if (pt->count >= 2 && pt->predicted_ci.half_width > 0.0) {
        const double y0 = map_y(pt->mean_predicted - pt->predicted_ci.half_width, y_lo, y_hi);
        const double y1 = map_y(pt->mean_predicted + pt->predicted_ci.half_width, y_lo, y_hi);
        s << "<line x1=\"" << px << "\" y1=\"" << y0 << "\" x2=\"" << px << "\" y2=\""
          << y1 << "\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
      }
      s << "<text x=\"" << px << "\" y=\"" << kH - kB + 18
        << "\" text-anchor=\"middle\" font-size=\"12\">" << fmt(pt->snr_db)
        << "</text>\n";
    }
    s << "<polyline points=\"" << poly.str() << "\" fill=\"none\" stroke=\"" << color
      << "\" stroke-width=\"1.8\"/>\n";
    s << "<rect x=\"" << kW - kR - 140 << "\" y=\"" << legend_y
      << "\" width=\"12\" height=\"12\" fill=\"" << color << "\"/>\n";
    s << "<text x=\"" << kW - kR - 124 << "\" y=\"" << legend_y + 10
      << "\" font-size=\"12\">" << cond << "</text>\n";
    legend_y += 18.0;
    ++ci;
  }
  s << "</svg>\n";
  return s.str();
}

std::string rmse_bars_svg(const EvaluationReport& report) {
  if (report.rmse_per_listener.empty()) throw DataError("rmse_bars_svg: no listeners");
  double v_hi = 0.0;
  for (const auto& [_, v] : report.rmse_per_listener) v_hi = std::max(v_hi, v);
  v_hi = std::max(v_hi * 1.2, 1.0);

  const size_t n = report.rmse_per_listener.size();
  const double slot = (kW - kL - kR) / n;
  const double bar_w = slot * 0.6;

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\""
    << kH << "\" viewBox=\"0 0 " << kW << ' ' << kH << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<line x1=\"" << kL << "\" y1=\"" << kH - kB << "\" x2=\"" << kW - kR
    << "\" y2=\"" << kH - kB << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << kL << "\" y1=\"" << kT << "\" x2=\"" << kL << "\" y2=\""
    << kH - kB << "\" stroke=\"black\"/>\n";
  s << "<text x=\"18\" y=\"" << (kT + kH - kB) / 2
    << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
    << (kT + kH - kB) / 2 << ")\">RMSE (%)</text>\n";

  for (size_t i = 0; i < n; ++i) {
    const auto& [listener, v] = report.rmse_per_listener[i];
    const double x = kL + slot * i + (slot - bar_w) / 2.0;
    const double y = map_y(v, 0.0, v_hi);
    s << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << bar_w
      << "\" height=\"" << (kH - kB - y) << "\" fill=\"#1f77b4\"/>\n";
    s << "<text x=\"" << x + bar_w / 2 << "\" y=\"" << kH - kB + 16
      << "\" text-anchor=\"middle\" font-size=\"11\">" << listener << "</text>\n";
    s << "<text x=\"" << x + bar_w / 2 << "\" y=\"" << y - 4
      << "\" text-anchor=\"middle\" font-size=\"11\">" << fmt(v) << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  out << content;
}

}  // namespace gesi
