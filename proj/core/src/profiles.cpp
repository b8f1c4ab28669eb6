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

#include "gesi/profiles.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gesi/errors.hpp"

namespace gesi {

using nlohmann::json;

void Audiogram::validate() const {
  if (frequencies_hz.size() < 2) throw DataError("audiogram needs at least 2 points");
  if (frequencies_hz.size() != levels_db_hl.size()) {
    throw DataError("audiogram frequency/level count mismatch");
  }
  for (size_t i = 0; i < frequencies_hz.size(); ++i) {
    if (!(frequencies_hz[i] > 0.0)) throw DataError("audiogram frequency must be > 0");
    if (i > 0 && !(frequencies_hz[i] > frequencies_hz[i - 1])) {
      throw DataError("audiogram frequencies must be strictly ascending");
    }
    double level = levels_db_hl[i];
    if (!std::isfinite(level) || level < -20.0 || level > 120.0) {
      throw DataError("audiogram level out of range [-20, 120] dB HL");
    }
  }
}

bool Audiogram::is_flat_zero() const {
  for (double level : levels_db_hl) {
    if (level != 0.0) return false;
  }
  return true;
}

void Tmtf::validate() const {
  if (!(fc_hz > 0.0)) throw DataError("TMTF cutoff frequency must be > 0");
  if (!std::isfinite(lps_db)) throw DataError("TMTF peak sensitivity must be finite");
}

Tmtf nh_reference_tmtf() { return Tmtf{-23.2, 51.0}; }

void ListenerProfile::validate() const {
  audiogram.validate();
  tmtf.validate();
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DataError("alpha must be in [0, 1]");
}

ListenerProfile ListenerProfile::normal_hearing() {
  ListenerProfile p;
  p.name = "NH";
  p.audiogram.frequencies_hz = {125, 250, 500, 1000, 2000, 4000, 8000};
  p.audiogram.levels_db_hl = {0, 0, 0, 0, 0, 0, 0};
  p.tmtf = nh_reference_tmtf();
  p.alpha = 1.0;
  return p;
}

ListenerProfile parse_profile(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("profile JSON parse error: ") + e.what());
  }

  ListenerProfile p;
  try {
    p.name = doc.value("name", std::string("unnamed"));
    const std::string type = doc.value("type", std::string("HL"));

    const auto& ag = doc.at("audiogram");
    p.audiogram.frequencies_hz = ag.at("frequencies_hz").get<std::vector<double>>();
    p.audiogram.levels_db_hl = ag.at("levels_db_hl").get<std::vector<double>>();

    if (doc.contains("tmtf")) {
      p.tmtf.lps_db = doc["tmtf"].value("lps_db", nh_reference_tmtf().lps_db);
      p.tmtf.fc_hz = doc["tmtf"].value("fc_hz", nh_reference_tmtf().fc_hz);
    } else {
      p.tmtf = nh_reference_tmtf();
    }

    if (doc.contains("alpha")) {
      p.alpha = doc["alpha"].get<double>();
    } else {
      p.alpha = (type == "NH") ? 1.0 : 0.5;
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("profile schema violation: ") + e.what());
  }

  p.validate();
  return p;
}

ListenerProfile load_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open profile: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_profile(ss.str());
}

std::string serialize_profile(const ListenerProfile& profile) {
  json doc;
  doc["name"] = profile.name;
  doc["audiogram"]["frequencies_hz"] = profile.audiogram.frequencies_hz;
  doc["audiogram"]["levels_db_hl"] = profile.audiogram.levels_db_hl;
  doc["tmtf"]["lps_db"] = profile.tmtf.lps_db;
  doc["tmtf"]["fc_hz"] = profile.tmtf.fc_hz;
  doc["alpha"] = profile.alpha;
  return doc.dump(2);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

std::string trimmed(const std::string& s) {
  size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

}  // namespace

Manifest parse_manifest(const std::string& text) {
  Manifest m;
  std::istringstream in(text);
  std::string line;
  bool header_seen = false;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trimmed(line).empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;  // first non-comment line is the header
      continue;
    }
    auto fields = split_csv_line(line);
    if (fields.size() < 5) {
      throw DataError("manifest line " + std::to_string(line_no) +
                      ": expected ref,test,condition,snr_db,listener[,si_percent]");
    }
    ManifestRecord rec;
    rec.reference_path = trimmed(fields[0]);
    rec.test_path = trimmed(fields[1]);
    rec.condition = trimmed(fields[2]);
    rec.listener_id = trimmed(fields[4]);
    if (rec.reference_path.empty() || rec.test_path.empty()) {
      throw DataError("manifest line " + std::to_string(line_no) + ": empty path");
    }
    try {
      rec.snr_db = std::stod(fields[3]);
    } catch (...) {
      throw DataError("manifest line " + std::to_string(line_no) + ": bad SNR");
    }
    if (!std::isfinite(rec.snr_db)) {
      throw DataError("manifest line " + std::to_string(line_no) + ": non-finite SNR");
    }
    if (fields.size() > 5 && !trimmed(fields[5]).empty()) {
      double si;
      try {
        si = std::stod(fields[5]);
      } catch (...) {
        throw DataError("manifest line " + std::to_string(line_no) + ": bad SI");
      }
      if (si < 0.0 || si > 100.0) {
        throw DataError("manifest line " + std::to_string(line_no) +
                        ": SI outside [0, 100]");
      }
      rec.subjective_si_percent = si;
    }
    m.records.push_back(std::move(rec));
  }
  return m;
}

Manifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open manifest: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str());
}

double pta4(const Audiogram& audiogram) {
  audiogram.validate();
  const double required[] = {500.0, 1000.0, 2000.0, 4000.0};
  if (audiogram.frequencies_hz.front() > required[0] ||
      audiogram.frequencies_hz.back() < required[3]) {
    throw DataError("audiogram does not cover 500-4000 Hz for PTA4");
  }
  double sum = 0.0;
  for (double f : required) sum += interpolate_hl(audiogram, f);
  return sum / 4.0;
}

double interpolate_hl(const Audiogram& audiogram, double freq_hz) {
  const auto& f = audiogram.frequencies_hz;
  const auto& l = audiogram.levels_db_hl;
  if (freq_hz <= f.front()) return l.front();
  if (freq_hz >= f.back()) return l.back();
  size_t hi = 1;
  while (f[hi] < freq_hz) ++hi;
  const double x0 = std::log(f[hi - 1]);
  const double x1 = std::log(f[hi]);
  const double t = (std::log(freq_hz) - x0) / (x1 - x0);
  return l[hi - 1] + t * (l[hi] - l[hi - 1]);
}

}  // namespace gesi
