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

#ifndef GESI_PROFILES_HPP_
#define GESI_PROFILES_HPP_

#include <optional>
#include <string>
#include <vector>

namespace gesi {

/// Pure-tone hearing levels of one (better) ear, dB HL vs frequency.
struct Audiogram {
  std::vector<double> frequencies_hz;  // strictly ascending, >= 2 points
  std::vector<double> levels_db_hl;    // finite, within [-20, 120]

  void validate() const;
  bool is_flat_zero() const;
};

/// Temporal modulation transfer function as a first-order low-pass:
/// peak sensitivity lps_db and cutoff fc_hz.
struct Tmtf {
  double lps_db = -23.2;
  double fc_hz = 51.0;

  void validate() const;
};

/// Default NH reference TMTF. The reference listener's measured values are
/// close to the young normal-hearing average, so they double as the default.
Tmtf nh_reference_tmtf();

struct ListenerProfile {
  std::string name = "NH";
  Audiogram audiogram;
  Tmtf tmtf;
  double alpha = 1.0;  // compression health, 1 = intact, 0 = fully damaged

  void validate() const;

  /// All-zero audiogram, NH TMTF, alpha = 1.
  static ListenerProfile normal_hearing();
};

/// One reference/test pair to evaluate, with optional subjective score.
struct ManifestRecord {
  std::string reference_path;
  std::string test_path;
  std::string condition;
  double snr_db = 0.0;
  std::string listener_id;
  std::optional<double> subjective_si_percent;
};

struct Manifest {
  std::vector<ManifestRecord> records;
};

/// Parses and validates a JSON profile document. Missing alpha defaults to
/// 1.0 for NH profiles (type "NH") and 0.5 for HL profiles.
ListenerProfile parse_profile(const std::string& json_text);
ListenerProfile load_profile(const std::string& path);
std::string serialize_profile(const ListenerProfile& profile);

/// Manifest I/O: comma-separated with header
/// ref,test,condition,snr_db,listener,si_percent (si_percent may be blank).
Manifest parse_manifest(const std::string& text);
Manifest load_manifest(const std::string& path);

/// Four-frequency pure-tone average over 500/1000/2000/4000 Hz,
/// interpolating where the audiogram lacks an exact point.
double pta4(const Audiogram& audiogram);

/// Piecewise-linear interpolation on a log-frequency axis, clamped to the
/// endpoint levels outside the measured range.
double interpolate_hl(const Audiogram& audiogram, double freq_hz);

}  // namespace gesi

#endif  // GESI_PROFILES_HPP_
