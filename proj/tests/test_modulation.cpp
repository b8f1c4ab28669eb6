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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "gesi/errors.hpp"
#include "gesi/modulation.hpp"
#include "test_util.hpp"

using namespace gesi;
using namespace gesi::testutil;

namespace {

constexpr double kFrameRate = 2000.0;

EPgram modulated_epgram(double mod_hz, int frames, double dc = 40.0,
                        double depth = 10.0) {
  EPgram ep;
  ep.frame_shift_ms = 0.5;
  ep.peak_freqs_hz = {1000.0};
  ep.levels.assign(1, std::vector<double>(frames));
  for (int t = 0; t < frames; ++t) {
    ep.levels[0][t] = dc + depth * std::sin(2.0 * kPi * mod_hz * t / kFrameRate);
  }
  return ep;
}

// Amplitude of a sinusoid at f_hz in x over the second half of the record,
// measured by projection.
double sine_amplitude(const std::vector<double>& x, double f_hz) {
  const int n = static_cast<int>(x.size());
  const int t0 = n / 2;
  double c = 0.0, s = 0.0;
  for (int t = t0; t < n; ++t) {
    const double ph = 2.0 * kPi * f_hz * t / kFrameRate;
    c += x[t] * std::cos(ph);
    s += x[t] * std::sin(ph);
  }
  const double scale = 2.0 / (n - t0);
  return std::hypot(c * scale, s * scale);
}

}  // namespace

TEST_CASE("tmtf_gains: NH-vs-NH reference values") {
  const MfbConfig cfg;
  const Tmtf nh = nh_reference_tmtf();
  const auto g = tmtf_gains(cfg, nh, nh);
  REQUIRE(g.reference.size() == 6);
  REQUIRE(g.test.size() == 6);

  CHECK(g.reference[0] == 1.0);
  CHECK(g.test[0] == 1.0);
  for (size_t j = 1; j < 6; ++j) {
    const double f = cfg.center_freqs_hz[j];
    const double expected = 1.0 / std::sqrt(1.0 + (f / 51.0) * (f / 51.0));
    CHECK(g.reference[j] == doctest::Approx(expected).epsilon(1e-12));
    CHECK(g.test[j] == doctest::Approx(expected).epsilon(1e-12));
  }

  // At f_m == Fc the gain is exactly 1/sqrt(2).
  MfbConfig at_fc;
  at_fc.center_freqs_hz = {1.0, 51.0};
  const auto g2 = tmtf_gains(at_fc, nh, nh);
  CHECK(g2.reference[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("tmtf_gains: impaired listener never exceeds the reference") {
  const MfbConfig cfg;
  const Tmtf nh = nh_reference_tmtf();
  for (double lps : {-23.2, -20.0, -15.0, -10.0}) {
    for (double fc : {51.0, 30.0, 15.0, 8.0}) {
      const auto g = tmtf_gains(cfg, nh, Tmtf{lps, fc});
      for (size_t j = 1; j < g.test.size(); ++j) {
        CHECK(g.test[j] <= g.reference[j] + 1e-12);
      }
    }
  }
}

TEST_CASE("tmtf_gains: sensitivity offset scales the test gains") {
  MfbConfig cfg;
  cfg.center_freqs_hz = {1.0, 4.0};
  const Tmtf nh = nh_reference_tmtf();
  // 20 dB worse modulation sensitivity (less negative lps) costs 20 dB gain.
  const auto g = tmtf_gains(cfg, nh, Tmtf{nh.lps_db + 20.0, nh.fc_hz});
  CHECK(g.test[1] == doctest::Approx(0.1 * g.reference[1]).epsilon(1e-12));
  CHECK(g.test[0] == 1.0);  // DC band unaffected
}

TEST_CASE("MfbConfig::validate rejects bad layouts") {
  MfbConfig bad;
  bad.center_freqs_hz = {1.0, 4.0, 2.0};
  CHECK_THROWS_AS(bad.validate(kFrameRate), DataError);

  bad.center_freqs_hz = {1.0, 2.0, 64.0};
  CHECK_THROWS_AS(bad.validate(kFrameRate), DataError);

  MfbConfig ok;
  CHECK_THROWS_AS(ok.validate(50.0), DataError);  // frame rate too low
  CHECK_NOTHROW(ok.validate(kFrameRate));
}

TEST_CASE("band 1 passes DC unchanged after settling") {
  EPgram ep;
  ep.frame_shift_ms = 0.5;
  ep.peak_freqs_hz = {1000.0};
  ep.levels.assign(1, std::vector<double>(12000, 37.5));
  const auto m = mod_envelopes(ep, std::vector<double>(6, 1.0));
  REQUIRE(m.bands() == 6);
  CHECK(m.values[0][0].back() == doctest::Approx(37.5).epsilon(1e-6));
  // Band-pass bands settle toward zero for a constant input.
  for (int j = 1; j < 6; ++j) {
    CHECK(std::abs(m.values[0][j].back()) < 1e-3);
  }
}

TEST_CASE("band gains match the analytic response oracle") {
  const MfbConfig cfg;
  for (int j = 0; j < cfg.bands(); ++j) {
    const double fc = cfg.center_freqs_hz[j];
    const auto ep = modulated_epgram(fc, 24000);
    const auto m = mod_envelopes(ep, std::vector<double>(6, 1.0), cfg);
    const double measured = sine_amplitude(m.values[0][j], fc);
    const double expected = 10.0 * mfb_band_gain(cfg, j, fc, kFrameRate);
    CHECK(measured == doctest::Approx(expected).epsilon(0.01));
  }
}

TEST_CASE("band-pass bands peak near fc with unit gain and Q=1 bandwidth") {
  const MfbConfig cfg;
  for (int j = 1; j < cfg.bands(); ++j) {
    const double fc = cfg.center_freqs_hz[j];
    CHECK(mfb_band_gain(cfg, j, fc, kFrameRate) == doctest::Approx(1.0).epsilon(1e-9));
    // -3 dB points of an analog constant-peak band-pass with Q=1 are at
    // fc*(sqrt(5)+/-1)/2; the bilinear design should land within 5%.
    const double lo = fc * (std::sqrt(5.0) - 1.0) / 2.0;
    const double hi = fc * (std::sqrt(5.0) + 1.0) / 2.0;
    CHECK(mfb_band_gain(cfg, j, lo, kFrameRate) ==
          doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.05));
    CHECK(mfb_band_gain(cfg, j, hi, kFrameRate) ==
          doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.05));
    // An octave away the response is well below the passband.
    CHECK(mfb_band_gain(cfg, j, fc / 4.0, kFrameRate) < 0.5);
  }
}

TEST_CASE("mod_envelopes is linear: scaling and superposition to 1e-9") {
  const auto ep_a = synthetic_epgram(3, 1000, 51);
  const auto ep_b = synthetic_epgram(3, 1000, 52);
  EPgram ep_sum = ep_a;
  EPgram ep_scaled = ep_a;
  for (int i = 0; i < 3; ++i) {
    for (int t = 0; t < 1000; ++t) {
      ep_sum.levels[i][t] = ep_a.levels[i][t] + ep_b.levels[i][t];
      ep_scaled.levels[i][t] = 2.5 * ep_a.levels[i][t];
    }
  }
  const std::vector<double> gains(6, 1.0);
  const auto ma = mod_envelopes(ep_a, gains);
  const auto mb = mod_envelopes(ep_b, gains);
  const auto ms = mod_envelopes(ep_sum, gains);
  const auto mk = mod_envelopes(ep_scaled, gains);

  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 6; ++j) {
      for (int t = 0; t < 1000; ++t) {
        CHECK(ms.values[i][j][t] ==
              doctest::Approx(ma.values[i][j][t] + mb.values[i][j][t]).epsilon(1e-9));
        CHECK(mk.values[i][j][t] ==
              doctest::Approx(2.5 * ma.values[i][j][t]).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("per-band gain vector scales the matching band only") {
  const auto ep = synthetic_epgram(2, 800, 61);
  std::vector<double> gains(6, 1.0);
  gains[3] = 0.25;
  const auto m1 = mod_envelopes(ep, std::vector<double>(6, 1.0));
  const auto m2 = mod_envelopes(ep, gains);
  for (int i = 0; i < 2; ++i) {
    for (int t = 0; t < 800; ++t) {
      CHECK(m2.values[i][3][t] == doctest::Approx(0.25 * m1.values[i][3][t]).epsilon(1e-12));
      CHECK(m2.values[i][1][t] == doctest::Approx(m1.values[i][1][t]).epsilon(1e-12));
    }
  }
}

TEST_CASE("mod_envelopes rejects wrong-sized gain vectors") {
  const auto ep = synthetic_epgram(1, 100, 71);
  CHECK_THROWS_AS(mod_envelopes(ep, std::vector<double>(4, 1.0)), DataError);
}
