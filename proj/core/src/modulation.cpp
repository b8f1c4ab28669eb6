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

#include "gesi/modulation.hpp"

#include <cmath>

#include "gesi/dsp.hpp"
#include "gesi/errors.hpp"

namespace gesi {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void MfbConfig::validate(double frame_rate_hz) const {
  if (bands() < 2) throw DataError("MFB needs at least 2 bands");
  for (int j = 1; j < bands(); ++j) {
    if (!(center_freqs_hz[j] > center_freqs_hz[j - 1])) {
      throw DataError("MFB center frequencies must be ascending");
    }
  }
  if (center_freqs_hz.back() > 32.0) {
    throw DataError("MFB center frequencies are limited to 32 Hz");
  }
  if (frame_rate_hz < 2.0 * center_freqs_hz.back()) {
    throw DataError("EPgram frame rate below 2x the highest MFB center");
  }
}

TmtfGains tmtf_gains(const MfbConfig& cfg, const Tmtf& tmtf_nh, const Tmtf& tmtf_hl) {
  tmtf_nh.validate();
  tmtf_hl.validate();
  TmtfGains g;
  g.reference.resize(cfg.bands());
  g.test.resize(cfg.bands());
  g.reference[0] = 1.0;
  g.test[0] = 1.0;
  const double depth = std::pow(10.0, (tmtf_nh.lps_db - tmtf_hl.lps_db) / 20.0);
  for (int j = 1; j < cfg.bands(); ++j) {
    const double fm = cfg.center_freqs_hz[j];
    g.reference[j] = 1.0 / std::sqrt(1.0 + std::pow(fm / tmtf_nh.fc_hz, 2.0));
    g.test[j] = depth / std::sqrt(1.0 + std::pow(fm / tmtf_hl.fc_hz, 2.0));
  }
  return g;
}

ModulationEnvelopes mod_envelopes(const EPgram& ep, const std::vector<double>& gains,
                                  const MfbConfig& cfg) {
  const double frame_rate = 1000.0 / ep.frame_shift_ms;
  cfg.validate(frame_rate);
  if (static_cast<int>(gains.size()) != cfg.bands()) {
    throw DataError("mod_envelopes: gain count does not match band count");
  }

  const int n = ep.channels();
  const int m = cfg.bands();
  const int frames = ep.frames();

  ModulationEnvelopes out;
  out.config = cfg;
  out.values.assign(n, std::vector<std::vector<double>>(m, std::vector<double>(frames)));

  for (int i = 0; i < n; ++i) {
    const auto& tr = ep.levels[i];
    for (int j = 0; j < m; ++j) {
      auto& dst = out.values[i][j];
      if (j == 0) {
        OnePoleLp lp(cfg.center_freqs_hz[0], frame_rate);
        for (int t = 0; t < frames; ++t) dst[t] = gains[j] * lp.process(tr[t]);
      } else {
        Biquad bp = Biquad::bandpass(cfg.center_freqs_hz[j], cfg.bandpass_q, frame_rate);
        for (int t = 0; t < frames; ++t) dst[t] = gains[j] * bp.process(tr[t]);
      }
    }
  }
  return out;
}

double mfb_band_gain(const MfbConfig& cfg, int band, double f_hz, double frame_rate_hz) {
  const double w = 2.0 * kPi * f_hz / frame_rate_hz;
  if (band == 0) {
    OnePoleLp lp(cfg.center_freqs_hz[0], frame_rate_hz);
    return std::abs(lp.response(w));
  }
  Biquad bp = Biquad::bandpass(cfg.center_freqs_hz[band], cfg.bandpass_q, frame_rate_hz);
  return std::abs(bp.response(w));
}

}  // namespace gesi
