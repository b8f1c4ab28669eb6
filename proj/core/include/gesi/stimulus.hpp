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

#ifndef GESI_STIMULUS_HPP_
#define GESI_STIMULUS_HPP_

#include <vector>

#include "gesi/audio.hpp"

namespace gesi {

struct StftConfig {
  double window_ms = 32.0;
  double hop_ms = 8.0;

  void validate() const;
};

/// Full linear convolution of signal and room impulse response,
/// length signal + rir - 1.
MonoSignal apply_rir(const MonoSignal& signal, const MonoSignal& rir);

struct SnrMix {
  MonoSignal mixture;
  MonoSignal scaled_noise;  // noise after tiling/truncation and scaling
};

/// Scales the noise so 20*log10(rms(speech)/rms(noise)) equals snr_db, then
/// adds. Noise shorter than the speech is tiled.
SnrMix mix_at_snr(const MonoSignal& speech, const MonoSignal& noise, double snr_db);

/// Oracle ideal-ratio-mask enhancement: the mixture (clean + noise) STFT is
/// scaled per bin by (|S|^2 / (|S|^2 + |N|^2))^exponent and resynthesized
/// by weighted overlap-add.
MonoSignal ideal_ratio_mask(const MonoSignal& clean, const MonoSignal& noise,
                            const StftConfig& stft = StftConfig{},
                            double exponent = 0.5);

/// Analysis-synthesis round trip without masking (identity to numerical
/// precision); exposed for the perfect-reconstruction contract.
MonoSignal stft_roundtrip(const MonoSignal& signal, const StftConfig& stft = StftConfig{});

}  // namespace gesi

#endif  // GESI_STIMULUS_HPP_
