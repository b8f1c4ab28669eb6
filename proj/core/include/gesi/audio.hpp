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

#ifndef GESI_AUDIO_HPP_
#define GESI_AUDIO_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace gesi {

enum class WavFormat { kPcm16, kPcm24, kFloat32 };

/// Mono audio buffer with its sample rate. Samples are normalized to [-1, 1]
/// full scale regardless of the on-disk format.
struct MonoSignal {
  std::vector<double> samples;
  double rate_hz = 0.0;

  double duration_s() const {
    return rate_hz > 0 ? static_cast<double>(samples.size()) / rate_hz : 0.0;
  }
};

/// Reads a mono WAV file (PCM 16/24-bit or 32-bit float, 16-48 kHz).
/// Stereo or otherwise unsupported files raise DataError.
MonoSignal read_wav(const std::string& path);

/// Writes a mono WAV file in the given sample format.
void write_wav(const std::string& path, const MonoSignal& signal,
               WavFormat format = WavFormat::kPcm16);

double rms(const std::vector<double>& samples);
double rms_db(const std::vector<double>& samples);

}  // namespace gesi

#endif  // GESI_AUDIO_HPP_
