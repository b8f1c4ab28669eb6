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

#include "gesi/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "gesi/errors.hpp"

namespace gesi {

namespace {

uint32_t read_u32(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t read_u16(const uint8_t* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  out.push_back(v & 0xff);
  out.push_back((v >> 8) & 0xff);
  out.push_back((v >> 16) & 0xff);
  out.push_back((v >> 24) & 0xff);
}

void put_u16(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(v & 0xff);
  out.push_back((v >> 8) & 0xff);
}

}  // namespace

MonoSignal read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open WAV file: " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  if (bytes.size() < 44 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw DataError("not a RIFF/WAVE file: " + path);
  }

  uint16_t format_tag = 0, channels = 0, bits = 0;
  uint32_t sample_rate = 0;
  const uint8_t* data = nullptr;
  size_t data_len = 0;

  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const uint8_t* hdr = bytes.data() + pos;
    uint32_t chunk_len = read_u32(hdr + 4);
    const uint8_t* body = hdr + 8;
    if (pos + 8 + chunk_len > bytes.size()) chunk_len = bytes.size() - pos - 8;
    if (std::memcmp(hdr, "fmt ", 4) == 0 && chunk_len >= 16) {
      format_tag = read_u16(body);
      channels = read_u16(body + 2);
      sample_rate = read_u32(body + 4);
      bits = read_u16(body + 14);
      if (format_tag == 0xFFFE && chunk_len >= 40) {
        format_tag = read_u16(body + 24);  // WAVE_FORMAT_EXTENSIBLE subformat
      }
    } else if (std::memcmp(hdr, "data", 4) == 0) {
      data = body;
      data_len = chunk_len;
    }
    pos += 8 + chunk_len + (chunk_len & 1);
  }

  if (!data || sample_rate == 0) throw DataError("WAV missing fmt/data chunk: " + path);
  if (channels != 1) {
    throw DataError("expected mono WAV, got " + std::to_string(channels) +
                    " channels: " + path);
  }
  if (sample_rate < 16000 || sample_rate > 48000) {
    throw DataError("unsupported sample rate " + std::to_string(sample_rate) +
                    " Hz (accepted: 16000-48000): " + path);
  }

  MonoSignal sig;
  sig.rate_hz = sample_rate;
  if (format_tag == 1 && bits == 16) {
    size_t n = data_len / 2;
    sig.samples.resize(n);
    for (size_t i = 0; i < n; ++i) {
      int16_t v = static_cast<int16_t>(data[2 * i] | (data[2 * i + 1] << 8));
      sig.samples[i] = v / 32768.0;
    }
  } else if (format_tag == 1 && bits == 24) {
    size_t n = data_len / 3;
    sig.samples.resize(n);
    for (size_t i = 0; i < n; ++i) {
      int32_t v = (data[3 * i] << 8) | (data[3 * i + 1] << 16) |
                  (static_cast<int32_t>(data[3 * i + 2]) << 24);
      sig.samples[i] = (v >> 8) / 8388608.0;
    }
  } else if (format_tag == 3 && bits == 32) {
    size_t n = data_len / 4;
    sig.samples.resize(n);
    for (size_t i = 0; i < n; ++i) {
      float f;
      std::memcpy(&f, data + 4 * i, 4);
      sig.samples[i] = f;
    }
  } else {
    throw DataError("unsupported WAV format (tag " + std::to_string(format_tag) +
                    ", " + std::to_string(bits) + " bit): " + path);
  }
  return sig;
}

void write_wav(const std::string& path, const MonoSignal& signal, WavFormat format) {
  if (signal.rate_hz <= 0) throw DataError("write_wav: invalid sample rate");
  const uint32_t rate = static_cast<uint32_t>(std::lround(signal.rate_hz));
  uint16_t bits = format == WavFormat::kPcm16 ? 16 : format == WavFormat::kPcm24 ? 24 : 32;
  uint16_t tag = format == WavFormat::kFloat32 ? 3 : 1;
  uint16_t block = bits / 8;
  uint32_t data_len = static_cast<uint32_t>(signal.samples.size()) * block;

  std::vector<uint8_t> out;
  out.reserve(44 + data_len);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  put_u32(out, 36 + data_len);
  out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  put_u32(out, 16);
  put_u16(out, tag);
  put_u16(out, 1);
  put_u32(out, rate);
  put_u32(out, rate * block);
  put_u16(out, block);
  put_u16(out, bits);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  put_u32(out, data_len);

  for (double s : signal.samples) {
    double c = std::clamp(s, -1.0, 1.0);
    switch (format) {
      case WavFormat::kPcm16: {
        int16_t v = static_cast<int16_t>(std::lround(c * 32767.0));
        put_u16(out, static_cast<uint16_t>(v));
        break;
      }
      case WavFormat::kPcm24: {
        int32_t v = static_cast<int32_t>(std::lround(c * 8388607.0));
        out.push_back(v & 0xff);
        out.push_back((v >> 8) & 0xff);
        out.push_back((v >> 16) & 0xff);
        break;
      }
      case WavFormat::kFloat32: {
        float f = static_cast<float>(s);
        uint8_t b[4];
        std::memcpy(b, &f, 4);
        out.insert(out.end(), b, b + 4);
        break;
      }
    }
  }

  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot write WAV file: " + path);
  os.write(reinterpret_cast<const char*>(out.data()), out.size());
}

double rms(const std::vector<double>& samples) {
  if (samples.empty()) return 0.0;
  double acc = 0.0;
  for (double s : samples) acc += s * s;
  return std::sqrt(acc / samples.size());
}

double rms_db(const std::vector<double>& samples) {
  double r = rms(samples);
  return 20.0 * std::log10(std::max(r, 1e-12));
}

}  // namespace gesi
