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

#include "gesi/dsp.hpp"

#include <algorithm>
#include <cmath>

#include "gesi/errors.hpp"

namespace gesi {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

std::complex<double> Biquad::response(double w) const {
  const std::complex<double> z1 = std::polar(1.0, -w);
  const std::complex<double> z2 = z1 * z1;
  return (b0_ + b1_ * z1 + b2_ * z2) / (1.0 + a1_ * z1 + a2_ * z2);
}

Biquad Biquad::bandpass(double fc_hz, double q, double fs_hz) {
  const double w0 = 2.0 * kPi * fc_hz / fs_hz;
  const double alpha = std::sin(w0) / (2.0 * q);
  const double a0 = 1.0 + alpha;
  return Biquad(alpha / a0, 0.0, -alpha / a0,
                -2.0 * std::cos(w0) / a0, (1.0 - alpha) / a0);
}

Biquad Biquad::lowpass(double fc_hz, double q, double fs_hz) {
  const double w0 = 2.0 * kPi * fc_hz / fs_hz;
  const double alpha = std::sin(w0) / (2.0 * q);
  const double cw = std::cos(w0);
  const double a0 = 1.0 + alpha;
  return Biquad((1.0 - cw) / (2.0 * a0), (1.0 - cw) / a0, (1.0 - cw) / (2.0 * a0),
                -2.0 * cw / a0, (1.0 - alpha) / a0);
}

Biquad Biquad::resonator(double fc_hz, double bw_hz, double fs_hz) {
  const double r = std::exp(-kPi * bw_hz / fs_hz);
  const double theta = 2.0 * kPi * fc_hz / fs_hz;
  Biquad bq(1.0, 0.0, -1.0, -2.0 * r * std::cos(theta), r * r);
  const double g = std::abs(bq.response(theta));
  return Biquad(1.0 / g, 0.0, -1.0 / g, bq.a1_, bq.a2_);
}

OnePoleLp::OnePoleLp(double fc_hz, double fs_hz) {
  // Bilinear transform of H(s) = 1 / (1 + s/wc) with prewarping.
  const double k = std::tan(kPi * fc_hz / fs_hz);
  b0_ = k / (1.0 + k);
  a1_ = (k - 1.0) / (1.0 + k);
}

std::complex<double> OnePoleLp::response(double w) const {
  const std::complex<double> z1 = std::polar(1.0, -w);
  return b0_ * (1.0 + z1) / (1.0 + a1_ * z1);
}

size_t next_pow2(size_t n) {
  size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void fft(std::vector<std::complex<double>>& x, bool inverse) {
  const size_t n = x.size();
  if (n == 0 || (n & (n - 1)) != 0) throw NumericError("fft size must be a power of two");

  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }

  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? 2.0 : -2.0) * kPi / static_cast<double>(len);
    const std::complex<double> wlen = std::polar(1.0, ang);
    for (size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (size_t k = 0; k < len / 2; ++k) {
        std::complex<double> u = x[i + k];
        std::complex<double> v = x[i + k + len / 2] * w;
        x[i + k] = u + v;
        x[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }

  if (inverse) {
    for (auto& v : x) v /= static_cast<double>(n);
  }
}

std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw DataError("convolve: empty input");
  const size_t out_len = a.size() + b.size() - 1;
  const size_t n = next_pow2(out_len);
  std::vector<std::complex<double>> fa(n), fb(n);
  for (size_t i = 0; i < a.size(); ++i) fa[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) fb[i] = b[i];
  fft(fa, false);
  fft(fb, false);
  for (size_t i = 0; i < n; ++i) fa[i] *= fb[i];
  fft(fa, true);
  std::vector<double> out(out_len);
  for (size_t i = 0; i < out_len; ++i) out[i] = fa[i].real();
  return out;
}

std::vector<double> cross_correlate(const std::vector<double>& a,
                                    const std::vector<double>& b) {
  std::vector<double> ar(a.rbegin(), a.rend());
  return convolve(b, ar);
}

}  // namespace gesi
