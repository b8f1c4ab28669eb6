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

#ifndef GESI_DSP_HPP_
#define GESI_DSP_HPP_

#include <complex>
#include <cstddef>
#include <vector>

namespace gesi {

/// Direct-form II transposed biquad section.
class Biquad {
 public:
  Biquad() = default;
  Biquad(double b0, double b1, double b2, double a1, double a2)
      : b0_(b0), b1_(b1), b2_(b2), a1_(a1), a2_(a2) {}

  double process(double x) {
    double y = b0_ * x + s1_;
    s1_ = b1_ * x - a1_ * y + s2_;
    s2_ = b2_ * x - a2_ * y;
    return y;
  }

  void reset() { s1_ = s2_ = 0.0; }

  /// Magnitude response at normalized frequency w = 2*pi*f/fs.
  std::complex<double> response(double w) const;

  double b0() const { return b0_; }
  double b1() const { return b1_; }
  double b2() const { return b2_; }
  double a1() const { return a1_; }
  double a2() const { return a2_; }

  /// RBJ constant-peak band-pass (gain 1 at fc).
  static Biquad bandpass(double fc_hz, double q, double fs_hz);
  /// Butterworth-style low-pass section.
  static Biquad lowpass(double fc_hz, double q, double fs_hz);
  /// Two-pole resonator with zeros at z = +/-1, unit gain at fc.
  static Biquad resonator(double fc_hz, double bw_hz, double fs_hz);

 private:
  double b0_ = 1.0, b1_ = 0.0, b2_ = 0.0, a1_ = 0.0, a2_ = 0.0;
  double s1_ = 0.0, s2_ = 0.0;
};

/// First-order low-pass, bilinear transform of 1/(1 + s/wc).
class OnePoleLp {
 public:
  OnePoleLp() = default;
  OnePoleLp(double fc_hz, double fs_hz);
  double process(double x) {
    double y = b0_ * (x + x1_) - a1_ * y1_;
    x1_ = x;
    y1_ = y;
    return y;
  }
  void reset() { x1_ = y1_ = 0.0; }
  std::complex<double> response(double w) const;

 private:
  double b0_ = 1.0, a1_ = 0.0;
  double x1_ = 0.0, y1_ = 0.0;
};

/// In-place iterative radix-2 FFT. n must be a power of two.
void fft(std::vector<std::complex<double>>& x, bool inverse);

size_t next_pow2(size_t n);

/// Full linear convolution, length a.size() + b.size() - 1 (FFT-based).
std::vector<double> convolve(const std::vector<double>& a,
                             const std::vector<double>& b);

/// Full cross-correlation r(lag) = sum_n a[n] * b[n + lag], for
/// lag in [-(a.size()-1), b.size()-1]. Returned vector index i
/// corresponds to lag = i - (a.size() - 1). A positive peak lag
/// means b is delayed relative to a by that many samples.
std::vector<double> cross_correlate(const std::vector<double>& a,
                                    const std::vector<double>& b);

}  // namespace gesi

#endif  // GESI_DSP_HPP_
