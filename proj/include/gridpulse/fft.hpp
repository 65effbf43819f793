// Copyright 2026 The GridPulse Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GRIDPULSE_FFT_HPP
#define GRIDPULSE_FFT_HPP

#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace gridpulse::fft {

using cplx = std::complex<double>;

namespace detail {

inline std::size_t smallest_factor(std::size_t n) {
  for (std::size_t p = 2; p * p <= n; ++p)
    if (n % p == 0) return p;
  return n;
}

// exp(-2 pi i num / den) with the angle reduced first.
inline cplx twiddle(std::size_t num, std::size_t den) {
  double a = -2.0 * std::numbers::pi * static_cast<double>(num % den) / static_cast<double>(den);
  return {std::cos(a), std::sin(a)};
}

// Mixed-radix decimation in time over the input read with the given stride.
inline void transform(const cplx* in, std::size_t stride, std::size_t n, cplx* out) {
  if (n == 1) {
    out[0] = in[0];
    return;
  }
  const std::size_t p = smallest_factor(n);
  if (p == n) {  // prime length: direct sum
    for (std::size_t k = 0; k < n; ++k) {
      cplx acc{0.0, 0.0};
      for (std::size_t j = 0; j < n; ++j) acc += in[j * stride] * twiddle(j * k, n);
      out[k] = acc;
    }
    return;
  }
  const std::size_t m = n / p;
  std::vector<cplx> sub(n);
  for (std::size_t r = 0; r < p; ++r) transform(in + r * stride, stride * p, m, sub.data() + r * m);
  for (std::size_t k = 0; k < n; ++k) {
    cplx acc{0.0, 0.0};
    for (std::size_t r = 0; r < p; ++r) acc += sub[r * m + k % m] * twiddle(r * k, n);
    out[k] = acc;
  }
}

}  // namespace detail

// Forward DFT: X_k = sum_n x_n exp(-2 pi i k n / N), any N >= 1.
inline std::vector<cplx> forward(std::span<const cplx> x) {
  std::vector<cplx> out(x.size());
  if (!x.empty()) detail::transform(x.data(), 1, x.size(), out.data());
  return out;
}

inline std::vector<cplx> forward_real(std::span<const double> x) {
  std::vector<cplx> c(x.begin(), x.end());
  return forward(c);
}

}  // namespace gridpulse::fft

#endif  // GRIDPULSE_FFT_HPP
