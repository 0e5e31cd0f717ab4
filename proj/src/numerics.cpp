/*
 * Copyright 2026 The lattice-relay Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "relay/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace relay::numerics {

namespace {

constexpr std::int64_t kExactLimit = 30;

}  // namespace

double log_binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  if (n <= kExactLimit) return std::log(binomial(n, k));
  return static_cast<double>(log_binomial_ext(n, k));
}

long double log_binomial_ext(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return -std::numeric_limits<long double>::infinity();
  const auto nd = static_cast<long double>(n);
  const auto kd = static_cast<long double>(k);
  // Extended precision keeps the cancellation between the three terms small.
  return std::lgamma(nd + 1.0L) - std::lgamma(kd + 1.0L) -
         std::lgamma(nd - kd + 1.0L);
}

double binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0.0;
  if (n > kExactLimit) return std::exp(log_binomial(n, k));
  k = std::min(k, n - k);
  // C(n, i) * (n - i) fits comfortably in 64 bits for n <= 30.
  std::uint64_t c = 1;
  for (std::int64_t i = 0; i < k; ++i) {
    c = c * static_cast<std::uint64_t>(n - i) / static_cast<std::uint64_t>(i + 1);
  }
  return static_cast<double>(c);
}

double int_pow(double x, std::int64_t k) {
  if (k == 0) return 1.0;
  return std::pow(x, static_cast<double>(k));
}

double xlogy(std::int64_t k, double x) {
  if (k == 0) return 0.0;
  return static_cast<double>(k) * std::log(x);
}

}  // namespace relay::numerics
