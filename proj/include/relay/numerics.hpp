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

#ifndef RELAY_NUMERICS_HPP
#define RELAY_NUMERICS_HPP

#include <cmath>
#include <cstdint>

namespace relay::numerics {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// log C(n, k); -inf when k is outside [0, n].
double log_binomial(std::int64_t n, std::int64_t k);

/// log C(n, k) from log-gamma in extended precision.
long double log_binomial_ext(std::int64_t n, std::int64_t k);

/// C(n, k) as a double. Exact integer arithmetic for n <= 30, log-gamma above.
double binomial(std::int64_t n, std::int64_t k);

/// x^k for integer k >= 0 with 0^0 = 1.
double int_pow(double x, std::int64_t k);

/// k * log(x) with the convention 0 * log(0) = 0.
double xlogy(std::int64_t k, double x);

}  // namespace relay::numerics

#endif  // RELAY_NUMERICS_HPP
