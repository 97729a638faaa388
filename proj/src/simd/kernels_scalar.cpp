// Copyright 2026 the manidisc authors
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

#include "manidisc/simd/kernels.hpp"

namespace manidisc::simd::scalar {

double L2Sqr(const double* a, const double* b, std::size_t n) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return sum;
}

double Dot(const double* a, const double* b, std::size_t n) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum += a[i] * b[i];
    }
    return sum;
}

void Accumulate(const double* x, double* acc, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        acc[i] += x[i];
    }
}

void Scale(double factor, double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        x[i] *= factor;
    }
}

}  // namespace manidisc::simd::scalar
