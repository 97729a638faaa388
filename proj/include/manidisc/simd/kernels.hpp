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

#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace manidisc::simd {

enum class Isa { kScalar, kAvx2, kNeon };

using L2SqrFn = double (*)(const double* a, const double* b, std::size_t n);
using DotFn = double (*)(const double* a, const double* b, std::size_t n);
using AccumulateFn = void (*)(const double* x, double* acc, std::size_t n);
using ScaleFn = void (*)(double factor, double* x, std::size_t n);

// Reference implementations. Sums are accumulated strictly left to right.
namespace scalar {
double L2Sqr(const double* a, const double* b, std::size_t n);
double Dot(const double* a, const double* b, std::size_t n);
void Accumulate(const double* x, double* acc, std::size_t n);
void Scale(double factor, double* x, std::size_t n);
}  // namespace scalar

#if defined(MANIDISC_HAVE_AVX2)
namespace avx2 {
double L2Sqr(const double* a, const double* b, std::size_t n);
double Dot(const double* a, const double* b, std::size_t n);
void Accumulate(const double* x, double* acc, std::size_t n);
void Scale(double factor, double* x, std::size_t n);
}  // namespace avx2
#endif

#if defined(MANIDISC_HAVE_NEON)
namespace neon {
double L2Sqr(const double* a, const double* b, std::size_t n);
double Dot(const double* a, const double* b, std::size_t n);
void Accumulate(const double* x, double* acc, std::size_t n);
void Scale(double factor, double* x, std::size_t n);
}  // namespace neon
#endif

/// Kernel table for one instruction set.
struct KernelTable {
    Isa isa;
    L2SqrFn l2_sqr;
    DotFn dot;
    AccumulateFn accumulate;
    ScaleFn scale;
};

/// True when the variant was compiled in and the running CPU supports it.
bool IsaSupported(Isa isa);
std::string_view IsaName(Isa isa);

/// Table for a specific ISA. Throws std::invalid_argument if unsupported.
const KernelTable& Kernels(Isa isa);

/// The table selected at startup: best supported ISA, unless the
/// MANIDISC_SIMD environment variable names another one ("scalar", "avx2",
/// "neon").
const KernelTable& ActiveKernels();
Isa ActiveIsa();

/// Overrides the process-wide selection. Not thread-safe; call before any
/// concurrent use.
void ForceIsa(Isa isa);

inline double L2Sqr(std::span<const double> a, std::span<const double> b) {
    return ActiveKernels().l2_sqr(a.data(), b.data(), a.size());
}

inline double Dot(std::span<const double> a, std::span<const double> b) {
    return ActiveKernels().dot(a.data(), b.data(), a.size());
}

inline void Accumulate(std::span<const double> x, std::span<double> acc) {
    ActiveKernels().accumulate(x.data(), acc.data(), x.size());
}

inline void Scale(double factor, std::span<double> x) {
    ActiveKernels().scale(factor, x.data(), x.size());
}

}  // namespace manidisc::simd
