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

#include <cstdlib>
#include <stdexcept>
#include <string>

#include "manidisc/simd/kernels.hpp"

namespace manidisc::simd {

namespace {

constexpr KernelTable kScalarTable{Isa::kScalar, scalar::L2Sqr, scalar::Dot, scalar::Accumulate,
                                   scalar::Scale};
#if defined(MANIDISC_HAVE_AVX2)
constexpr KernelTable kAvx2Table{Isa::kAvx2, avx2::L2Sqr, avx2::Dot, avx2::Accumulate, avx2::Scale};
#endif
#if defined(MANIDISC_HAVE_NEON)
constexpr KernelTable kNeonTable{Isa::kNeon, neon::L2Sqr, neon::Dot, neon::Accumulate, neon::Scale};
#endif

bool CpuHasAvx2() {
#if defined(MANIDISC_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa SelectIsa() {
    if (const char* env = std::getenv("MANIDISC_SIMD")) {
        const std::string requested(env);
        if (requested == "scalar") {
            return Isa::kScalar;
        }
        if (requested == "avx2" && IsaSupported(Isa::kAvx2)) {
            return Isa::kAvx2;
        }
        if (requested == "neon" && IsaSupported(Isa::kNeon)) {
            return Isa::kNeon;
        }
    }
    if (IsaSupported(Isa::kAvx2)) {
        return Isa::kAvx2;
    }
    if (IsaSupported(Isa::kNeon)) {
        return Isa::kNeon;
    }
    return Isa::kScalar;
}

const KernelTable*& ActiveSlot() {
    static const KernelTable* active = &Kernels(SelectIsa());
    return active;
}

}  // namespace

bool IsaSupported(Isa isa) {
    switch (isa) {
        case Isa::kScalar:
            return true;
        case Isa::kAvx2:
            return CpuHasAvx2();
        case Isa::kNeon:
#if defined(MANIDISC_HAVE_NEON)
            return true;
#else
            return false;
#endif
    }
    return false;
}

std::string_view IsaName(Isa isa) {
    switch (isa) {
        case Isa::kScalar:
            return "scalar";
        case Isa::kAvx2:
            return "avx2";
        case Isa::kNeon:
            return "neon";
    }
    return "unknown";
}

const KernelTable& Kernels(Isa isa) {
    if (!IsaSupported(isa)) {
        throw std::invalid_argument("kernel variant not available: " + std::string(IsaName(isa)));
    }
    switch (isa) {
#if defined(MANIDISC_HAVE_AVX2)
        case Isa::kAvx2:
            return kAvx2Table;
#endif
#if defined(MANIDISC_HAVE_NEON)
        case Isa::kNeon:
            return kNeonTable;
#endif
        default:
            return kScalarTable;
    }
}

const KernelTable& ActiveKernels() { return *ActiveSlot(); }

Isa ActiveIsa() { return ActiveKernels().isa; }

void ForceIsa(Isa isa) { ActiveSlot() = &Kernels(isa); }

}  // namespace manidisc::simd
