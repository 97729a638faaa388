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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "manidisc/errors.hpp"
#include "manidisc/pattern.hpp"

namespace manidisc {
namespace {

constexpr double kPi = std::numbers::pi;

std::filesystem::path TmpDir() {
    const std::filesystem::path dir = std::filesystem::path(MANIDISC_TEST_TMP) / "pattern";
    std::filesystem::create_directories(dir);
    return dir;
}

Raster SinglePixel(std::size_t w, std::size_t h, std::size_t row, std::size_t col) {
    Raster r{w, h, std::vector<double>(w * h, 0.0)};
    r.at(row, col) = 3.0;
    return r;
}

double MaxAbsDiff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

TEST(Rasterize, IdentityIsNormalizedPattern) {
    const Raster pat = SyntheticPattern("blobs", 9, 9, 3.5);
    const auto out = RasterizePattern(pat, 0.0, 0.0, 0.0, 9, 9);
    double norm = 0.0;
    for (double v : pat.pixels) norm += v * v;
    norm = std::sqrt(norm);
    for (std::size_t k = 0; k < out.size(); ++k) EXPECT_NEAR(out[k], pat.pixels[k] / norm, 1e-15);
}

TEST(Rasterize, IntegerShiftMovesSinglePixelExactly) {
    const Raster pat = SinglePixel(7, 7, 3, 3);
    const auto out = RasterizePattern(pat, 0.0, 1.0, 0.0, 7, 7);
    for (std::size_t r = 0; r < 7; ++r) {
        for (std::size_t c = 0; c < 7; ++c) {
            EXPECT_EQ(out[r * 7 + c], (r == 3 && c == 4) ? 1.0 : 0.0);
        }
    }
    const auto down = RasterizePattern(pat, 0.0, 0.0, -2.0, 7, 7);
    EXPECT_EQ(down[1 * 7 + 3], 1.0);
}

TEST(Rasterize, PatternCentredOnLargerCanvas) {
    const Raster pat = SinglePixel(3, 3, 1, 1);
    const auto out = RasterizePattern(pat, 0.0, 0.0, 0.0, 9, 9);
    EXPECT_EQ(out[4 * 9 + 4], 1.0);
}

TEST(Rasterize, DiskIsInvariantUnderQuarterTurns) {
    const Raster disk = SyntheticPattern("disk", 16, 16, 6.0);
    const auto base = RasterizePattern(disk, 0.0, 0.0, 0.0, 16, 16);
    for (double psi : {kPi / 2, kPi, -kPi / 2}) {
        EXPECT_LT(MaxAbsDiff(RasterizePattern(disk, psi, 0.0, 0.0, 16, 16), base), 1e-6) << psi;
    }
}

TEST(Rasterize, DiskAtArbitraryAngleWithinBilinearErrorBound) {
    // Bilinear resampling error is at most h^2/8 (|f_xx| + |f_yy|) with h = 1;
    // the second differences of the raster bound the curvature.
    const Raster disk = SyntheticPattern("disk", 16, 16, 6.0);
    double norm = 0.0;
    double curvature = 0.0;
    for (double v : disk.pixels) norm += v * v;
    norm = std::sqrt(norm);
    for (std::size_t r = 1; r + 1 < 16; ++r) {
        for (std::size_t c = 1; c + 1 < 16; ++c) {
            const double fxx = disk.at(r, c - 1) - 2 * disk.at(r, c) + disk.at(r, c + 1);
            const double fyy = disk.at(r - 1, c) - 2 * disk.at(r, c) + disk.at(r + 1, c);
            curvature = std::max(curvature, std::abs(fxx) + std::abs(fyy));
        }
    }
    const double bound = 2.0 * curvature / 8.0 / norm;  // two resamplings: reference grid and rotated
    const auto base = RasterizePattern(disk, 0.0, 0.0, 0.0, 16, 16);
    for (double psi : {0.1, 0.7, 1.3, -2.2, 3.0}) {
        EXPECT_LT(MaxAbsDiff(RasterizePattern(disk, psi, 0.0, 0.0, 16, 16), base), bound) << psi;
    }
}

TEST(Rasterize, OverflowThrowsDomainError) {
    const Raster pat = SinglePixel(5, 5, 2, 4);
    EXPECT_THROW(RasterizePattern(pat, 0.0, 1.0, 0.0, 5, 5), DomainError);
    EXPECT_NO_THROW(RasterizePattern(pat, 0.0, -1.0, 0.0, 5, 5));
}

TEST(Rasterize, RotationIsCounterClockwiseInPixelFrame) {
    // q = R(psi) p + t: a pixel right of the centre goes below it at psi = pi/2
    // (y axis points down the rows).
    const Raster pat = SinglePixel(5, 5, 2, 4);
    const auto out = RasterizePattern(pat, kPi / 2, 0.0, 0.0, 5, 5);
    EXPECT_NEAR(out[4 * 5 + 2], 1.0, 1e-12);
}

TEST(PatternRenderer, RejectsDegeneratePatterns) {
    EXPECT_THROW(PatternRenderer(Raster{3, 3, std::vector<double>(9, 0.0)}, 3, 3), UsageError);
    EXPECT_THROW(PatternRenderer(Raster{0, 0, {}}, 3, 3), UsageError);
    Raster neg{2, 1, {1.0, -1.0}};
    EXPECT_THROW(PatternRenderer(neg, 2, 1), UsageError);
    EXPECT_THROW(PatternRenderer(SinglePixel(3, 3, 1, 1), 0, 3), UsageError);
}

TEST(PatternRenderer, SupportRadiusAndFit) {
    const PatternRenderer r(SinglePixel(5, 5, 2, 4), 5, 5);
    EXPECT_DOUBLE_EQ(r.support_radius(), 2.0);
    EXPECT_TRUE(r.Fits(0.0, 0.0, 0.0));
    EXPECT_FALSE(r.Fits(0.0, 0.5, 0.0));
    EXPECT_TRUE(r.Fits(kPi / 3, 0.0, 0.0));
}

TEST(Pgm, RoundTripEightBit) {
    Raster img{4, 3, {0, 10, 20, 30, 40, 50, 60, 70, 80, 90, 100, 255}};
    const auto path = TmpDir() / "roundtrip.pgm";
    WritePgm(path, img);
    const Raster back = ReadPgm(path);
    EXPECT_EQ(back.width, 4u);
    EXPECT_EQ(back.height, 3u);
    EXPECT_EQ(back.pixels, img.pixels);
}

TEST(Pgm, ReadsCommentsAndSixteenBit) {
    const auto path = TmpDir() / "wide.pgm";
    {
        std::ofstream out(path, std::ios::binary);
        out << "P5\n# a comment\n2 1\n# another\n65535\n";
        const unsigned char data[] = {0x01, 0x00, 0xff, 0xff};
        out.write(reinterpret_cast<const char*>(data), 4);
    }
    const Raster img = ReadPgm(path);
    EXPECT_EQ(img.pixels, (std::vector<double>{256.0, 65535.0}));
}

TEST(Pgm, RejectsTruncatedOrForeignFiles) {
    const auto path = TmpDir() / "bad.pgm";
    {
        std::ofstream out(path, std::ios::binary);
        out << "P5\n4 4\n255\nabc";
    }
    EXPECT_THROW(ReadPgm(path), UsageError);
    {
        std::ofstream out(path, std::ios::binary);
        out << "P2\n1 1\n255\n7\n";
    }
    EXPECT_THROW(ReadPgm(path), UsageError);
    EXPECT_THROW(ReadPgm(TmpDir() / "missing.pgm"), UsageError);
}

TEST(CsvMatrix, ReadsCommaAndWhitespaceAndRejectsRagged) {
    const auto path = TmpDir() / "pattern.csv";
    {
        std::ofstream out(path);
        out << "0, 1, 2\n3 4 5\n\n";
    }
    const Raster img = LoadPattern(path);
    EXPECT_EQ(img.width, 3u);
    EXPECT_EQ(img.height, 2u);
    EXPECT_EQ(img.at(1, 2), 5.0);
    {
        std::ofstream out(path);
        out << "0,1\n2\n";
    }
    EXPECT_THROW(ReadCsvMatrix(path), UsageError);
    {
        std::ofstream out(path);
        out << "0,x\n";
    }
    EXPECT_THROW(ReadCsvMatrix(path), UsageError);
}

TEST(SyntheticPattern, SupportStaysWithinRadius) {
    for (const char* name : {"disk", "bar", "corner", "blobs", "triangle", "ring", "cross"}) {
        const Raster pat = SyntheticPattern(name, 16, 16, 5.0);
        const PatternRenderer r(pat, 16, 16);
        EXPECT_LT(r.support_radius(), 5.0) << name;
    }
    EXPECT_THROW(SyntheticPattern("nope", 8, 8, 2.0), UsageError);
    EXPECT_THROW(SyntheticPattern("disk", 8, 8, 0.0), UsageError);
}

}  // namespace
}  // namespace manidisc
