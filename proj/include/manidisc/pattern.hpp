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
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace manidisc {

/// Greyscale image, row-major, nonnegative intensities.
struct Raster {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<double> pixels;

    double at(std::size_t row, std::size_t col) const { return pixels[row * width + col]; }
    double& at(std::size_t row, std::size_t col) { return pixels[row * width + col]; }
};

/// Renders rotated and translated copies of a pattern onto a zero canvas.
///
/// The pattern centre ((w-1)/2, (h-1)/2) is placed at the canvas centre,
/// rotated by psi (radians, counter-clockwise in x-right/y-down pixel
/// coordinates, i.e. q = R(psi) p + t) and shifted by (tx, ty) pixels. Each
/// canvas pixel pulls its value from the pattern with bilinear interpolation,
/// zero outside the pattern raster. The flattened canvas is scaled to unit
/// Euclidean norm.
class PatternRenderer {
 public:
    /// Throws UsageError for an empty, negative or all-zero pattern.
    PatternRenderer(Raster pattern, std::size_t canvas_width, std::size_t canvas_height);

    std::size_t canvas_width() const { return canvas_width_; }
    std::size_t canvas_height() const { return canvas_height_; }
    std::size_t ambient_dim() const { return canvas_width_ * canvas_height_; }

    /// Largest distance of a nonzero pattern pixel centre from the pattern centre.
    double support_radius() const { return support_radius_; }

    /// True when every nonzero pattern pixel centre lands on the canvas.
    bool Fits(double psi, double tx, double ty) const;

    /// Throws DomainError if the transformed pattern leaves the canvas.
    void Render(double psi, double tx, double ty, std::span<double> out) const;

 private:
    Raster pattern_;
    std::size_t canvas_width_;
    std::size_t canvas_height_;
    std::vector<std::pair<double, double>> support_;  // nonzero pixel offsets from the centre
    double support_radius_ = 0.0;
};

std::vector<double> RasterizePattern(const Raster& pattern, double psi, double tx, double ty,
                                     std::size_t canvas_width, std::size_t canvas_height);

/// Binary PGM (P5), 8- or 16-bit. Intensities are returned unscaled.
Raster ReadPgm(const std::filesystem::path& path);
/// Writes values scaled so the maximum maps to 255.
void WritePgm(const std::filesystem::path& path, const Raster& image);

/// Comma- or whitespace-separated matrix of reals, one image row per line.
Raster ReadCsvMatrix(const std::filesystem::path& path);

/// Dispatches on extension: .pgm -> ReadPgm, anything else -> ReadCsvMatrix.
Raster LoadPattern(const std::filesystem::path& path);

/// Smooth procedural test patterns ("disk", "bar", "corner", "blobs",
/// "triangle", "ring", "cross") whose support lies within `support_radius`
/// pixels of the image centre.
Raster SyntheticPattern(std::string_view name, std::size_t width, std::size_t height, double support_radius);

}  // namespace manidisc
