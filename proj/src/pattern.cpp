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

#include "manidisc/pattern.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "manidisc/errors.hpp"
#include "manidisc/simd/kernels.hpp"

namespace manidisc {

namespace {

constexpr double kFitSlack = 1e-9;

double Bilinear(const Raster& img, double x, double y) {
    const double fx0 = std::floor(x);
    const double fy0 = std::floor(y);
    const double fx = x - fx0;
    const double fy = y - fy0;
    const auto x0 = static_cast<long>(fx0);
    const auto y0 = static_cast<long>(fy0);
    const auto w = static_cast<long>(img.width);
    const auto h = static_cast<long>(img.height);
    auto value = [&](long col, long row) {
        if (col < 0 || row < 0 || col >= w || row >= h) {
            return 0.0;
        }
        return img.pixels[static_cast<std::size_t>(row * w + col)];
    };
    double result = (1.0 - fx) * (1.0 - fy) * value(x0, y0);
    if (fx != 0.0) {
        result += fx * (1.0 - fy) * value(x0 + 1, y0);
    }
    if (fy != 0.0) {
        result += (1.0 - fx) * fy * value(x0, y0 + 1);
        if (fx != 0.0) {
            result += fx * fy * value(x0 + 1, y0 + 1);
        }
    }
    return result;
}

}  // namespace

PatternRenderer::PatternRenderer(Raster pattern, std::size_t canvas_width, std::size_t canvas_height)
    : pattern_(std::move(pattern)), canvas_width_(canvas_width), canvas_height_(canvas_height) {
    if (pattern_.width == 0 || pattern_.height == 0 || pattern_.pixels.size() != pattern_.width * pattern_.height) {
        throw UsageError("pattern raster is empty or has inconsistent size");
    }
    if (canvas_width_ == 0 || canvas_height_ == 0) {
        throw UsageError("canvas must be non-empty");
    }
    const double cx = (static_cast<double>(pattern_.width) - 1.0) / 2.0;
    const double cy = (static_cast<double>(pattern_.height) - 1.0) / 2.0;
    for (std::size_t r = 0; r < pattern_.height; ++r) {
        for (std::size_t c = 0; c < pattern_.width; ++c) {
            const double v = pattern_.at(r, c);
            if (!(v >= 0.0) || !std::isfinite(v)) {
                throw UsageError("pattern intensities must be finite and nonnegative");
            }
            if (v > 0.0) {
                const double px = static_cast<double>(c) - cx;
                const double py = static_cast<double>(r) - cy;
                support_.emplace_back(px, py);
                support_radius_ = std::max(support_radius_, std::hypot(px, py));
            }
        }
    }
    if (support_.empty()) {
        throw UsageError("pattern is all zero; unit-norm normalisation is undefined");
    }
}

bool PatternRenderer::Fits(double psi, double tx, double ty) const {
    const double c = std::cos(psi);
    const double s = std::sin(psi);
    const double ccx = (static_cast<double>(canvas_width_) - 1.0) / 2.0;
    const double ccy = (static_cast<double>(canvas_height_) - 1.0) / 2.0;
    const double max_x = static_cast<double>(canvas_width_) - 1.0 + kFitSlack;
    const double max_y = static_cast<double>(canvas_height_) - 1.0 + kFitSlack;
    for (const auto& [px, py] : support_) {
        const double qx = c * px - s * py + tx + ccx;
        const double qy = s * px + c * py + ty + ccy;
        if (qx < -kFitSlack || qy < -kFitSlack || qx > max_x || qy > max_y) {
            return false;
        }
    }
    return true;
}

void PatternRenderer::Render(double psi, double tx, double ty, std::span<double> out) const {
    if (out.size() != ambient_dim()) {
        throw UsageError("render target has wrong size");
    }
    if (!Fits(psi, tx, ty)) {
        throw DomainError("transformed pattern overflows the canvas");
    }
    const double c = std::cos(psi);
    const double s = std::sin(psi);
    const double ccx = (static_cast<double>(canvas_width_) - 1.0) / 2.0;
    const double ccy = (static_cast<double>(canvas_height_) - 1.0) / 2.0;
    const double pcx = (static_cast<double>(pattern_.width) - 1.0) / 2.0;
    const double pcy = (static_cast<double>(pattern_.height) - 1.0) / 2.0;
    for (std::size_t r = 0; r < canvas_height_; ++r) {
        const double qy = static_cast<double>(r) - ccy - ty;
        for (std::size_t col = 0; col < canvas_width_; ++col) {
            const double qx = static_cast<double>(col) - ccx - tx;
            // p = R(-psi) (q - t)
            const double px = c * qx + s * qy;
            const double py = -s * qx + c * qy;
            out[r * canvas_width_ + col] = Bilinear(pattern_, px + pcx, py + pcy);
        }
    }
    const double norm2 = simd::Dot(out, out);
    if (!(norm2 > 0.0)) {
        throw DomainError("rendered pattern vanished on the canvas");
    }
    simd::Scale(1.0 / std::sqrt(norm2), out);
}

std::vector<double> RasterizePattern(const Raster& pattern, double psi, double tx, double ty,
                                     std::size_t canvas_width, std::size_t canvas_height) {
    PatternRenderer renderer(pattern, canvas_width, canvas_height);
    std::vector<double> out(renderer.ambient_dim());
    renderer.Render(psi, tx, ty, out);
    return out;
}

namespace {

// Reads the next header token, skipping whitespace and '#' comments.
std::string NextPnmToken(std::istream& in) {
    std::string token;
    int ch = in.get();
    while (ch != EOF) {
        if (ch == '#') {
            while (ch != EOF && ch != '\n') {
                ch = in.get();
            }
        } else if (std::isspace(ch)) {
            if (!token.empty()) {
                break;
            }
        } else {
            token.push_back(static_cast<char>(ch));
        }
        ch = in.get();
    }
    return token;
}

std::size_t ParseHeaderNumber(const std::string& token, const std::filesystem::path& path) {
    try {
        std::size_t pos = 0;
        const unsigned long v = std::stoul(token, &pos);
        if (pos != token.size()) {
            throw std::invalid_argument(token);
        }
        return v;
    } catch (const std::exception&) {
        throw UsageError("malformed PGM header in " + path.string());
    }
}

}  // namespace

Raster ReadPgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw UsageError("cannot open " + path.string());
    }
    if (NextPnmToken(in) != "P5") {
        throw UsageError(path.string() + " is not a binary PGM (P5)");
    }
    Raster img;
    img.width = ParseHeaderNumber(NextPnmToken(in), path);
    img.height = ParseHeaderNumber(NextPnmToken(in), path);
    const std::size_t maxval = ParseHeaderNumber(NextPnmToken(in), path);
    if (img.width == 0 || img.height == 0 || maxval == 0 || maxval > 65535) {
        throw UsageError("unsupported PGM dimensions or maxval in " + path.string());
    }
    const std::size_t bytes_per_pixel = maxval < 256 ? 1 : 2;
    std::vector<unsigned char> raw(img.width * img.height * bytes_per_pixel);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (in.gcount() != static_cast<std::streamsize>(raw.size())) {
        throw UsageError("truncated PGM data in " + path.string());
    }
    img.pixels.resize(img.width * img.height);
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        img.pixels[i] = bytes_per_pixel == 1 ? raw[i] : static_cast<double>((raw[2 * i] << 8) | raw[2 * i + 1]);
    }
    return img;
}

void WritePgm(const std::filesystem::path& path, const Raster& image) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw UsageError("cannot write " + path.string());
    }
    const double peak = image.pixels.empty() ? 0.0 : *std::max_element(image.pixels.begin(), image.pixels.end());
    out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
    for (double v : image.pixels) {
        const double scaled = peak > 0.0 ? std::clamp(v / peak, 0.0, 1.0) * 255.0 : 0.0;
        out.put(static_cast<char>(static_cast<unsigned char>(std::lround(scaled))));
    }
}

Raster ReadCsvMatrix(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot open " + path.string());
    }
    Raster img;
    std::string line;
    while (std::getline(in, line)) {
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        std::vector<double> row;
        double v = 0.0;
        while (fields >> v) {
            row.push_back(v);
        }
        if (!fields.eof()) {
            throw UsageError("non-numeric entry in " + path.string());
        }
        if (row.empty()) {
            continue;
        }
        if (img.width == 0) {
            img.width = row.size();
        } else if (row.size() != img.width) {
            throw UsageError("ragged matrix in " + path.string());
        }
        img.pixels.insert(img.pixels.end(), row.begin(), row.end());
        ++img.height;
    }
    if (img.height == 0) {
        throw UsageError("empty matrix in " + path.string());
    }
    return img;
}

Raster LoadPattern(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char ch) { return std::tolower(ch); });
    return ext == ".pgm" ? ReadPgm(path) : ReadCsvMatrix(path);
}

namespace {

double Gauss(double x, double y, double cx, double cy, double sx, double sy) {
    const double dx = (x - cx) / sx;
    const double dy = (y - cy) / sy;
    return std::exp(-0.5 * (dx * dx + dy * dy));
}

// Smooth shape in units of the support radius (u, v in [-1, 1]).
double ShapeValue(std::string_view name, double u, double v) {
    if (name == "disk") {
        return Gauss(u, v, 0.0, 0.0, 0.35, 0.35);
    }
    if (name == "bar") {
        return Gauss(u, v, 0.1, 0.0, 0.45, 0.14);
    }
    if (name == "corner") {
        return std::max(Gauss(u, v, 0.15, -0.3, 0.4, 0.13), Gauss(u, v, -0.2, 0.1, 0.13, 0.4));
    }
    if (name == "blobs") {
        return Gauss(u, v, 0.35, 0.0, 0.22, 0.22) + 0.6 * Gauss(u, v, -0.3, 0.35, 0.15, 0.15);
    }
    if (name == "triangle") {
        return Gauss(u, v, 0.45, 0.0, 0.16, 0.16) + 0.8 * Gauss(u, v, -0.3, 0.4, 0.16, 0.16) +
               0.5 * Gauss(u, v, -0.3, -0.35, 0.16, 0.16);
    }
    if (name == "ring") {
        const double r = std::hypot(u - 0.05, v);
        return std::exp(-0.5 * std::pow((r - 0.5) / 0.12, 2.0)) * (1.0 + 0.5 * u);
    }
    if (name == "cross") {
        return std::max(Gauss(u, v, 0.0, 0.0, 0.5, 0.12), Gauss(u, v, 0.2, 0.0, 0.12, 0.35));
    }
    throw UsageError("unknown synthetic pattern: " + std::string(name));
}

}  // namespace

Raster SyntheticPattern(std::string_view name, std::size_t width, std::size_t height, double support_radius) {
    if (width == 0 || height == 0 || !(support_radius > 0.0)) {
        throw UsageError("synthetic pattern needs positive size and support radius");
    }
    Raster img{width, height, std::vector<double>(width * height, 0.0)};
    const double cx = (static_cast<double>(width) - 1.0) / 2.0;
    const double cy = (static_cast<double>(height) - 1.0) / 2.0;
    for (std::size_t r = 0; r < height; ++r) {
        for (std::size_t c = 0; c < width; ++c) {
            const double u = (static_cast<double>(c) - cx) / support_radius;
            const double v = (static_cast<double>(r) - cy) / support_radius;
            const double rr = u * u + v * v;
            if (rr >= 1.0) {
                continue;
            }
            // Window tapers the shape to zero at the support boundary.
            const double window = (1.0 - rr) * (1.0 - rr);
            img.at(r, c) = ShapeValue(name, u, v) * window;
        }
    }
    return img;
}

}  // namespace manidisc
