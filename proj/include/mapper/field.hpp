#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mapper/errors.hpp"

namespace mapper {

enum class Connectivity { four, eight };

enum class PatternKind {
    perlin,
    saddle,
    two_peaks,
    ring_gradient,
    bench1,
    bench2,
    bench3,
    bench4,
};

enum class Channel { luminance, red, green, blue, raw };

// A 2D scalar field sampled on a pixel grid, row-major. This is the domain X
// together with the height function f. Values are finite doubles; integer
// image formats are normalized to [0,1] on load.
class ScalarField {
  public:
    ScalarField(int width, int height, std::vector<double> values);

    int width() const { return width_; }
    int height() const { return height_; }
    std::int32_t size() const { return static_cast<std::int32_t>(values_.size()); }

    double at(std::int32_t pixel) const { return values_[pixel]; }
    double at(int x, int y) const { return values_[static_cast<std::int32_t>(y) * width_ + x]; }
    const std::vector<double>& values() const { return values_; }

    int x_of(std::int32_t pixel) const { return pixel % width_; }
    int y_of(std::int32_t pixel) const { return pixel / width_; }

  private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> values_;
};

ScalarField from_values(int width, int height, std::vector<double> values);

// min/max over all samples; degenerate (min==max) pairs are returned as-is.
std::pair<double, double> value_range(const ScalarField& field);

// In-bounds neighbors of a pixel in deterministic order: up, left, right,
// down, then up-left, up-right, down-left, down-right for eight-connectivity.
std::vector<std::int32_t> neighbors(const ScalarField& field, std::int32_t pixel, Connectivity conn);

// Appends neighbors to `out` without clearing it; avoids allocation in hot loops.
void neighbors_into(int width, int height, std::int32_t pixel, Connectivity conn,
                    std::vector<std::int32_t>& out);

// Deterministic synthetic fields, normalized into [0,1].
ScalarField generate_pattern(PatternKind kind, int size, std::uint32_t seed);

// Load a field from PGM (P2/P5), 8-bit PNG (gray or RGB) or CSV.
// Integer samples map affinely to [0,1]; CSV values are taken as-is.
ScalarField load_field(const std::string& path, Channel channel);

// Writers used by the CLI and the round-trip tests.
void save_csv(const ScalarField& field, const std::string& path);
void save_pgm(const ScalarField& field, const std::string& path); // 16-bit P2, quantized

PatternKind pattern_from_name(const std::string& name);
const char* pattern_name(PatternKind kind);

} // namespace mapper
