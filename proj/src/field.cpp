#include "mapper/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <png.h>

namespace mapper {

namespace {

constexpr double kPi = std::numbers::pi;

void normalize_unit(std::vector<double>& v) {
    auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    double min = *lo, max = *hi;
    if (max <= min) {
        std::fill(v.begin(), v.end(), 0.0);
        return;
    }
    double inv = 1.0 / (max - min);
    for (double& x : v) x = (x - min) * inv;
}

// Classic gradient noise: hashed lattice directions, quintic fade, bilinear mix.
class PerlinLattice {
  public:
    explicit PerlinLattice(std::uint32_t seed) {
        for (int i = 0; i < 256; ++i) perm_[i] = static_cast<std::uint8_t>(i);
        std::mt19937 rng(seed);
        std::shuffle(perm_, perm_ + 256, rng);
        for (int i = 0; i < 256; ++i) perm_[256 + i] = perm_[i];
    }

    double at(double x, double y) const {
        int x0 = static_cast<int>(std::floor(x));
        int y0 = static_cast<int>(std::floor(y));
        double fx = x - x0;
        double fy = y - y0;
        double u = fade(fx);
        double v = fade(fy);
        double n00 = dot_grad(x0, y0, fx, fy);
        double n10 = dot_grad(x0 + 1, y0, fx - 1, fy);
        double n01 = dot_grad(x0, y0 + 1, fx, fy - 1);
        double n11 = dot_grad(x0 + 1, y0 + 1, fx - 1, fy - 1);
        double nx0 = n00 + u * (n10 - n00);
        double nx1 = n01 + u * (n11 - n01);
        return nx0 + v * (nx1 - nx0);
    }

  private:
    static double fade(double t) { return t * t * t * (t * (t * 6 - 15) + 10); }

    double dot_grad(int ix, int iy, double dx, double dy) const {
        int h = perm_[(perm_[ix & 255] + iy) & 255];
        double angle = h * (2.0 * kPi / 256.0);
        return std::cos(angle) * dx + std::sin(angle) * dy;
    }

    std::uint8_t perm_[512];
};

ScalarField make_field(int size, const std::vector<double>& values) {
    return ScalarField(size, size, values);
}

ScalarField gen_perlin(int size, std::uint32_t seed) {
    PerlinLattice lattice(seed);
    std::vector<double> v(static_cast<std::size_t>(size) * size);
    const double cell = 8.0;
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x)
            v[static_cast<std::size_t>(y) * size + x] = lattice.at(x / cell, y / cell);
    normalize_unit(v);
    return make_field(size, v);
}

ScalarField gen_saddle(int size) {
    std::vector<double> v(static_cast<std::size_t>(size) * size);
    for (int i = 0; i < size; ++i) {
        double y = -1.0 + 2.0 * i / (size - 1);
        for (int j = 0; j < size; ++j) {
            double x = -1.0 + 2.0 * j / (size - 1);
            v[static_cast<std::size_t>(i) * size + j] = (x * x - y * y + 1.0) / 2.0;
        }
    }
    return make_field(size, v);
}

// Two asymmetric peaks over a single sloped valley. The profile is chosen so
// the discrete field has exactly four critical values at any size >= 8:
// a unique minimum at the base of the dip column, one saddle at the top of
// that column, and two peaks of different heights at the upper corners.
// Per-pixel value steps stay below a fifth of the smallest critical gap,
// which keeps every cover band populated on 64x64 grids and larger.
ScalarField gen_two_peaks(int size) {
    std::vector<double> v(static_cast<std::size_t>(size) * size);
    for (int i = 0; i < size; ++i) {
        double t = static_cast<double>(i) / (size - 1);
        for (int j = 0; j < size; ++j) {
            double u = static_cast<double>(j) / (size - 1);
            double g;
            if (u <= 0.5) {
                double c = std::cos(kPi * u);
                g = 0.55 * c * c;
            } else {
                double s = std::sin(kPi * (u - 0.5));
                g = 0.95 * s * s;
            }
            v[static_cast<std::size_t>(i) * size + j] = g + 0.5 * t;
        }
    }
    normalize_unit(v);
    return make_field(size, v);
}

// Annulus drawn at constant color, multiplied by a horizontal ramp; the
// background stays at zero, so the field is discontinuous along the ring.
ScalarField gen_ring_gradient(int size) {
    std::vector<double> v(static_cast<std::size_t>(size) * size, 0.0);
    double c = (size - 1) / 2.0;
    double r_in = 0.30 * size;
    double r_out = 0.42 * size;
    for (int i = 0; i < size; ++i)
        for (int j = 0; j < size; ++j) {
            double r = std::hypot(j - c, i - c);
            if (r >= r_in && r <= r_out)
                v[static_cast<std::size_t>(i) * size + j] = 0.1 + 0.9 * j / (size - 1);
        }
    normalize_unit(v);
    return make_field(size, v);
}

ScalarField gen_bench2(int size) {
    std::vector<double> v(static_cast<std::size_t>(size) * size);
    double c = (size - 1) / 2.0;
    for (int i = 0; i < size; ++i)
        for (int j = 0; j < size; ++j) {
            double r = std::hypot(j - c, i - c) / (size - 1);
            v[static_cast<std::size_t>(i) * size + j] = std::sin(2.0 * kPi * 4.0 * r);
        }
    normalize_unit(v);
    return make_field(size, v);
}

ScalarField gen_bench3(int size) {
    std::vector<double> v(static_cast<std::size_t>(size) * size, 0.0);
    double sigma = size / 20.0;
    double inv2s2 = 1.0 / (2.0 * sigma * sigma);
    for (int by = 0; by < 4; ++by)
        for (int bx = 0; bx < 4; ++bx) {
            double cx = (bx + 0.5) * size / 4.0;
            double cy = (by + 0.5) * size / 4.0;
            for (int i = 0; i < size; ++i)
                for (int j = 0; j < size; ++j) {
                    double d2 = (j - cx) * (j - cx) + (i - cy) * (i - cy);
                    v[static_cast<std::size_t>(i) * size + j] += std::exp(-d2 * inv2s2);
                }
        }
    normalize_unit(v);
    return make_field(size, v);
}

ScalarField gen_bench4(int size) {
    std::vector<double> v(static_cast<std::size_t>(size) * size);
    for (int i = 0; i < size; ++i) {
        double y = static_cast<double>(i) / (size - 1);
        for (int j = 0; j < size; ++j) {
            double x = static_cast<double>(j) / (size - 1);
            v[static_cast<std::size_t>(i) * size + j] = std::sin(8.0 * kPi * x) * std::sin(8.0 * kPi * y);
        }
    }
    normalize_unit(v);
    return make_field(size, v);
}

bool has_suffix(const std::string& s, const char* suf) {
    std::string lower(s);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    std::size_t n = std::strlen(suf);
    return lower.size() >= n && lower.compare(lower.size() - n, n, suf) == 0;
}

int pgm_next_int(std::istream& in) {
    // Skips whitespace and '#' comments per the netpbm grammar.
    while (true) {
        int c = in.peek();
        if (c == EOF) throw FormatError("pgm: unexpected end of file");
        if (c == '#') {
            std::string line;
            std::getline(in, line);
            continue;
        }
        if (std::isspace(c)) {
            in.get();
            continue;
        }
        break;
    }
    int value = 0;
    if (!(in >> value)) throw FormatError("pgm: malformed integer");
    return value;
}

ScalarField load_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open file: " + path);
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (magic[0] != 'P' || (magic[1] != '2' && magic[1] != '5'))
        throw FormatError("pgm: bad magic in " + path);
    bool ascii = magic[1] == '2';
    int width = pgm_next_int(in);
    int height = pgm_next_int(in);
    int maxval = pgm_next_int(in);
    if (width < 1 || height < 1 || maxval < 1 || maxval > 65535)
        throw FormatError("pgm: bad header in " + path);
    std::vector<double> values(static_cast<std::size_t>(width) * height);
    if (ascii) {
        for (auto& v : values) v = pgm_next_int(in) / static_cast<double>(maxval);
    } else {
        in.get(); // single whitespace after maxval
        int bytes = maxval > 255 ? 2 : 1;
        std::vector<unsigned char> raw(values.size() * bytes);
        in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
        if (static_cast<std::size_t>(in.gcount()) != raw.size())
            throw FormatError("pgm: truncated pixel data in " + path);
        for (std::size_t i = 0; i < values.size(); ++i) {
            int sample = bytes == 1 ? raw[i] : (raw[2 * i] << 8 | raw[2 * i + 1]);
            values[i] = sample / static_cast<double>(maxval);
        }
    }
    return ScalarField(width, height, std::move(values));
}

ScalarField load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open file: " + path);
    std::vector<double> values;
    int width = -1, height = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        int count = 0;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            char* end = nullptr;
            double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str()) throw FormatError("csv: bad number '" + cell + "' in " + path);
            values.push_back(v);
            ++count;
        }
        if (width < 0)
            width = count;
        else if (count != width)
            throw FormatError("csv: ragged rows in " + path);
        ++height;
    }
    if (width < 1 || height < 1) throw FormatError("csv: empty file " + path);
    return ScalarField(width, height, std::move(values));
}

struct PngReadCloser {
    png_structp png = nullptr;
    png_infop info = nullptr;
    std::FILE* fp = nullptr;
    ~PngReadCloser() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        if (fp) std::fclose(fp);
    }
};

ScalarField load_png(const std::string& path, Channel channel) {
    PngReadCloser ctx;
    ctx.fp = std::fopen(path.c_str(), "rb");
    if (!ctx.fp) throw FormatError("cannot open file: " + path);
    unsigned char sig[8];
    if (std::fread(sig, 1, 8, ctx.fp) != 8 || png_sig_cmp(sig, 0, 8))
        throw FormatError("png: bad signature in " + path);
    ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!ctx.png) throw FormatError("png: init failure");
    ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info) throw FormatError("png: init failure");
    if (setjmp(png_jmpbuf(ctx.png))) throw FormatError("png: corrupt or truncated file " + path);
    png_init_io(ctx.png, ctx.fp);
    png_set_sig_bytes(ctx.png, 8);
    png_read_info(ctx.png, ctx.info);

    png_uint_32 width = png_get_image_width(ctx.png, ctx.info);
    png_uint_32 height = png_get_image_height(ctx.png, ctx.info);
    int bit_depth = png_get_bit_depth(ctx.png, ctx.info);
    int color_type = png_get_color_type(ctx.png, ctx.info);
    if (bit_depth == 16) throw FormatError("png: 16-bit depth not supported: " + path);
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(ctx.png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(ctx.png);
    png_set_strip_alpha(ctx.png);
    png_read_update_info(ctx.png, ctx.info);
    color_type = png_get_color_type(ctx.png, ctx.info);

    int channels = color_type == PNG_COLOR_TYPE_RGB ? 3 : 1;
    if (color_type != PNG_COLOR_TYPE_GRAY && color_type != PNG_COLOR_TYPE_RGB)
        throw FormatError("png: unsupported color type in " + path);

    std::vector<unsigned char> row(static_cast<std::size_t>(width) * channels);
    std::vector<double> values(static_cast<std::size_t>(width) * height);
    for (png_uint_32 y = 0; y < height; ++y) {
        png_read_row(ctx.png, row.data(), nullptr);
        for (png_uint_32 x = 0; x < width; ++x) {
            double v;
            if (channels == 1) {
                v = row[x] / 255.0;
            } else {
                double r = row[3 * x], g = row[3 * x + 1], b = row[3 * x + 2];
                switch (channel) {
                    case Channel::red: v = r / 255.0; break;
                    case Channel::green: v = g / 255.0; break;
                    case Channel::blue: v = b / 255.0; break;
                    case Channel::raw:
                        throw FormatError("png: raw channel requires grayscale input: " + path);
                    case Channel::luminance:
                    default: v = (0.2126 * r + 0.7152 * g + 0.0722 * b) / 255.0; break;
                }
            }
            values[static_cast<std::size_t>(y) * width + x] = v;
        }
    }
    png_read_end(ctx.png, nullptr);
    return ScalarField(static_cast<int>(width), static_cast<int>(height), std::move(values));
}

} // namespace

ScalarField::ScalarField(int width, int height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
    if (width_ < 1 || height_ < 1)
        throw DimensionError("field dimensions must be at least 1x1");
    if (values_.size() != static_cast<std::size_t>(width_) * height_)
        throw DimensionError("value count does not match width*height");
    for (double v : values_)
        if (!std::isfinite(v)) throw DataError("field contains a non-finite value");
}

ScalarField from_values(int width, int height, std::vector<double> values) {
    return ScalarField(width, height, std::move(values));
}

std::pair<double, double> value_range(const ScalarField& field) {
    auto [lo, hi] = std::minmax_element(field.values().begin(), field.values().end());
    return {*lo, *hi};
}

void neighbors_into(int width, int height, std::int32_t pixel, Connectivity conn,
                    std::vector<std::int32_t>& out) {
    int x = pixel % width;
    int y = pixel / width;
    if (y > 0) out.push_back(pixel - width);
    if (x > 0) out.push_back(pixel - 1);
    if (x + 1 < width) out.push_back(pixel + 1);
    if (y + 1 < height) out.push_back(pixel + width);
    if (conn == Connectivity::eight) {
        if (y > 0 && x > 0) out.push_back(pixel - width - 1);
        if (y > 0 && x + 1 < width) out.push_back(pixel - width + 1);
        if (y + 1 < height && x > 0) out.push_back(pixel + width - 1);
        if (y + 1 < height && x + 1 < width) out.push_back(pixel + width + 1);
    }
}

std::vector<std::int32_t> neighbors(const ScalarField& field, std::int32_t pixel, Connectivity conn) {
    if (pixel < 0 || pixel >= field.size())
        throw BoundsError("pixel index out of range");
    std::vector<std::int32_t> out;
    out.reserve(8);
    neighbors_into(field.width(), field.height(), pixel, conn, out);
    return out;
}

ScalarField generate_pattern(PatternKind kind, int size, std::uint32_t seed) {
    if (size < 2) throw DimensionError("pattern size must be at least 2");
    switch (kind) {
        case PatternKind::perlin: return gen_perlin(size, seed);
        case PatternKind::saddle: return gen_saddle(size);
        case PatternKind::two_peaks: return gen_two_peaks(size);
        case PatternKind::ring_gradient: return gen_ring_gradient(size);
        case PatternKind::bench1: return gen_perlin(size, seed);
        case PatternKind::bench2: return gen_bench2(size);
        case PatternKind::bench3: return gen_bench3(size);
        case PatternKind::bench4: return gen_bench4(size);
    }
    throw ParameterError("unknown pattern kind");
}

ScalarField load_field(const std::string& path, Channel channel) {
    if (has_suffix(path, ".pgm")) return load_pgm(path);
    if (has_suffix(path, ".png")) return load_png(path, channel);
    if (has_suffix(path, ".csv")) return load_csv(path);
    // Fall back to content sniffing for extension-less paths.
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw FormatError("cannot open file: " + path);
    char c0 = 0;
    probe.get(c0);
    if (c0 == 'P') return load_pgm(path);
    if (static_cast<unsigned char>(c0) == 0x89) return load_png(path, channel);
    return load_csv(path);
}

void save_csv(const ScalarField& field, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write file: " + path);
    char buf[64];
    for (int y = 0; y < field.height(); ++y) {
        for (int x = 0; x < field.width(); ++x) {
            std::snprintf(buf, sizeof buf, "%.17g", field.at(x, y));
            out << buf;
            out << (x + 1 < field.width() ? ',' : '\n');
        }
    }
}

void save_pgm(const ScalarField& field, const std::string& path) {
    auto [lo, hi] = value_range(field);
    double scale = hi > lo ? 65535.0 / (hi - lo) : 0.0;
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write file: " + path);
    out << "P2\n" << field.width() << ' ' << field.height() << "\n65535\n";
    for (int y = 0; y < field.height(); ++y) {
        for (int x = 0; x < field.width(); ++x) {
            int q = static_cast<int>(std::lround((field.at(x, y) - lo) * scale));
            out << q << (x + 1 < field.width() ? ' ' : '\n');
        }
    }
}

PatternKind pattern_from_name(const std::string& name) {
    if (name == "perlin") return PatternKind::perlin;
    if (name == "saddle") return PatternKind::saddle;
    if (name == "two_peaks") return PatternKind::two_peaks;
    if (name == "ring_gradient") return PatternKind::ring_gradient;
    if (name == "bench1") return PatternKind::bench1;
    if (name == "bench2") return PatternKind::bench2;
    if (name == "bench3") return PatternKind::bench3;
    if (name == "bench4") return PatternKind::bench4;
    throw ParameterError("unknown pattern name: " + name);
}

const char* pattern_name(PatternKind kind) {
    switch (kind) {
        case PatternKind::perlin: return "perlin";
        case PatternKind::saddle: return "saddle";
        case PatternKind::two_peaks: return "two_peaks";
        case PatternKind::ring_gradient: return "ring_gradient";
        case PatternKind::bench1: return "bench1";
        case PatternKind::bench2: return "bench2";
        case PatternKind::bench3: return "bench3";
        case PatternKind::bench4: return "bench4";
    }
    return "unknown";
}

} // namespace mapper
