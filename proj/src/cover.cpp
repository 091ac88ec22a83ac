#include "mapper/cover.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

namespace mapper {

namespace {

std::pair<double, double> expand_degenerate(std::pair<double, double> range) {
    if (range.first == range.second)
        return {range.first - 0.5, range.second + 0.5};
    return range;
}

} // namespace

Cover uniform_cover(std::pair<double, double> range, int n_slices, double overlap_fraction) {
    if (n_slices < 1) throw ParameterError("n_slices must be positive");
    if (!(overlap_fraction > 0.0 && overlap_fraction < 0.5))
        throw ParameterError("overlap fraction must lie in (0, 0.5)");
    auto [a, b] = expand_degenerate(range);
    if (a > b) throw ParameterError("range min exceeds max");
    double w = (b - a) / n_slices;
    double eps = overlap_fraction * w;
    Cover cover;
    cover.style = CoverStyle::uniform;
    cover.has_uniform_params = true;
    cover.uniform_a = a;
    cover.uniform_width = w;
    cover.uniform_eps = eps;
    cover.intervals.reserve(n_slices);
    for (int i = 1; i <= n_slices; ++i) {
        double lo = a + (i - 1) * w - eps;
        double hi = a + i * w + eps;
        cover.intervals.push_back({lo, hi});
    }
    return cover;
}

std::pair<CoverPart, CoverPart> split_even_odd(const Cover& cover) {
    if (cover.style != CoverStyle::uniform && cover.style != CoverStyle::contour)
        throw UnsupportedStyleError("even/odd split applies to uniform and contour covers only");
    CoverPart even{&cover, false, {}};
    CoverPart odd{&cover, true, {}};
    for (int i = 0; i < cover.size(); ++i) {
        // 1-based parity: position 0 is U_1, an odd interval.
        if (i % 2 == 0)
            odd.indices.push_back(i);
        else
            even.indices.push_back(i);
    }
    return {std::move(even), std::move(odd)};
}

std::optional<int> locate(const CoverPart& part, double value) {
    const Cover& cover = *part.parent;
    if (cover.has_uniform_params) {
        // value lies in U_i  iff  (i-1)w - eps < value - a < i*w + eps.
        // With eps < w/2 at most two consecutive i qualify; parity picks one.
        double off = value - cover.uniform_a;
        double w = cover.uniform_width;
        double eps = cover.uniform_eps;
        int lo_i = static_cast<int>(std::floor((off - eps) / w)) + 1;
        for (int i = std::max(1, lo_i); i <= std::min(cover.size(), lo_i + 1); ++i) {
            int pos = i - 1;
            bool pos_is_odd = pos % 2 == 0;
            if (pos_is_odd == part.odd && cover.intervals[pos].contains(value)) return pos;
        }
        return std::nullopt;
    }
    // Part intervals are disjoint and ascending; find the first with hi > value.
    auto it = std::partition_point(part.indices.begin(), part.indices.end(), [&](int pos) {
        return cover.intervals[pos].hi <= value;
    });
    if (it != part.indices.end() && cover.intervals[*it].contains(value)) return *it;
    return std::nullopt;
}

Cover contour_cover(const std::vector<double>& critical_values, double margin_eps) {
    if (critical_values.size() < 2)
        throw ParameterError("contour cover needs at least two critical values");
    if (!(margin_eps > 0.0)) throw ParameterError("margin must be positive");
    for (std::size_t i = 1; i < critical_values.size(); ++i)
        if (!(critical_values[i - 1] < critical_values[i]))
            throw ParameterError("critical values must be strictly ascending");

    std::size_t n = critical_values.size();
    std::vector<double> a(n), d(n), c(n), b(n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double gap = critical_values[i + 1] - critical_values[i];
        a[i] = critical_values[i] + 0.2 * gap;
        d[i] = critical_values[i] + 0.4 * gap;
        c[i] = critical_values[i] + 0.6 * gap;
        b[i] = critical_values[i] + 0.8 * gap;
    }
    double c0 = critical_values.front() - margin_eps;
    double dn = critical_values.back() + margin_eps;

    Cover cover;
    cover.style = CoverStyle::contour;
    cover.intervals.reserve(2 * n - 1);
    cover.intervals.push_back({c0, d[0]});
    for (std::size_t i = 0; i + 1 < n; ++i) {
        cover.intervals.push_back({a[i], b[i]});
        cover.intervals.push_back({c[i], i + 2 < n ? d[i + 1] : dn});
    }
    return cover;
}

Cover join_cover(std::pair<double, double> range, int n_levels) {
    if (n_levels < 1) throw ParameterError("n_levels must be positive");
    auto [a, b] = expand_degenerate(range);
    std::vector<double> thresholds;
    for (int i = 1; i < n_levels; ++i) thresholds.push_back(a + i * (b - a) / n_levels);
    return join_cover_at({a, b}, thresholds);
}

Cover split_cover(std::pair<double, double> range, int n_levels) {
    if (n_levels < 1) throw ParameterError("n_levels must be positive");
    auto [a, b] = expand_degenerate(range);
    std::vector<double> thresholds;
    for (int i = 1; i <= n_levels - 1; ++i) thresholds.push_back(b - i * (b - a) / n_levels);
    return split_cover_at({a, b}, thresholds);
}

Cover join_cover_at(std::pair<double, double> range, const std::vector<double>& thresholds) {
    auto [a, b] = expand_degenerate(range);
    for (std::size_t i = 1; i < thresholds.size(); ++i)
        if (!(thresholds[i - 1] < thresholds[i]))
            throw ParameterError("join thresholds must be strictly ascending");
    double lo = a - 1.0;
    double delta = (b - a) * 1e-9;
    Cover cover;
    cover.style = CoverStyle::join;
    for (double c : thresholds) cover.intervals.push_back({lo, c});
    if (cover.intervals.empty() || cover.intervals.back().hi <= b)
        cover.intervals.push_back({lo, b + delta});
    return cover;
}

Cover split_cover_at(std::pair<double, double> range, const std::vector<double>& thresholds) {
    auto [a, b] = expand_degenerate(range);
    for (std::size_t i = 1; i < thresholds.size(); ++i)
        if (!(thresholds[i - 1] > thresholds[i]))
            throw ParameterError("split thresholds must be strictly descending");
    double hi = b + 1.0;
    double delta = (b - a) * 1e-9;
    Cover cover;
    cover.style = CoverStyle::split;
    // Nesting order: smallest interval (largest lo) first.
    for (double c : thresholds) cover.intervals.push_back({c, hi});
    if (cover.intervals.empty() || cover.intervals.back().lo >= a)
        cover.intervals.push_back({a - delta, hi});
    return cover;
}

bool refines(const Cover& fine, const Cover& coarse) {
    for (const Interval& f : fine.intervals) {
        bool contained = false;
        for (const Interval& c : coarse.intervals)
            if (f.subset_of(c)) {
                contained = true;
                break;
            }
        if (!contained) return false;
    }
    return true;
}

const char* cover_style_name(CoverStyle style) {
    switch (style) {
        case CoverStyle::uniform: return "uniform";
        case CoverStyle::contour: return "contour";
        case CoverStyle::join: return "join";
        case CoverStyle::split: return "split";
    }
    return "unknown";
}

std::string cover_to_json(const Cover& cover) {
    nlohmann::ordered_json j;
    j["style"] = cover_style_name(cover.style);
    auto& arr = j["intervals"] = nlohmann::ordered_json::array();
    for (const Interval& iv : cover.intervals) arr.push_back({iv.lo, iv.hi});
    return j.dump();
}

Cover cover_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("cover json: ") + e.what());
    }
    Cover cover;
    std::string style = j.value("style", "uniform");
    if (style == "uniform")
        cover.style = CoverStyle::uniform;
    else if (style == "contour")
        cover.style = CoverStyle::contour;
    else if (style == "join")
        cover.style = CoverStyle::join;
    else if (style == "split")
        cover.style = CoverStyle::split;
    else
        throw FormatError("cover json: unknown style " + style);
    if (!j.contains("intervals") || !j["intervals"].is_array())
        throw FormatError("cover json: missing intervals");
    for (const auto& e : j["intervals"]) {
        if (!e.is_array() || e.size() != 2) throw FormatError("cover json: bad interval");
        Interval iv{e[0].get<double>(), e[1].get<double>()};
        if (!(iv.lo < iv.hi)) throw FormatError("cover json: empty interval");
        cover.intervals.push_back(iv);
    }
    return cover;
}

} // namespace mapper
