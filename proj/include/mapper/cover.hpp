#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mapper/errors.hpp"

namespace mapper {

// Open interval (lo, hi).
struct Interval {
    double lo;
    double hi;
    bool contains(double v) const { return v > lo && v < hi; }
    bool subset_of(const Interval& other) const { return lo >= other.lo && hi <= other.hi; }
};

enum class CoverStyle { uniform, contour, join, split };

// An ordered interval cover of a value range. Uniform and contour covers obey
// the only-adjacent-overlap conditions; join/split covers are nested chains.
struct Cover {
    CoverStyle style = CoverStyle::uniform;
    std::vector<Interval> intervals;

    // Set for uniform covers so locate() can use arithmetic lookup.
    bool has_uniform_params = false;
    double uniform_a = 0.0;
    double uniform_width = 0.0;
    double uniform_eps = 0.0;

    int size() const { return static_cast<int>(intervals.size()); }
};

// One parity class of a uniform/contour cover. Intervals within a part are
// pairwise disjoint, so a value lies in at most one of them.
// Parity is 1-based: the odd part holds U_1, U_3, ... (positions 0, 2, ...).
struct CoverPart {
    const Cover* parent = nullptr;
    bool odd = true;
    std::vector<int> indices; // positions into parent->intervals, ascending
};

Cover uniform_cover(std::pair<double, double> range, int n_slices, double overlap_fraction);

std::pair<CoverPart, CoverPart> split_even_odd(const Cover& cover); // {even, odd}

// Index into the parent cover of the unique part interval containing value,
// or nullopt. Constant-time for uniform covers, binary search otherwise.
std::optional<int> locate(const CoverPart& part, double value);

// Cover realizing the contour tree for the given ascending critical values:
// per gap [t_i, t_{i+1}] the four numbers sit at the 0.2/0.4/0.6/0.8
// quantiles, and the ends extend by margin_eps beyond t_1 and t_n.
Cover contour_cover(const std::vector<double>& critical_values, double margin_eps);

// Nested covers whose sublevel/superlevel pre-images realize join and split
// trees. Finite sentinels one range-width outside the range stand in for the
// infinite ends; the outermost interval is extended slightly past the range
// so the extreme value is always covered.
Cover join_cover(std::pair<double, double> range, int n_levels);
Cover split_cover(std::pair<double, double> range, int n_levels);

// Same covers with caller-chosen thresholds (strictly ascending). An
// outermost interval past the range end is appended when the thresholds do
// not already cover it; an empty threshold list yields that interval alone.
// Tree realization places thresholds between consecutive critical values,
// which uniform spacing cannot afford when the values crowd together.
Cover join_cover_at(std::pair<double, double> range, const std::vector<double>& thresholds);
Cover split_cover_at(std::pair<double, double> range, const std::vector<double>& thresholds);

// True iff every interval of fine is contained in some interval of coarse.
bool refines(const Cover& fine, const Cover& coarse);

std::string cover_to_json(const Cover& cover);
Cover cover_from_json(const std::string& text);

const char* cover_style_name(CoverStyle style);

} // namespace mapper
