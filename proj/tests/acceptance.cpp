// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria run against the library directly; timings use the
// monotonic clock.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "mapper/ctree.hpp"
#include "mapper/field.hpp"
#include "mapper/graph.hpp"
#include "mapper/pipeline.hpp"
#include "oracle.hpp"

using namespace mapper;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& what, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s%s%s\n", pass ? "PASS" : "FAIL", criterion, what.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

int degree_leaves(const MapperGraph& g) {
    // Node ids are not dense after simplify(); count degrees by id.
    std::map<std::int64_t, int> deg;
    for (const MapperNode& n : g.nodes) deg[n.id] = 0;
    for (const MapperEdge& e : g.edges) {
        ++deg.at(e.u);
        ++deg.at(e.v);
    }
    int leaves = 0;
    for (auto& [id, d] : deg)
        if (d == 1) ++leaves;
    return leaves;
}

int component_count(const MapperGraph& g) {
    return cycle_rank(g) - static_cast<int>(g.edges.size()) + static_cast<int>(g.nodes.size());
}

// Criterion 1: the 1d three-hump figure with a two-interval cover.
void criterion_1() {
    auto start = Clock::now();
    ScalarField f = from_values(9, 1, {0.9, 0.5, 0.1, 0.5, 0.85, 0.5, 0.15, 0.5, 0.95});
    MapperGraph g = build_mapper(f, uniform_cover(value_range(f), 2, 0.25), Connectivity::four);
    int lower = 0, upper = 0;
    for (const MapperNode& n : g.nodes) (n.interval == 0 ? lower : upper) += 1;
    bool pass = g.nodes.size() == 5 && g.edges.size() == 4 && is_tree(g) && lower == 2 &&
                upper == 3 && seconds_since(start) < 1.0;
    char detail[128];
    std::snprintf(detail, sizeof detail, "%zu nodes, %zu edges, %d lower + %d upper, %.2fs",
                  g.nodes.size(), g.edges.size(), lower, upper, seconds_since(start));
    report(1, pass, "1d three-hump field gives the figure's 5-node tree", detail);
}

// Criterion 2: candidate-based edge finding equals the naive oracle.
void criterion_2() {
    auto start = Clock::now();
    const int ns[4] = {2, 4, 8, 16};
    const double gs[3] = {0.1, 0.25, 0.4};
    long checked = 0, mismatches = 0;
    for (std::uint32_t field_i = 0; field_i < 1000; ++field_i) {
        ScalarField f = oracle::random_field(32, 32, 10000 + field_i);
        auto range = value_range(f);
        for (int n : ns)
            for (double g : gs) {
                Cover cover = uniform_cover(range, n, g);
                auto [even, odd] = split_even_odd(cover);
                LabelMap em = label_pixels(f, even), om = label_pixels(f, odd);
                auto cands = find_candidates(em, om);
                RegionMap er = find_regions(f, em, cands, Connectivity::four);
                RegionMap orr = find_regions(f, om, cands, Connectivity::four);
                if (find_edges(er, orr, cands) != naive_edges(er, orr)) ++mismatches;
                ++checked;
            }
    }
    double elapsed = seconds_since(start);
    bool pass = mismatches == 0 && elapsed < 30.0;
    char detail[128];
    std::snprintf(detail, sizeof detail, "%ld cover/field combos, %ld mismatches, %.1fs", checked,
                  mismatches, elapsed);
    report(2, pass, "find_edges == naive_edges on 1000 random 32x32 fields", detail);
}

std::vector<std::pair<std::string, ScalarField>> realization_fields() {
    std::vector<std::pair<std::string, ScalarField>> fields;
    fields.emplace_back("two_peaks", generate_pattern(PatternKind::two_peaks, 64, 0));
    fields.emplace_back("saddle", generate_pattern(PatternKind::saddle, 64, 0));
    for (std::uint32_t seed = 1; seed <= 5; ++seed)
        fields.emplace_back("perlin/" + std::to_string(seed),
                            generate_pattern(PatternKind::perlin, 64, seed));
    return fields;
}

// Criterion 3: Mapper over the critical-value cover realizes the contour tree.
void criterion_3() {
    auto start = Clock::now();
    std::string bad;
    for (auto& [name, f] : realization_fields()) {
        auto range = value_range(f);
        CriticalValues cv = critical_values(f, Connectivity::four);
        Cover cover = contour_cover(cv.values, 0.05 * (range.second - range.first));
        MapperGraph mapper_side = simplify(build_mapper(f, cover, Connectivity::four));
        MapperGraph reference = contour_tree(f, Connectivity::four);
        bool ok = is_tree(mapper_side) && is_tree(reference) &&
                  tree_isomorphic(mapper_side, reference);
        if (!ok) {
            double min_gap = range.second - range.first;
            for (std::size_t i = 1; i < cv.values.size(); ++i)
                min_gap = std::min(min_gap, cv.values[i] - cv.values[i - 1]);
            char note[128];
            std::snprintf(note, sizeof note, "%s (%zu criticals, min gap %.1e, %d mapper comps)",
                          name.c_str(), cv.values.size(), min_gap, component_count(mapper_side));
            bad += (bad.empty() ? "" : ", ") + std::string(note);
        }
    }
    double elapsed = seconds_since(start);
    bool pass = bad.empty() && elapsed < 10.0;
    char detail[512];
    std::snprintf(detail, sizeof detail, "%s%.1fs",
                  bad.empty() ? "" : ("failing: " + bad + "; ").c_str(), elapsed);
    report(3, pass, "contour-tree realization on two_peaks, saddle, perlin(1-5) at 64x64", detail);
}

std::vector<double> realization_thresholds(const MergeTree& sweep) {
    std::vector<double> vals;
    for (const MergeNode& m : sweep.nodes) vals.push_back(m.value);
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    std::vector<double> mids;
    for (std::size_t i = 1; i < vals.size(); ++i) mids.push_back(0.5 * (vals[i - 1] + vals[i]));
    return mids;
}

// Criterion 4: nested covers realize the pruned join and split sweep trees.
void criterion_4() {
    auto start = Clock::now();
    std::string bad;
    for (auto& [name, f] : realization_fields()) {
        auto range = value_range(f);
        for (bool join : {true, false}) {
            MergeTree sweep = join ? join_tree_sweep(f, Connectivity::four)
                                   : split_tree_sweep(f, Connectivity::four);
            std::vector<double> mids = realization_thresholds(sweep);
            Cover cover;
            if (join) {
                cover = join_cover_at(range, mids);
            } else {
                std::reverse(mids.begin(), mids.end());
                cover = split_cover_at(range, mids);
            }
            MapperGraph mapper_side = simplify(build_mapper(f, cover, Connectivity::four));
            MapperGraph reference = simplify(merge_tree_to_graph(sweep));
            bool ok = is_tree(mapper_side) && is_tree(reference) &&
                      tree_isomorphic(mapper_side, reference);
            if (!ok) bad += (bad.empty() ? "" : ", ") + name + (join ? "/join" : "/split");
        }
    }
    double elapsed = seconds_since(start);
    bool pass = bad.empty() && elapsed < 10.0;
    char detail[256];
    std::snprintf(detail, sizeof detail, "%s%.1fs",
                  bad.empty() ? "" : ("failing: " + bad + "; ").c_str(), elapsed);
    report(4, pass, "join/split realization matches the pruned sweep trees", detail);
}

// Criterion 5: join-sweep component counts equal brute-force flood fill.
void criterion_5() {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> t_dist(0.0, 1.0);
    long mismatches = 0;
    for (std::uint32_t i = 0; i < 200; ++i) {
        ScalarField f = oracle::random_field(16, 16, 20000 + i);
        std::vector<double> thresholds;
        for (int k = 0; k < 20; ++k) thresholds.push_back(t_dist(rng));
        auto counts = sublevel_component_counts(f, Connectivity::four, thresholds);
        for (std::size_t k = 0; k < thresholds.size(); ++k) {
            double c = thresholds[k];
            int expect = oracle::flood_fill_components(
                f, Connectivity::four, [&](std::int32_t p) { return f.at(p) <= c; });
            if (counts[k] != expect) ++mismatches;
        }
    }
    char detail[96];
    std::snprintf(detail, sizeof detail, "200 fields x 20 thresholds, %ld mismatches", mismatches);
    report(5, mismatches == 0, "sweep component counts match flood fill", detail);
}

// Criterion 6: dyadic refinement hierarchy embeds pairwise on perlin 128x128.
void criterion_6() {
    auto start = Clock::now();
    ScalarField f = generate_pattern(PatternKind::perlin, 128, 0);
    auto range = value_range(f);
    // Equal absolute overlap margin across the chain (g scales with n), so
    // each pair of fine intervals covers its coarse parent completely.
    // Eight-connectivity keeps the 16-slice level bands connected where the
    // noise is steep relative to the interval width.
    const int ns[4] = {2, 4, 8, 16};
    const double g_finest = 0.45;
    const Connectivity conn = Connectivity::eight;
    std::vector<Cover> covers;
    std::vector<MapperGraph> graphs;
    for (int n : ns) {
        covers.push_back(uniform_cover(range, n, g_finest * n / 16));
        graphs.push_back(build_mapper(f, covers.back(), conn));
    }
    int passes = 0;
    for (int i = 0; i + 1 < 4; ++i) {
        if (!refines(covers[i + 1], covers[i])) continue;
        auto mapping =
            check_embedding(graphs[i], graphs[i + 1], covers[i], covers[i + 1], f, conn);
        if (mapping) ++passes;
    }
    double elapsed = seconds_since(start);
    bool pass = passes == 3 && elapsed < 5.0;
    char detail[96];
    std::snprintf(detail, sizeof detail, "%d/3 consecutive pairs embed, %.1fs", passes, elapsed);
    report(6, pass, "dyadic refinement hierarchy on perlin 128x128", detail);
}

// Criterion 7: simplify preserves leaves, components, and cycle rank.
void criterion_7() {
    long bad = 0;
    for (std::uint32_t i = 0; i < 500; ++i) {
        ScalarField f = i % 2 ? oracle::random_field(24, 24, 30000 + i)
                              : oracle::random_smooth_field(24, 30000 + i);
        Cover cover = uniform_cover(value_range(f), 2 + i % 8, 0.1 + 0.05 * (i % 7));
        MapperGraph g = build_mapper(f, cover, Connectivity::four);
        MapperGraph s = simplify(g);
        if (degree_leaves(s) != degree_leaves(g) || component_count(s) != component_count(g) ||
            cycle_rank(s) != cycle_rank(g))
            ++bad;
    }
    char detail[96];
    std::snprintf(detail, sizeof detail, "500 pipeline graphs, %ld violations", bad);
    report(7, bad == 0, "simplify preserves (leaves, components, cycle rank)", detail);
}

// Criterion 8: the discontinuous ring has a cycle; continuous fields do not.
// Intervals are kept wider than the steepest per-pixel step of the
// continuous fields, so only a genuine discontinuity can break a level band.
void criterion_8() {
    const int slices = 4;
    const double g = 0.25;
    ScalarField ring = generate_pattern(PatternKind::ring_gradient, 128, 0);
    int ring_rank = cycle_rank(
        build_mapper(ring, uniform_cover(value_range(ring), slices, g), Connectivity::four));
    std::string detail = "ring rank " + std::to_string(ring_rank);
    bool pass = ring_rank >= 1;
    for (auto kind : {PatternKind::perlin, PatternKind::saddle, PatternKind::two_peaks}) {
        ScalarField f = generate_pattern(kind, 128, 0);
        int rank = cycle_rank(
            build_mapper(f, uniform_cover(value_range(f), slices, g), Connectivity::four));
        detail += ", " + std::string(pattern_name(kind)) + " rank " + std::to_string(rank);
        pass = pass && rank == 0;
    }
    report(8, pass, "ring_gradient has a cycle, continuous fields stay at rank 0", detail);
}

// Criterion 9: linear-in-pixels scaling and slice-count monotonicity.
void criterion_9() {
    auto start = Clock::now();
    const int slice_counts[3] = {16, 32, 64};
    const PatternKind kinds[4] = {PatternKind::bench1, PatternKind::bench2, PatternKind::bench3,
                                  PatternKind::bench4};
    std::vector<double> ratios;
    bool monotone = true;
    std::string monotone_note;
    for (PatternKind kind : kinds) {
        double ms[2][3];
        for (int si = 0; si < 2; ++si) {
            int size = si == 0 ? 512 : 1024;
            ScalarField f = generate_pattern(kind, size, 1);
            Cover covers[3];
            for (int k = 0; k < 3; ++k)
                covers[k] = uniform_cover(value_range(f), slice_counts[k], 0.25);
            // Round-robin repetitions so clock drift hits every slice count
            // alike; medians of seven reported, warmup discarded.
            const int reps = 7;
            std::vector<double> times[3];
            for (int k = 0; k < 3; ++k) build_mapper(f, covers[k], Connectivity::four);
            for (int rep = 0; rep < reps; ++rep)
                for (int k = 0; k < 3; ++k) {
                    auto t0 = Clock::now();
                    build_mapper(f, covers[k], Connectivity::four);
                    times[k].push_back(
                        std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
                }
            for (int k = 0; k < 3; ++k) {
                std::sort(times[k].begin(), times[k].end());
                ms[si][k] = times[k][reps / 2];
            }
            if (!(ms[si][0] <= ms[si][1] && ms[si][1] <= ms[si][2])) {
                monotone = false;
                char note[96];
                std::snprintf(note, sizeof note, " [%s@%d: %.1f/%.1f/%.1f ms]",
                              pattern_name(kind), size, ms[si][0], ms[si][1], ms[si][2]);
                monotone_note += note;
            }
        }
        for (int k = 0; k < 3; ++k) ratios.push_back(ms[1][k] / ms[0][k]);
    }
    std::sort(ratios.begin(), ratios.end());
    double median = 0.5 * (ratios[ratios.size() / 2 - 1] + ratios[ratios.size() / 2]);
    double elapsed = seconds_since(start);
    bool pass = median >= 3.0 && median <= 6.0 && monotone && elapsed < 120.0;
    char detail[256];
    std::snprintf(detail, sizeof detail, "median 1024/512 ratio %.2f, slices monotone: %s%s, %.0fs",
                  median, monotone ? "yes" : "no", monotone_note.c_str(), elapsed);
    report(9, pass, "scaling trend: linear in pixels, nondecreasing in slices", detail);
}

// Criterion 10: sequential and 8-thread runs produce byte-identical json.
void criterion_10() {
    long diffs = 0;
    setenv("MAPPER_THREADS", "0", 1);
    std::vector<std::string> sequential;
    for (std::uint32_t i = 0; i < 50; ++i) {
        ScalarField f = oracle::random_field(48, 48, 40000 + i);
        Cover cover = uniform_cover(value_range(f), 2 + i % 12, 0.25);
        BuildOptions opts;
        opts.threads = -1; // read MAPPER_THREADS
        sequential.push_back(to_json(build_mapper(f, cover, Connectivity::four, opts)));
    }
    setenv("MAPPER_THREADS", "8", 1);
    for (std::uint32_t i = 0; i < 50; ++i) {
        ScalarField f = oracle::random_field(48, 48, 40000 + i);
        Cover cover = uniform_cover(value_range(f), 2 + i % 12, 0.25);
        BuildOptions opts;
        opts.threads = -1;
        if (to_json(build_mapper(f, cover, Connectivity::four, opts)) != sequential[i]) ++diffs;
    }
    unsetenv("MAPPER_THREADS");
    char detail[96];
    std::snprintf(detail, sizeof detail, "50 fields, %ld byte differences", diffs);
    report(10, diffs == 0, "MAPPER_THREADS=0 and =8 produce identical json", detail);
}

} // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    else std::printf("all criteria passed\n");
    return failures;
}
