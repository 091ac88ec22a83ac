#include "doctest.h"

#include <random>

#include "mapper/ctree.hpp"
#include "mapper/pipeline.hpp"
#include "oracle.hpp"

using namespace mapper;

namespace {

std::vector<std::int32_t> nodes_of_kind(const MergeTree& t, MergeNodeKind kind) {
    std::vector<std::int32_t> out;
    for (const MergeNode& m : t.nodes)
        if (m.kind == kind) out.push_back(m.pixel);
    return out;
}

// Local minima under the (value, index) total order.
int local_min_count(const ScalarField& f, Connectivity conn) {
    int count = 0;
    for (std::int32_t p = 0; p < f.size(); ++p) {
        bool is_min = true;
        for (std::int32_t q : neighbors(f, p, conn))
            if (f.at(q) < f.at(p) || (f.at(q) == f.at(p) && q < p)) {
                is_min = false;
                break;
            }
        if (is_min) ++count;
    }
    return count;
}

int local_max_count(const ScalarField& f, Connectivity conn) {
    int count = 0;
    for (std::int32_t p = 0; p < f.size(); ++p) {
        bool is_max = true;
        for (std::int32_t q : neighbors(f, p, conn))
            if (f.at(q) > f.at(p) || (f.at(q) == f.at(p) && q > p)) {
                is_max = false;
                break;
            }
        if (is_max) ++count;
    }
    return count;
}

} // namespace

TEST_CASE("join sweep on the 1x5 example") {
    ScalarField f = from_values(1, 5, {0, 2, 1, 3, 0});
    MergeTree join = join_tree_sweep(f, Connectivity::four);
    CHECK(nodes_of_kind(join, MergeNodeKind::leaf) == std::vector<std::int32_t>{0, 4, 2});
    auto merges = nodes_of_kind(join, MergeNodeKind::merge);
    CHECK(merges == std::vector<std::int32_t>{1, 3});
    // Index 3 carries the highest value, so the last merge is also the root.
    CHECK(join.nodes.back().pixel == 3);
    CHECK(join.nodes.back().parent == -1);

    MergeTree split = split_tree_sweep(f, Connectivity::four);
    CHECK(nodes_of_kind(split, MergeNodeKind::leaf) == std::vector<std::int32_t>{3, 1});
    CHECK(nodes_of_kind(split, MergeNodeKind::merge) == std::vector<std::int32_t>{2});
    CHECK(split.nodes.back().pixel == 0); // split root at the global minimum
}

TEST_CASE("sweeps on ramps and constants") {
    std::vector<double> ramp(5);
    for (int i = 0; i < 5; ++i) ramp[i] = i;
    ScalarField f = from_values(1, 5, ramp);
    MergeTree join = join_tree_sweep(f, Connectivity::four);
    CHECK(join.leaf_count() == 1);
    CHECK(join.merge_count() == 0);
    CHECK(join.nodes.size() == 2); // leaf plus root

    ScalarField c = from_values(3, 3, std::vector<double>(9, 0.7));
    MergeTree cj = join_tree_sweep(c, Connectivity::four);
    CHECK(cj.leaf_count() == 1);
    CHECK(cj.merge_count() == 0);
    // Tiebreak order makes pixel 0 the leaf and pixel 8 the root.
    CHECK(cj.nodes.front().pixel == 0);
    CHECK(cj.nodes.back().pixel == 8);
}

TEST_CASE("sweep leaves count local extrema") {
    for (std::uint32_t seed = 0; seed < 10; ++seed) {
        ScalarField f = oracle::random_field(16, 16, 2000 + seed);
        for (auto conn : {Connectivity::four, Connectivity::eight}) {
            CHECK(join_tree_sweep(f, conn).leaf_count() == local_min_count(f, conn));
            CHECK(split_tree_sweep(f, conn).leaf_count() == local_max_count(f, conn));
        }
    }
}

TEST_CASE("sublevel component counts match flood fill") {
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> t_dist(-0.1, 1.1);
    for (std::uint32_t seed = 0; seed < 20; ++seed) {
        ScalarField f = oracle::random_field(16, 16, 3000 + seed);
        std::vector<double> thresholds;
        for (int k = 0; k < 20; ++k) thresholds.push_back(t_dist(rng));
        auto counts = sublevel_component_counts(f, Connectivity::four, thresholds);
        for (std::size_t k = 0; k < thresholds.size(); ++k) {
            double c = thresholds[k];
            int expect = oracle::flood_fill_components(
                f, Connectivity::four, [&](std::int32_t p) { return f.at(p) <= c; });
            CHECK(counts[k] == expect);
        }
    }
}

TEST_CASE("contour tree of the two-peaks pattern is the four-node Y") {
    ScalarField f = generate_pattern(PatternKind::two_peaks, 64, 0);
    MapperGraph ct = contour_tree(f, Connectivity::four);
    REQUIRE(ct.nodes.size() == 4);
    CHECK(ct.edges.size() == 3);
    CHECK(is_tree(ct));
    int deg3 = 0, deg1 = 0;
    std::vector<int> degree(4, 0);
    for (const MapperEdge& e : ct.edges) {
        ++degree[e.u];
        ++degree[e.v];
    }
    for (int d : degree) {
        if (d == 3) ++deg3;
        if (d == 1) ++deg1;
    }
    CHECK(deg3 == 1);
    CHECK(deg1 == 3);
}

TEST_CASE("contour tree of a single-peak grid keeps its corner minima") {
    // The four tied corner zeros are distinct minima under the tiebreak
    // order, so the discrete contour tree is a caterpillar, not a bare path:
    // five leaves (four corners and the peak) hung on three saddles.
    ScalarField f = from_values(3, 3, {0, 1, 0, 1, 2, 1, 0, 1, 0});
    MapperGraph ct = contour_tree(f, Connectivity::four);
    CHECK(is_tree(ct));
    std::vector<int> degree(ct.nodes.size(), 0);
    for (const MapperEdge& e : ct.edges) {
        ++degree[e.u];
        ++degree[e.v];
    }
    int leaves = 0;
    for (int d : degree)
        if (d == 1) ++leaves;
    CHECK(leaves == 5);
    CHECK(ct.nodes.size() == 8);

    // Leaf count ties out with the sweeps.
    CHECK(join_tree_sweep(f, Connectivity::four).leaf_count() == 4);
    CHECK(split_tree_sweep(f, Connectivity::four).leaf_count() == 1);

    ScalarField constant = from_values(2, 2, std::vector<double>(4, 0.3));
    MapperGraph cct = contour_tree(constant, Connectivity::four);
    CHECK(cct.nodes.size() <= 2); // min and max of the tie order only
    CHECK(is_tree(cct));
}

TEST_CASE("contour tree component counts agree with level-set flood fill") {
    // The number of alive join branches between consecutive criticals equals
    // the brute-force sublevel component count (spot check of the combine).
    for (std::uint32_t seed = 0; seed < 6; ++seed) {
        ScalarField f = oracle::random_smooth_field(20, 400 + seed);
        CriticalValues cv = critical_values(f, Connectivity::four);
        for (std::size_t i = 0; i + 1 < cv.values.size(); ++i) {
            double mid = (cv.values[i] + cv.values[i + 1]) / 2;
            auto counts = sublevel_component_counts(f, Connectivity::four, {mid});
            int expect = oracle::flood_fill_components(
                f, Connectivity::four, [&](std::int32_t p) { return f.at(p) <= mid; });
            CHECK(counts[0] == expect);
        }
    }
}

TEST_CASE("critical_values") {
    ScalarField f = from_values(1, 5, {0, 2, 1, 3, 0});
    CHECK(critical_values(f, Connectivity::four).values == std::vector<double>{0, 1, 2, 3});

    std::vector<double> ramp(9);
    for (int i = 0; i < 9; ++i) ramp[i] = i / 8.0;
    ScalarField r = from_values(9, 1, ramp);
    CHECK(critical_values(r, Connectivity::four).values == std::vector<double>{0.0, 1.0});

    // two_peaks: min, saddle, lower peak, higher peak.
    ScalarField tp = generate_pattern(PatternKind::two_peaks, 64, 0);
    CriticalValues cv = critical_values(tp, Connectivity::four);
    REQUIRE(cv.values.size() == 4);
    CHECK(cv.values.front() == 0.0);
    CHECK(cv.values.back() == 1.0);
    CHECK(cv.values[1] == doctest::Approx(0.345).epsilon(0.02));
    CHECK(cv.values[2] == doctest::Approx(0.724).epsilon(0.02));
}

TEST_CASE("merge tree graphs prune consistently") {
    ScalarField f = generate_pattern(PatternKind::two_peaks, 64, 0);
    MergeTree split = split_tree_sweep(f, Connectivity::four);
    MapperGraph sg = simplify(merge_tree_to_graph(split));
    // Split tree of two peaks: two maxima leaves, one merge, root below.
    CHECK(sg.nodes.size() == 4);
    CHECK(is_tree(sg));

    MergeTree join = join_tree_sweep(f, Connectivity::four);
    MapperGraph jg = simplify(merge_tree_to_graph(join));
    CHECK(jg.nodes.size() == 2); // unique minimum: a single arc after pruning
    CHECK(jg.edges.size() == 1);
}
