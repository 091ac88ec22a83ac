#pragma once

#include <cstdint>
#include <vector>

#include "mapper/field.hpp"
#include "mapper/graph.hpp"

namespace mapper {

enum class MergeNodeKind { leaf, merge, root };

struct MergeNode {
    std::int32_t pixel = 0;
    double value = 0.0;
    MergeNodeKind kind = MergeNodeKind::leaf;
    std::int32_t parent = -1; // index into MergeTree::nodes, toward the sweep end
};

// Output of one union-find sweep. Value ties are broken by linear pixel
// index (ascending for the join sweep, descending for split), a total order
// standing in for the distinct-critical-values Morse assumption.
struct MergeTree {
    std::vector<MergeNode> nodes;

    std::int32_t leaf_count() const {
        std::int32_t n = 0;
        for (const MergeNode& m : nodes)
            if (m.kind == MergeNodeKind::leaf) ++n;
        return n;
    }
    std::int32_t merge_count() const {
        std::int32_t n = 0;
        for (const MergeNode& m : nodes)
            if (m.kind == MergeNodeKind::merge) ++n;
        return n;
    }
};

// Sweeps c upward over {f <= c} (join) or downward over {f >= c} (split),
// recording leaves where components are born and merges where they unite.
MergeTree join_tree_sweep(const ScalarField& field, Connectivity conn);
MergeTree split_tree_sweep(const ScalarField& field, Connectivity conn);

// The sweep tree as a plain graph (nodes = sweep criticals, edges = arcs),
// ready for simplify()/tree_isomorphic comparisons.
MapperGraph merge_tree_to_graph(const MergeTree& tree);

// Reference contour tree: combines the two augmented sweeps by leaf peeling
// and contracts valence-2 chains. Returned in MapperGraph form.
MapperGraph contour_tree(const ScalarField& field, Connectivity conn);

struct CriticalValues {
    std::vector<double> values; // strictly ascending, includes global min/max
};

// Deduplicated values of all sweep criticals plus the global min and max.
CriticalValues critical_values(const ScalarField& field, Connectivity conn);

// Number of connected components of {f <= c} for each threshold, read off
// the join sweep; the flood-fill oracle in the tests must agree exactly.
std::vector<std::int32_t> sublevel_component_counts(const ScalarField& field, Connectivity conn,
                                                    const std::vector<double>& thresholds);

} // namespace mapper
