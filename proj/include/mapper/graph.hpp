#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mapper/cover.hpp"
#include "mapper/errors.hpp"
#include "mapper/field.hpp"

namespace mapper {

struct MapperNode {
    std::int64_t id = 0;
    int interval = 0;           // cover interval index (level index for nested covers)
    std::int64_t count = 0;     // pixels in the region
    double mean = 0.0;          // mean field value over the region
    double cx = 0.0, cy = 0.0;  // region centroid in pixel coordinates

    bool operator==(const MapperNode&) const = default;
};

// Undirected edge; multi-edges and self-loops are representable. `carried`
// accumulates pixel counts of nodes contracted away by simplify().
struct MapperEdge {
    std::int64_t u = 0;
    std::int64_t v = 0;
    std::int64_t carried = 0;

    bool operator==(const MapperEdge&) const = default;
};

struct MapperGraph {
    std::vector<MapperNode> nodes;
    std::vector<MapperEdge> edges;

    bool operator==(const MapperGraph&) const = default;
};

// E - V + C (first Betti number); self-loops contribute one edge.
int cycle_rank(const MapperGraph& graph);

// Connected with cycle rank zero. Graphs with at most one node are trees.
bool is_tree(const MapperGraph& graph);

// Structure-only isomorphism of trees via canonical rooted forms at the
// centers. Throws ParameterError when either input is not a tree.
bool tree_isomorphic(const MapperGraph& g1, const MapperGraph& g2);

std::string to_dot(const MapperGraph& graph);
std::string to_json(const MapperGraph& graph);
MapperGraph from_json(const std::string& text);

// Verifies the refinement embedding of the coarse Mapper graph into the fine
// one: maps every coarse node to the fine node anchored at its region and
// checks injectivity plus an edge-to-path witness. Returns the node mapping
// (coarse node id -> fine node id) or nullopt if verification fails.
// Preconditions: refines(fine_cover, coarse_cover); both graphs built from
// `field` with the given covers and connectivity.
std::optional<std::vector<std::pair<std::int64_t, std::int64_t>>> check_embedding(
    const MapperGraph& coarse, const MapperGraph& fine, const Cover& coarse_cover,
    const Cover& fine_cover, const ScalarField& field, Connectivity conn = Connectivity::four);

} // namespace mapper
