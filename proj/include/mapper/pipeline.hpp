#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mapper/cover.hpp"
#include "mapper/field.hpp"
#include "mapper/graph.hpp"

namespace mapper {

// Per-pixel cover interval index for one cover part; -1 means the pixel's
// value lies in no interval of the part.
struct LabelMap {
    int width = 0;
    int height = 0;
    std::vector<std::int32_t> labels;

    std::int32_t at(std::int32_t pixel) const { return labels[pixel]; }
};

// Row-scan seed pixel: the first labeled pixel of a row, or a pixel whose
// (even,odd) label pair differs from its left neighbor's.
struct Candidate {
    std::int32_t pixel = 0;
    std::int32_t row = 0;
};

struct Region {
    std::int32_t id = 0; // minimum linear pixel index in the region
    std::int32_t interval = 0;
    std::int64_t count = 0;
    double value_sum = 0.0;
    double x_sum = 0.0;
    double y_sum = 0.0;
};

// Maximal connected equal-label regions of one cover part. regions are
// sorted by id; region_of holds indices into regions (-1 for unlabeled).
struct RegionMap {
    int width = 0;
    int height = 0;
    std::vector<std::int32_t> region_of;
    std::vector<Region> regions;
};

LabelMap label_pixels(const ScalarField& field, const CoverPart& part, int threads = 0);

std::vector<Candidate> find_candidates(const LabelMap& even, const LabelMap& odd);

// Single-part variant used by the nested (join/split) pipeline.
std::vector<Candidate> find_candidates(const LabelMap& map);

RegionMap find_regions(const ScalarField& field, const LabelMap& label_map,
                       const std::vector<Candidate>& candidates, Connectivity conn);

// Region-id pairs (even id, odd id) discovered from candidate pixels and
// their left neighbors; sorted and deduplicated.
std::vector<std::pair<std::int32_t, std::int32_t>> find_edges(const RegionMap& even_regions,
                                                              const RegionMap& odd_regions,
                                                              const std::vector<Candidate>& candidates);

// Oracle: exact set of region pairs sharing at least one pixel.
std::vector<std::pair<std::int32_t, std::int32_t>> naive_edges(const RegionMap& even_regions,
                                                               const RegionMap& odd_regions);

struct BuildOptions {
    // Thread cap; <0 reads MAPPER_THREADS from the environment, 0/1 is
    // the sequential reference mode. Results are identical either way.
    int threads = -1;
    // Nested covers connect consecutive levels only; the literal 1-nerve
    // (all intersecting level pairs) is available for fidelity experiments.
    bool full_nerve = false;
};

MapperGraph build_mapper(const ScalarField& field, const Cover& cover, Connectivity conn,
                         const BuildOptions& options = {});

// Pipeline output plus pixel-to-node maps, used by the embedding check and
// by tests that need region membership. Only the even/odd pipeline fills
// the per-pixel maps.
struct MapperDetail {
    MapperGraph graph;
    std::vector<std::int32_t> even_node_of; // per pixel: node index or -1
    std::vector<std::int32_t> odd_node_of;
    std::vector<std::int32_t> node_region_pixel; // per node: region id pixel
};

MapperDetail build_mapper_detail(const ScalarField& field, const Cover& cover, Connectivity conn,
                                 const BuildOptions& options = {});

// Repeatedly contracts nodes of valence 2 with two distinct neighbors,
// accumulating their pixel counts onto the replacement edge. Leaf count,
// component count, and cycle rank are preserved.
MapperGraph simplify(const MapperGraph& graph);

int mapper_threads_from_env();

} // namespace mapper
