#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <unordered_set>
#include <vector>

#include "mapper/graph.hpp"
#include "mapper/pipeline.hpp"

namespace mapper {

namespace {

// MAPPER_EMBED_DEBUG=1 traces why a verification came back empty.
void embed_trace(const char* stage, long a, long b) {
    static const bool enabled = std::getenv("MAPPER_EMBED_DEBUG") != nullptr;
    if (enabled) std::fprintf(stderr, "check_embedding: %s (%ld, %ld)\n", stage, a, b);
}

// Pixel-sharing relation between fine and coarse nodes, keyed densely.
struct IntersectionTable {
    std::size_t n_coarse = 0;
    std::unordered_set<std::uint64_t> pairs;

    void add(std::int32_t fine, std::int32_t coarse) {
        pairs.insert(static_cast<std::uint64_t>(fine) * n_coarse + coarse);
    }
    bool has(std::int32_t fine, std::int32_t coarse) const {
        return pairs.count(static_cast<std::uint64_t>(fine) * n_coarse + coarse) != 0;
    }
};

} // namespace

std::optional<std::vector<std::pair<std::int64_t, std::int64_t>>> check_embedding(
    const MapperGraph& coarse, const MapperGraph& fine, const Cover& coarse_cover,
    const Cover& fine_cover, const ScalarField& field, Connectivity conn) {
    if (!refines(fine_cover, coarse_cover))
        throw ParameterError("check_embedding: fine cover does not refine the coarse cover");
    if ((coarse_cover.style != CoverStyle::uniform && coarse_cover.style != CoverStyle::contour) ||
        (fine_cover.style != CoverStyle::uniform && fine_cover.style != CoverStyle::contour))
        throw ParameterError("check_embedding: supported for uniform/contour covers only");

    MapperDetail cd = build_mapper_detail(field, coarse_cover, conn);
    MapperDetail fd = build_mapper_detail(field, fine_cover, conn);
    if (cd.graph != coarse || fd.graph != fine)
        throw ParameterError("check_embedding: graphs were not built from this field and cover");

    std::int32_t n_pixels = field.size();
    std::size_t n_coarse = cd.graph.nodes.size();
    std::size_t n_fine = fd.graph.nodes.size();

    IntersectionTable meets;
    meets.n_coarse = n_coarse;
    for (std::int32_t p = 0; p < n_pixels; ++p) {
        std::int32_t cn[2] = {cd.even_node_of[p], cd.odd_node_of[p]};
        std::int32_t fn[2] = {fd.even_node_of[p], fd.odd_node_of[p]};
        for (std::int32_t c : cn)
            for (std::int32_t f : fn)
                if (c >= 0 && f >= 0) meets.add(f, c);
    }

    // phi: coarse node -> fine node whose region contains the coarse region's
    // id pixel and whose interval sits inside the coarse interval. If the id
    // pixel carries no such fine label, the remaining region pixels are
    // scanned in index order for a canonical fallback anchor.
    auto contained_candidate = [&](std::int32_t pixel, const Interval& coarse_iv) -> std::int32_t {
        std::int32_t best = -1;
        int best_interval = 0;
        for (std::int32_t f : {fd.even_node_of[pixel], fd.odd_node_of[pixel]}) {
            if (f < 0) continue;
            const Interval& fiv = fine_cover.intervals[fd.graph.nodes[f].interval];
            if (!fiv.subset_of(coarse_iv)) continue;
            if (best < 0 || fd.graph.nodes[f].interval < best_interval) {
                best = f;
                best_interval = fd.graph.nodes[f].interval;
            }
        }
        return best;
    };

    std::vector<std::vector<std::int32_t>> coarse_pixels(n_coarse);
    for (std::int32_t p = 0; p < n_pixels; ++p) {
        if (cd.even_node_of[p] >= 0) coarse_pixels[cd.even_node_of[p]].push_back(p);
        if (cd.odd_node_of[p] >= 0) coarse_pixels[cd.odd_node_of[p]].push_back(p);
    }

    std::vector<std::int32_t> phi(n_coarse, -1);
    std::vector<std::int32_t> used(n_fine, -1);
    for (std::size_t u = 0; u < n_coarse; ++u) {
        const Interval& civ = coarse_cover.intervals[cd.graph.nodes[u].interval];
        std::int32_t target = contained_candidate(cd.node_region_pixel[u], civ);
        if (target < 0)
            for (std::int32_t p : coarse_pixels[u]) {
                target = contained_candidate(p, civ);
                if (target >= 0) break;
            }
        if (target < 0) {
            embed_trace("no contained fine anchor for coarse node", static_cast<long>(u), -1);
            return std::nullopt;
        }
        if (used[target] >= 0) {
            embed_trace("fine anchor already used by coarse node", used[target],
                        static_cast<long>(u));
            return std::nullopt;
        }
        used[target] = static_cast<std::int32_t>(u);
        phi[u] = target;
    }

    // Every coarse edge must map to a fine path whose nodes all meet one of
    // the edge's two regions.
    std::vector<std::vector<std::int32_t>> fine_adj(n_fine);
    for (const MapperEdge& e : fd.graph.edges) {
        fine_adj[static_cast<std::int32_t>(e.u)].push_back(static_cast<std::int32_t>(e.v));
        fine_adj[static_cast<std::int32_t>(e.v)].push_back(static_cast<std::int32_t>(e.u));
    }
    std::vector<std::int32_t> visit_mark(n_fine, -1);
    std::vector<std::int32_t> bfs;
    for (std::size_t ei = 0; ei < cd.graph.edges.size(); ++ei) {
        const MapperEdge& e = cd.graph.edges[ei];
        std::int32_t cu = static_cast<std::int32_t>(e.u);
        std::int32_t cv = static_cast<std::int32_t>(e.v);
        std::int32_t start = phi[cu], goal = phi[cv];
        auto allowed = [&](std::int32_t f) { return meets.has(f, cu) || meets.has(f, cv); };
        if (!allowed(start) || !allowed(goal)) {
            embed_trace("edge anchors do not meet the edge regions", cu, cv);
            return std::nullopt;
        }
        if (start == goal) continue;
        bfs.clear();
        bfs.push_back(start);
        visit_mark[start] = static_cast<std::int32_t>(ei);
        bool reached = false;
        for (std::size_t head = 0; head < bfs.size() && !reached; ++head)
            for (std::int32_t next : fine_adj[bfs[head]]) {
                if (visit_mark[next] == static_cast<std::int32_t>(ei) || !allowed(next)) continue;
                if (next == goal) {
                    reached = true;
                    break;
                }
                visit_mark[next] = static_cast<std::int32_t>(ei);
                bfs.push_back(next);
            }
        if (!reached) {
            embed_trace("no fine path witnesses coarse edge", cu, cv);
            return std::nullopt;
        }
    }

    std::vector<std::pair<std::int64_t, std::int64_t>> mapping;
    mapping.reserve(n_coarse);
    for (std::size_t u = 0; u < n_coarse; ++u)
        mapping.emplace_back(cd.graph.nodes[u].id, fd.graph.nodes[phi[u]].id);
    return mapping;
}

} // namespace mapper
