#include "mapper/pipeline.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <thread>
#include <tuple>
#include <unordered_map>

namespace mapper {

namespace {

void label_rows(const ScalarField& field, const CoverPart& part, std::int32_t begin_row,
                std::int32_t end_row, std::vector<std::int32_t>& labels) {
    int width = field.width();
    for (std::int32_t y = begin_row; y < end_row; ++y) {
        std::int32_t base = y * width;
        for (int x = 0; x < width; ++x) {
            auto hit = locate(part, field.at(base + x));
            labels[base + x] = hit ? *hit : -1;
        }
    }
}

// Shared row scan; `odd` may be null for the single-part variant.
std::vector<Candidate> scan_candidates(const LabelMap& even, const LabelMap* odd) {
    std::vector<Candidate> out;
    int width = even.width;
    int height = even.height;
    for (std::int32_t y = 0; y < height; ++y) {
        std::int32_t base = y * width;
        std::int32_t prev_e = -1, prev_o = -1;
        for (int x = 0; x < width; ++x) {
            std::int32_t e = even.labels[base + x];
            std::int32_t o = odd ? odd->labels[base + x] : -1;
            bool labeled = e >= 0 || o >= 0;
            if (labeled && (e != prev_e || o != prev_o)) out.push_back({base + x, y});
            prev_e = e;
            prev_o = o;
        }
    }
    return out;
}

struct RegionAccum {
    std::int32_t min_pixel;
    std::int32_t interval;
    std::int64_t count;
    double value_sum;
    double x_sum;
    double y_sum;
};

} // namespace

int mapper_threads_from_env() {
    const char* env = std::getenv("MAPPER_THREADS");
    if (!env) return 0;
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == env || v < 0) return 0;
    return static_cast<int>(v);
}

LabelMap label_pixels(const ScalarField& field, const CoverPart& part, int threads) {
    LabelMap map;
    map.width = field.width();
    map.height = field.height();
    map.labels.resize(field.size());
    if (threads > 1 && field.height() >= 2 * threads) {
        std::vector<std::thread> pool;
        std::int32_t rows = field.height();
        std::int32_t chunk = (rows + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            std::int32_t begin = t * chunk;
            std::int32_t end = std::min(rows, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(label_rows, std::cref(field), std::cref(part), begin, end,
                              std::ref(map.labels));
        }
        for (auto& th : pool) th.join();
    } else {
        label_rows(field, part, 0, field.height(), map.labels);
    }
    return map;
}

std::vector<Candidate> find_candidates(const LabelMap& even, const LabelMap& odd) {
    if (even.width != odd.width || even.height != odd.height)
        throw DimensionError("label maps must share dimensions");
    return scan_candidates(even, &odd);
}

std::vector<Candidate> find_candidates(const LabelMap& map) {
    return scan_candidates(map, nullptr);
}

RegionMap find_regions(const ScalarField& field, const LabelMap& label_map,
                       const std::vector<Candidate>& candidates, Connectivity conn) {
    RegionMap out;
    out.width = label_map.width;
    out.height = label_map.height;
    std::int32_t n = static_cast<std::int32_t>(label_map.labels.size());
    out.region_of.assign(n, -1);

    std::vector<RegionAccum> accum;
    std::vector<std::int32_t> nbrs;
    nbrs.reserve(8);
    std::vector<std::int32_t> bfs;

    // Candidates seed the search; each unclaimed seed starts a region and
    // breadth-first expansion across equal labels exhausts it before the
    // next seed comes up.
    for (const Candidate& c : candidates) {
        std::int32_t seed = c.pixel;
        if (label_map.at(seed) < 0 || out.region_of[seed] >= 0) continue;
        std::int32_t label = label_map.at(seed);
        std::int32_t region_index = static_cast<std::int32_t>(accum.size());
        accum.push_back({seed, label, 0, 0.0, 0.0, 0.0});
        out.region_of[seed] = region_index;
        bfs.clear();
        bfs.push_back(seed);
        for (std::size_t head = 0; head < bfs.size(); ++head) {
            std::int32_t p = bfs[head];
            RegionAccum& r = accum[region_index];
            r.count += 1;
            r.value_sum += field.at(p);
            r.x_sum += p % out.width;
            r.y_sum += p / out.width;
            if (p < r.min_pixel) r.min_pixel = p;
            nbrs.clear();
            neighbors_into(out.width, out.height, p, conn, nbrs);
            for (std::int32_t q : nbrs)
                if (out.region_of[q] < 0 && label_map.at(q) == label) {
                    out.region_of[q] = region_index;
                    bfs.push_back(q);
                }
        }
    }

    // Canonical order: ascending region id (minimum pixel index).
    std::vector<std::int32_t> order(accum.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<std::int32_t>(i);
    std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
        return accum[a].min_pixel < accum[b].min_pixel;
    });
    std::vector<std::int32_t> remap(accum.size());
    out.regions.resize(accum.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        const RegionAccum& a = accum[order[i]];
        remap[order[i]] = static_cast<std::int32_t>(i);
        out.regions[i] = {a.min_pixel, a.interval, a.count, a.value_sum, a.x_sum, a.y_sum};
    }
    for (std::int32_t& r : out.region_of)
        if (r >= 0) r = remap[r];
    return out;
}

std::vector<std::pair<std::int32_t, std::int32_t>> find_edges(
    const RegionMap& even_regions, const RegionMap& odd_regions,
    const std::vector<Candidate>& candidates) {
    std::vector<std::pair<std::int32_t, std::int32_t>> pairs;
    auto consider = [&](std::int32_t p) {
        std::int32_t e = even_regions.region_of[p];
        std::int32_t o = odd_regions.region_of[p];
        if (e >= 0 && o >= 0)
            pairs.emplace_back(even_regions.regions[e].id, odd_regions.regions[o].id);
    };
    int width = even_regions.width;
    for (const Candidate& c : candidates) {
        consider(c.pixel);
        if (c.pixel % width > 0) consider(c.pixel - 1);
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    return pairs;
}

std::vector<std::pair<std::int32_t, std::int32_t>> naive_edges(const RegionMap& even_regions,
                                                               const RegionMap& odd_regions) {
    std::vector<std::pair<std::int32_t, std::int32_t>> pairs;
    std::int32_t n = static_cast<std::int32_t>(even_regions.region_of.size());
    for (std::int32_t p = 0; p < n; ++p) {
        std::int32_t e = even_regions.region_of[p];
        std::int32_t o = odd_regions.region_of[p];
        if (e >= 0 && o >= 0)
            pairs.emplace_back(even_regions.regions[e].id, odd_regions.regions[o].id);
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    return pairs;
}

namespace {

MapperDetail build_even_odd(const ScalarField& field, const Cover& cover, Connectivity conn,
                            int threads) {
    auto [even_part, odd_part] = split_even_odd(cover);

    LabelMap even_map, odd_map;
    if (threads > 1) {
        std::thread t_even([&] { even_map = label_pixels(field, even_part, threads / 2); });
        odd_map = label_pixels(field, odd_part, threads - threads / 2);
        t_even.join();
    } else {
        even_map = label_pixels(field, even_part);
        odd_map = label_pixels(field, odd_part);
    }

    std::int32_t n = field.size();
    for (std::int32_t p = 0; p < n; ++p)
        if (even_map.labels[p] < 0 && odd_map.labels[p] < 0)
            throw CoverMismatchError("pixel " + std::to_string(p) + " (value " +
                                     std::to_string(field.at(p)) + ") lies outside the cover");

    std::vector<Candidate> candidates = find_candidates(even_map, odd_map);

    RegionMap even_regions, odd_regions;
    if (threads > 1) {
        std::thread t_even(
            [&] { even_regions = find_regions(field, even_map, candidates, conn); });
        odd_regions = find_regions(field, odd_map, candidates, conn);
        t_even.join();
    } else {
        even_regions = find_regions(field, even_map, candidates, conn);
        odd_regions = find_regions(field, odd_map, candidates, conn);
    }

    auto edge_pairs = find_edges(even_regions, odd_regions, candidates);

    // Canonical node order: ascending (interval, region id) across both parts.
    struct NodeRef {
        std::int32_t interval;
        std::int32_t region_id;
        bool odd;
        std::int32_t region_index;
    };
    std::vector<NodeRef> refs;
    refs.reserve(even_regions.regions.size() + odd_regions.regions.size());
    for (std::size_t i = 0; i < even_regions.regions.size(); ++i) {
        const Region& r = even_regions.regions[i];
        refs.push_back({r.interval, r.id, false, static_cast<std::int32_t>(i)});
    }
    for (std::size_t i = 0; i < odd_regions.regions.size(); ++i) {
        const Region& r = odd_regions.regions[i];
        refs.push_back({r.interval, r.id, true, static_cast<std::int32_t>(i)});
    }
    std::sort(refs.begin(), refs.end(), [](const NodeRef& a, const NodeRef& b) {
        if (a.interval != b.interval) return a.interval < b.interval;
        return a.region_id < b.region_id;
    });

    MapperDetail detail;
    detail.graph.nodes.reserve(refs.size());
    detail.node_region_pixel.reserve(refs.size());
    std::vector<std::int32_t> even_node_of_region(even_regions.regions.size());
    std::vector<std::int32_t> odd_node_of_region(odd_regions.regions.size());
    for (std::size_t i = 0; i < refs.size(); ++i) {
        const NodeRef& nr = refs[i];
        const Region& r = nr.odd ? odd_regions.regions[nr.region_index]
                                 : even_regions.regions[nr.region_index];
        MapperNode node;
        node.id = static_cast<std::int64_t>(i);
        node.interval = r.interval;
        node.count = r.count;
        node.mean = r.value_sum / static_cast<double>(r.count);
        node.cx = r.x_sum / static_cast<double>(r.count);
        node.cy = r.y_sum / static_cast<double>(r.count);
        detail.graph.nodes.push_back(node);
        detail.node_region_pixel.push_back(r.id);
        (nr.odd ? odd_node_of_region : even_node_of_region)[nr.region_index] =
            static_cast<std::int32_t>(i);
    }

    std::unordered_map<std::int32_t, std::int32_t> even_id_to_node, odd_id_to_node;
    for (std::size_t i = 0; i < even_regions.regions.size(); ++i)
        even_id_to_node.emplace(even_regions.regions[i].id, even_node_of_region[i]);
    for (std::size_t i = 0; i < odd_regions.regions.size(); ++i)
        odd_id_to_node.emplace(odd_regions.regions[i].id, odd_node_of_region[i]);

    detail.graph.edges.reserve(edge_pairs.size());
    for (const auto& [eid, oid] : edge_pairs) {
        std::int64_t u = even_id_to_node.at(eid);
        std::int64_t v = odd_id_to_node.at(oid);
        if (u > v) std::swap(u, v);
        detail.graph.edges.push_back({u, v, 0});
    }
    std::sort(detail.graph.edges.begin(), detail.graph.edges.end(),
              [](const MapperEdge& a, const MapperEdge& b) {
                  return std::tie(a.u, a.v) < std::tie(b.u, b.v);
              });

    detail.even_node_of.assign(n, -1);
    detail.odd_node_of.assign(n, -1);
    for (std::int32_t p = 0; p < n; ++p) {
        std::int32_t e = even_regions.region_of[p];
        std::int32_t o = odd_regions.region_of[p];
        if (e >= 0) detail.even_node_of[p] = even_node_of_region[e];
        if (o >= 0) detail.odd_node_of[p] = odd_node_of_region[o];
    }
    return detail;
}

MapperDetail build_nested(const ScalarField& field, const Cover& cover, Connectivity conn,
                          bool full_nerve) {
    int n_levels = cover.size();
    MapperDetail detail;

    // Regions per level, computed independently by thresholding. Nested
    // intervals mean every level-i region sits inside exactly one level-(i+1)
    // region, so consecutive levels connect by containment.
    std::vector<std::int32_t> first_node_of_level(n_levels + 1, 0);
    std::vector<std::int32_t> parent_of_node; // node -> node at next level (-1 for top)
    RegionMap prev_regions;

    LabelMap level_map;
    level_map.width = field.width();
    level_map.height = field.height();
    level_map.labels.resize(field.size());

    for (int level = 0; level < n_levels; ++level) {
        const Interval& iv = cover.intervals[level];
        for (std::int32_t p = 0; p < field.size(); ++p)
            level_map.labels[p] = iv.contains(field.at(p)) ? level : -1;
        auto candidates = find_candidates(level_map);
        RegionMap regions = find_regions(field, level_map, candidates, conn);

        first_node_of_level[level + 1] =
            first_node_of_level[level] + static_cast<std::int32_t>(regions.regions.size());
        for (const Region& r : regions.regions) {
            MapperNode node;
            node.id = static_cast<std::int64_t>(detail.graph.nodes.size());
            node.interval = level;
            node.count = r.count;
            node.mean = r.value_sum / static_cast<double>(r.count);
            node.cx = r.x_sum / static_cast<double>(r.count);
            node.cy = r.y_sum / static_cast<double>(r.count);
            detail.graph.nodes.push_back(node);
            detail.node_region_pixel.push_back(r.id);
        }

        if (level > 0) {
            // Anchor each previous-level region inside this level by its id pixel.
            for (std::size_t i = 0; i < prev_regions.regions.size(); ++i) {
                std::int32_t anchor = prev_regions.regions[i].id;
                std::int32_t container = regions.region_of[anchor];
                std::int64_t u = first_node_of_level[level - 1] + static_cast<std::int64_t>(i);
                if (container < 0) {
                    parent_of_node.push_back(-1);
                    continue;
                }
                std::int64_t v = first_node_of_level[level] + container;
                detail.graph.edges.push_back({u, v, 0});
                parent_of_node.push_back(static_cast<std::int32_t>(v));
            }
        }
        prev_regions = std::move(regions);
    }
    for (std::size_t i = 0; i < prev_regions.regions.size(); ++i) parent_of_node.push_back(-1);

    if (full_nerve) {
        // Literal 1-nerve: every ancestor pair intersects, not just parents.
        std::vector<MapperEdge> extra;
        for (std::size_t v = 0; v < detail.graph.nodes.size(); ++v) {
            std::int32_t anc = parent_of_node[v];
            if (anc < 0) continue;
            anc = parent_of_node[anc];
            while (anc >= 0) {
                extra.push_back({static_cast<std::int64_t>(v), anc, 0});
                anc = parent_of_node[anc];
            }
        }
        detail.graph.edges.insert(detail.graph.edges.end(), extra.begin(), extra.end());
        std::sort(detail.graph.edges.begin(), detail.graph.edges.end(),
                  [](const MapperEdge& a, const MapperEdge& b) {
                      return std::tie(a.u, a.v) < std::tie(b.u, b.v);
                  });
    }
    return detail;
}

} // namespace

MapperDetail build_mapper_detail(const ScalarField& field, const Cover& cover, Connectivity conn,
                                 const BuildOptions& options) {
    int threads = options.threads >= 0 ? options.threads : mapper_threads_from_env();
    if (cover.style == CoverStyle::uniform || cover.style == CoverStyle::contour)
        return build_even_odd(field, cover, conn, threads);
    return build_nested(field, cover, conn, options.full_nerve);
}

MapperGraph build_mapper(const ScalarField& field, const Cover& cover, Connectivity conn,
                         const BuildOptions& options) {
    return build_mapper_detail(field, cover, conn, options).graph;
}

MapperGraph simplify(const MapperGraph& graph) {
    std::size_t n = graph.nodes.size();
    std::unordered_map<std::int64_t, std::int32_t> index;
    index.reserve(n);
    for (std::size_t i = 0; i < n; ++i) index.emplace(graph.nodes[i].id, static_cast<std::int32_t>(i));

    struct Edge {
        std::int32_t u, v;
        std::int64_t carried;
        bool alive;
    };
    std::vector<Edge> edges;
    edges.reserve(graph.edges.size());
    std::vector<std::vector<std::int32_t>> incident(n);
    for (const MapperEdge& e : graph.edges) {
        std::int32_t u = index.at(e.u), v = index.at(e.v);
        std::int32_t id = static_cast<std::int32_t>(edges.size());
        edges.push_back({u, v, e.carried, true});
        incident[u].push_back(id);
        if (v != u) incident[v].push_back(id);
    }

    auto live_degree = [&](std::int32_t x) {
        int deg = 0;
        for (std::int32_t id : incident[x])
            if (edges[id].alive) deg += edges[id].u == edges[id].v ? 2 : 1;
        return deg;
    };

    std::vector<char> dead(n, 0);
    std::set<std::int32_t> work;
    for (std::int32_t i = 0; i < static_cast<std::int32_t>(n); ++i) work.insert(i);

    while (!work.empty()) {
        std::int32_t x = *work.begin();
        work.erase(work.begin());
        if (dead[x]) continue;
        std::int32_t e1 = -1, e2 = -1;
        int deg = 0;
        for (std::int32_t id : incident[x])
            if (edges[id].alive) {
                deg += edges[id].u == edges[id].v ? 2 : 1;
                if (e1 < 0)
                    e1 = id;
                else if (e2 < 0)
                    e2 = id;
                else
                    break;
            }
        if (deg != 2 || e1 < 0 || e2 < 0) continue;
        std::int32_t a = edges[e1].u == x ? edges[e1].v : edges[e1].u;
        std::int32_t b = edges[e2].u == x ? edges[e2].v : edges[e2].u;
        if (a == b || a == x || b == x) continue; // double edge or self-loop: keep
        std::int64_t carried = edges[e1].carried + edges[e2].carried + graph.nodes[x].count;
        edges[e1].alive = false;
        edges[e2].alive = false;
        dead[x] = 1;
        std::int32_t id = static_cast<std::int32_t>(edges.size());
        edges.push_back({a, b, carried, true});
        incident[a].push_back(id);
        incident[b].push_back(id);
        // Neighbors may have become contractible with their new incidence.
        if (!dead[a] && live_degree(a) == 2) work.insert(a);
        if (!dead[b] && live_degree(b) == 2) work.insert(b);
    }

    MapperGraph out;
    for (std::size_t i = 0; i < n; ++i)
        if (!dead[i]) out.nodes.push_back(graph.nodes[i]);
    for (const Edge& e : edges)
        if (e.alive) {
            std::int64_t u = graph.nodes[e.u].id;
            std::int64_t v = graph.nodes[e.v].id;
            if (u > v) std::swap(u, v);
            out.edges.push_back({u, v, e.carried});
        }
    std::sort(out.edges.begin(), out.edges.end(), [](const MapperEdge& a, const MapperEdge& b) {
        return std::tie(a.u, a.v, a.carried) < std::tie(b.u, b.v, b.carried);
    });
    return out;
}

} // namespace mapper
