#include "mapper/ctree.hpp"

#include <algorithm>
#include <numeric>

namespace mapper {

namespace {

// Pixels sorted by (value, index) ascending. The join sweep walks this order
// forward; the split sweep walks it backward, which is exactly the
// (value desc, index desc) tiebreak the split tree wants.
std::vector<std::int32_t> sweep_order(const ScalarField& field) {
    std::vector<std::int32_t> order(field.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
        double va = field.at(a), vb = field.at(b);
        if (va != vb) return va < vb;
        return a < b;
    });
    return order;
}

struct PixelDsu {
    std::vector<std::int32_t> parent;
    explicit PixelDsu(std::int32_t n) : parent(n, -1) {}
    bool processed(std::int32_t p) const { return parent[p] >= 0; }
    std::int32_t find(std::int32_t p) {
        std::int32_t root = p;
        while (parent[root] != root) root = parent[root];
        while (parent[p] != root) {
            std::int32_t next = parent[p];
            parent[p] = root;
            p = next;
        }
        return root;
    }
    void make(std::int32_t p) { parent[p] = p; }
    std::int32_t unite(std::int32_t a, std::int32_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[b] = a;
        return a;
    }
};

template <typename Iter>
MergeTree sweep(const ScalarField& field, Connectivity conn, Iter begin, Iter end) {
    MergeTree tree;
    std::int32_t n = field.size();
    PixelDsu dsu(n);
    std::vector<std::int32_t> comp_node(n, -1); // component root -> latest tree node
    std::vector<std::int32_t> nbrs;
    nbrs.reserve(8);
    std::vector<std::int32_t> roots;
    std::int32_t last_pixel = -1;

    for (Iter it = begin; it != end; ++it) {
        std::int32_t p = *it;
        last_pixel = p;
        nbrs.clear();
        neighbors_into(field.width(), field.height(), p, conn, nbrs);
        roots.clear();
        for (std::int32_t q : nbrs)
            if (dsu.processed(q)) {
                std::int32_t r = dsu.find(q);
                if (std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
            }
        dsu.make(p);
        if (roots.empty()) {
            std::int32_t node = static_cast<std::int32_t>(tree.nodes.size());
            tree.nodes.push_back({p, field.at(p), MergeNodeKind::leaf, -1});
            comp_node[p] = node;
        } else if (roots.size() == 1) {
            std::int32_t r = dsu.unite(roots[0], p);
            comp_node[r] = comp_node[roots[0]];
        } else {
            std::int32_t node = static_cast<std::int32_t>(tree.nodes.size());
            tree.nodes.push_back({p, field.at(p), MergeNodeKind::merge, -1});
            std::int32_t acc = p;
            for (std::int32_t r : roots) {
                tree.nodes[comp_node[r]].parent = node;
                acc = dsu.unite(acc, r);
            }
            comp_node[dsu.find(acc)] = node;
        }
    }

    // The final node sits at the last processed pixel.
    std::int32_t final_root = dsu.find(last_pixel);
    std::int32_t latest = comp_node[final_root];
    if (tree.nodes[latest].pixel != last_pixel) {
        std::int32_t node = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes.push_back({last_pixel, field.at(last_pixel), MergeNodeKind::root, -1});
        tree.nodes[latest].parent = node;
    }
    return tree;
}

} // namespace

MergeTree join_tree_sweep(const ScalarField& field, Connectivity conn) {
    auto order = sweep_order(field);
    return sweep(field, conn, order.begin(), order.end());
}

MergeTree split_tree_sweep(const ScalarField& field, Connectivity conn) {
    auto order = sweep_order(field);
    return sweep(field, conn, order.rbegin(), order.rend());
}

MapperGraph merge_tree_to_graph(const MergeTree& tree) {
    MapperGraph g;
    g.nodes.reserve(tree.nodes.size());
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        const MergeNode& m = tree.nodes[i];
        MapperNode node;
        node.id = static_cast<std::int64_t>(i);
        node.interval = 0;
        node.count = 1;
        node.mean = m.value;
        node.cx = 0;
        node.cy = 0;
        g.nodes.push_back(node);
    }
    for (std::size_t i = 0; i < tree.nodes.size(); ++i)
        if (tree.nodes[i].parent >= 0)
            g.edges.push_back({static_cast<std::int64_t>(i), tree.nodes[i].parent, 0});
    return g;
}

namespace {

// Augmented sweep: every pixel becomes a vertex; parent links point toward
// the sweep end, child counts record how many components merge at a vertex.
void augmented_sweep(const ScalarField& field, Connectivity conn,
                     const std::vector<std::int32_t>& order, bool reverse,
                     std::vector<std::int32_t>& parent, std::vector<std::int32_t>& child_count) {
    std::int32_t n = field.size();
    parent.assign(n, -1);
    child_count.assign(n, 0);
    PixelDsu dsu(n);
    std::vector<std::int32_t> top(n, -1); // component root -> most recent vertex
    std::vector<std::int32_t> nbrs;
    nbrs.reserve(8);
    std::vector<std::int32_t> roots;
    for (std::int32_t k = 0; k < n; ++k) {
        std::int32_t p = order[reverse ? n - 1 - k : k];
        nbrs.clear();
        neighbors_into(field.width(), field.height(), p, conn, nbrs);
        roots.clear();
        for (std::int32_t q : nbrs)
            if (dsu.processed(q)) {
                std::int32_t r = dsu.find(q);
                if (std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
            }
        dsu.make(p);
        std::int32_t acc = p;
        for (std::int32_t r : roots) {
            parent[top[r]] = p;
            ++child_count[p];
            acc = dsu.unite(acc, r);
        }
        top[dsu.find(acc)] = p;
    }
}

struct ChildList {
    // Intrusive sibling lists so vertices detach in O(1) during peeling.
    std::vector<std::int32_t> head, next, prev;
    explicit ChildList(std::int32_t n) : head(n, -1), next(n, -1), prev(n, -1) {}
    void link(std::int32_t child, std::int32_t parent) {
        next[child] = head[parent];
        prev[child] = -1;
        if (head[parent] >= 0) prev[head[parent]] = child;
        head[parent] = child;
    }
    void unlink(std::int32_t child, std::int32_t parent) {
        if (prev[child] >= 0)
            next[prev[child]] = next[child];
        else
            head[parent] = next[child];
        if (next[child] >= 0) prev[next[child]] = prev[child];
    }
};

} // namespace

MapperGraph contour_tree(const ScalarField& field, Connectivity conn) {
    std::int32_t n = field.size();
    if (n == 1) {
        MapperGraph g;
        g.nodes.push_back({0, 0, 1, field.at(0), 0.0, 0.0});
        return g;
    }
    auto order = sweep_order(field);

    std::vector<std::int32_t> jparent, sparent, jc, sc;
    augmented_sweep(field, conn, order, false, jparent, jc);
    augmented_sweep(field, conn, order, true, sparent, sc);

    ChildList jchildren(n), schildren(n);
    for (std::int32_t v = 0; v < n; ++v) {
        if (jparent[v] >= 0) jchildren.link(v, jparent[v]);
        if (sparent[v] >= 0) schildren.link(v, sparent[v]);
    }

    auto peelable = [&](std::int32_t v) {
        return (jc[v] == 0 && sc[v] <= 1) || (sc[v] == 0 && jc[v] <= 1);
    };

    std::vector<std::int32_t> queue;
    queue.reserve(n);
    for (std::int32_t v = 0; v < n; ++v)
        if (peelable(v)) queue.push_back(v);

    std::vector<char> dead(n, 0);
    std::vector<std::pair<std::int32_t, std::int32_t>> arcs;
    arcs.reserve(n - 1);
    std::int32_t alive = n;

    for (std::size_t head = 0; head < queue.size() && alive > 1; ++head) {
        std::int32_t v = queue[head];
        if (dead[v] || !peelable(v)) continue;
        std::int32_t touched1 = -1, touched2 = -1;
        if (jc[v] == 0 && jparent[v] >= 0) {
            // Lower leaf: arc toward the join parent, splice out of the split tree.
            std::int32_t w = jparent[v];
            arcs.emplace_back(v, w);
            jchildren.unlink(v, w);
            --jc[w];
            std::int32_t sp = sparent[v];
            std::int32_t c = sc[v] == 1 ? schildren.head[v] : -1;
            if (c >= 0) schildren.unlink(c, v);
            if (sp >= 0) {
                schildren.unlink(v, sp);
                if (c >= 0) {
                    schildren.link(c, sp);
                    sparent[c] = sp;
                } else {
                    --sc[sp];
                }
            } else if (c >= 0) {
                sparent[c] = -1;
            }
            touched1 = w;
            touched2 = sp;
        } else if (sc[v] == 0 && sparent[v] >= 0) {
            // Upper leaf: mirror image.
            std::int32_t w = sparent[v];
            arcs.emplace_back(v, w);
            schildren.unlink(v, w);
            --sc[w];
            std::int32_t jp = jparent[v];
            std::int32_t c = jc[v] == 1 ? jchildren.head[v] : -1;
            if (c >= 0) jchildren.unlink(c, v);
            if (jp >= 0) {
                jchildren.unlink(v, jp);
                if (c >= 0) {
                    jchildren.link(c, jp);
                    jparent[c] = jp;
                } else {
                    --jc[jp];
                }
            } else if (c >= 0) {
                jparent[c] = -1;
            }
            touched1 = w;
            touched2 = jp;
        } else {
            continue;
        }
        dead[v] = 1;
        --alive;
        if (touched1 >= 0 && !dead[touched1] && peelable(touched1)) queue.push_back(touched1);
        if (touched2 >= 0 && !dead[touched2] && peelable(touched2)) queue.push_back(touched2);
    }

    if (static_cast<std::int32_t>(arcs.size()) != n - 1)
        throw Error("contour tree peeling did not consume every vertex");

    // Contract valence-2 chains of the augmented contour tree.
    std::vector<std::int32_t> degree(n, 0);
    for (const auto& [a, b] : arcs) {
        ++degree[a];
        ++degree[b];
    }
    std::vector<std::int32_t> adj_offset(n + 1, 0);
    for (const auto& [a, b] : arcs) {
        ++adj_offset[a + 1];
        ++adj_offset[b + 1];
    }
    for (std::int32_t v = 0; v < n; ++v) adj_offset[v + 1] += adj_offset[v];
    std::vector<std::int32_t> adj(arcs.size() * 2);
    {
        std::vector<std::int32_t> cursor(adj_offset.begin(), adj_offset.end() - 1);
        for (const auto& [a, b] : arcs) {
            adj[cursor[a]++] = b;
            adj[cursor[b]++] = a;
        }
    }

    std::vector<std::int32_t> node_of(n, -1);
    MapperGraph g;
    for (std::int32_t v = 0; v < n; ++v) {
        if (degree[v] == 0 || degree[v] == 2) continue;
        std::int32_t id = static_cast<std::int32_t>(g.nodes.size());
        node_of[v] = id;
        MapperNode node;
        node.id = id;
        node.interval = 0;
        node.count = 1;
        node.mean = field.at(v);
        node.cx = v % field.width();
        node.cy = v / field.width();
        g.nodes.push_back(node);
    }
    for (std::int32_t v = 0; v < n; ++v) {
        if (node_of[v] < 0) continue;
        for (std::int32_t k = adj_offset[v]; k < adj_offset[v + 1]; ++k) {
            std::int32_t prev = v;
            std::int32_t cur = adj[k];
            std::int64_t carried = 0;
            while (degree[cur] == 2) {
                std::int32_t next = adj[adj_offset[cur]] == prev ? adj[adj_offset[cur] + 1]
                                                                 : adj[adj_offset[cur]];
                prev = cur;
                cur = next;
                ++carried;
            }
            // Each chain is found from both ends; keep one orientation.
            if (v < cur || (v == cur && carried == 0))
                g.edges.push_back({node_of[v], node_of[cur], carried});
        }
    }
    std::sort(g.edges.begin(), g.edges.end(), [](const MapperEdge& a, const MapperEdge& b) {
        if (a.u != b.u) return a.u < b.u;
        if (a.v != b.v) return a.v < b.v;
        return a.carried < b.carried;
    });
    return g;
}

CriticalValues critical_values(const ScalarField& field, Connectivity conn) {
    MergeTree join = join_tree_sweep(field, conn);
    MergeTree split = split_tree_sweep(field, conn);
    std::vector<double> values;
    values.reserve(join.nodes.size() + split.nodes.size() + 2);
    for (const MergeNode& m : join.nodes) values.push_back(m.value);
    for (const MergeNode& m : split.nodes) values.push_back(m.value);
    auto [lo, hi] = value_range(field);
    values.push_back(lo);
    values.push_back(hi);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return {std::move(values)};
}

std::vector<std::int32_t> sublevel_component_counts(const ScalarField& field, Connectivity conn,
                                                    const std::vector<double>& thresholds) {
    auto order = sweep_order(field);
    std::int32_t n = field.size();
    PixelDsu dsu(n);
    std::vector<std::int32_t> nbrs;
    nbrs.reserve(8);
    std::vector<std::int32_t> comps_after(n + 1, 0);
    std::int32_t comps = 0;
    for (std::int32_t k = 0; k < n; ++k) {
        std::int32_t p = order[k];
        nbrs.clear();
        neighbors_into(field.width(), field.height(), p, conn, nbrs);
        dsu.make(p);
        ++comps;
        for (std::int32_t q : nbrs)
            if (dsu.processed(q) && q != p) {
                std::int32_t a = dsu.find(p), b = dsu.find(q);
                if (a != b) {
                    dsu.unite(a, b);
                    --comps;
                }
            }
        comps_after[k + 1] = comps;
    }
    std::vector<double> sorted_values(n);
    for (std::int32_t k = 0; k < n; ++k) sorted_values[k] = field.at(order[k]);
    std::vector<std::int32_t> out;
    out.reserve(thresholds.size());
    for (double c : thresholds) {
        auto it = std::upper_bound(sorted_values.begin(), sorted_values.end(), c);
        out.push_back(comps_after[static_cast<std::size_t>(it - sorted_values.begin())]);
    }
    return out;
}

} // namespace mapper
