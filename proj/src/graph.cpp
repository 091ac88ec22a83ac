#include "mapper/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include <nlohmann/json.hpp>

namespace mapper {

namespace {

struct Dsu {
    std::vector<int> parent;
    explicit Dsu(int n) : parent(n) {
        for (int i = 0; i < n; ++i) parent[i] = i;
    }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[b] = a;
        return true;
    }
};

std::unordered_map<std::int64_t, int> index_nodes(const MapperGraph& g) {
    std::unordered_map<std::int64_t, int> idx;
    idx.reserve(g.nodes.size());
    for (std::size_t i = 0; i < g.nodes.size(); ++i) idx.emplace(g.nodes[i].id, static_cast<int>(i));
    return idx;
}

int component_count(const MapperGraph& g) {
    int n = static_cast<int>(g.nodes.size());
    Dsu dsu(n);
    auto idx = index_nodes(g);
    int merges = 0;
    for (const MapperEdge& e : g.edges)
        if (dsu.unite(idx.at(e.u), idx.at(e.v))) ++merges;
    return n - merges;
}

// AHU canonical form of a tree rooted at `root`, children sorted recursively.
std::string ahu_encode(const std::vector<std::vector<int>>& adj, int root) {
    // Iterative post-order so deep paths do not overflow the stack.
    int n = static_cast<int>(adj.size());
    std::vector<int> parent(n, -1), order;
    order.reserve(n);
    std::vector<int> stack{root};
    std::vector<char> seen(n, 0);
    seen[root] = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        order.push_back(v);
        for (int w : adj[v])
            if (!seen[w]) {
                seen[w] = 1;
                parent[w] = v;
                stack.push_back(w);
            }
    }
    std::vector<std::vector<std::string>> child_codes(n);
    std::vector<std::string> code(n);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int v = *it;
        std::sort(child_codes[v].begin(), child_codes[v].end());
        std::string s = "(";
        for (const auto& c : child_codes[v]) s += c;
        s += ")";
        code[v] = std::move(s);
        if (parent[v] >= 0) child_codes[parent[v]].push_back(code[v]);
    }
    return code[root];
}

// Tree centers by leaf peeling; one or two of them.
std::vector<int> tree_centers(const std::vector<std::vector<int>>& adj) {
    int n = static_cast<int>(adj.size());
    if (n == 1) return {0};
    std::vector<int> degree(n);
    std::vector<int> frontier;
    for (int i = 0; i < n; ++i) {
        degree[i] = static_cast<int>(adj[i].size());
        if (degree[i] <= 1) frontier.push_back(i);
    }
    int remaining = n;
    while (remaining > 2) {
        std::vector<int> next;
        remaining -= static_cast<int>(frontier.size());
        for (int v : frontier)
            for (int w : adj[v])
                if (--degree[w] == 1) next.push_back(w);
        frontier = std::move(next);
    }
    return frontier;
}

std::string tree_canonical(const MapperGraph& g) {
    auto idx = index_nodes(g);
    std::vector<std::vector<int>> adj(g.nodes.size());
    for (const MapperEdge& e : g.edges) {
        int u = idx.at(e.u), v = idx.at(e.v);
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    std::string best;
    for (int c : tree_centers(adj)) {
        std::string s = ahu_encode(adj, c);
        if (best.empty() || s < best) best = std::move(s);
    }
    return best;
}

} // namespace

int cycle_rank(const MapperGraph& graph) {
    if (graph.nodes.empty()) return 0;
    int e = static_cast<int>(graph.edges.size());
    int v = static_cast<int>(graph.nodes.size());
    return e - v + component_count(graph);
}

bool is_tree(const MapperGraph& graph) {
    if (graph.nodes.size() <= 1) return graph.edges.empty();
    return component_count(graph) == 1 && cycle_rank(graph) == 0;
}

bool tree_isomorphic(const MapperGraph& g1, const MapperGraph& g2) {
    if (!is_tree(g1) || !is_tree(g2)) throw ParameterError("tree_isomorphic requires tree inputs");
    if (g1.nodes.size() != g2.nodes.size()) return false;
    if (g1.nodes.empty()) return true;
    return tree_canonical(g1) == tree_canonical(g2);
}

std::string to_dot(const MapperGraph& graph) {
    std::string out = "graph mapper {\n  node [shape=circle, fixedsize=true];\n";
    char buf[256];
    for (const MapperNode& n : graph.nodes) {
        double w = 0.2 * std::sqrt(static_cast<double>(n.count));
        std::snprintf(buf, sizeof buf,
                      "  n%lld [label=\"%lld\", width=%.3f, height=%.3f, pos=\"%.2f,%.2f!\"];\n",
                      static_cast<long long>(n.id), static_cast<long long>(n.id), w, w, n.cx,
                      100.0 * n.mean);
        out += buf;
    }
    for (const MapperEdge& e : graph.edges) {
        std::snprintf(buf, sizeof buf, "  n%lld -- n%lld;\n", static_cast<long long>(e.u),
                      static_cast<long long>(e.v));
        out += buf;
    }
    out += "}\n";
    return out;
}

std::string to_json(const MapperGraph& graph) {
    nlohmann::ordered_json j;
    auto& nodes = j["nodes"] = nlohmann::ordered_json::array();
    for (const MapperNode& n : graph.nodes) {
        nlohmann::ordered_json jn;
        jn["id"] = n.id;
        jn["interval"] = n.interval;
        jn["count"] = n.count;
        jn["mean"] = n.mean;
        jn["cx"] = n.cx;
        jn["cy"] = n.cy;
        nodes.push_back(std::move(jn));
    }
    auto& edges = j["edges"] = nlohmann::ordered_json::array();
    for (const MapperEdge& e : graph.edges) {
        if (e.carried == 0)
            edges.push_back({e.u, e.v});
        else
            edges.push_back({e.u, e.v, e.carried});
    }
    return j.dump();
}

MapperGraph from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("graph json: ") + e.what());
    }
    if (!j.contains("nodes") || !j.contains("edges"))
        throw FormatError("graph json: missing nodes/edges");
    MapperGraph g;
    try {
        for (const auto& jn : j["nodes"]) {
            MapperNode n;
            n.id = jn.at("id").get<std::int64_t>();
            n.interval = jn.at("interval").get<int>();
            n.count = jn.at("count").get<std::int64_t>();
            n.mean = jn.at("mean").get<double>();
            n.cx = jn.at("cx").get<double>();
            n.cy = jn.at("cy").get<double>();
            g.nodes.push_back(n);
        }
        for (const auto& je : j["edges"]) {
            if (!je.is_array() || je.size() < 2 || je.size() > 3)
                throw FormatError("graph json: bad edge entry");
            MapperEdge e;
            e.u = je[0].get<std::int64_t>();
            e.v = je[1].get<std::int64_t>();
            e.carried = je.size() == 3 ? je[2].get<std::int64_t>() : 0;
            g.edges.push_back(e);
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("graph json: ") + e.what());
    }
    auto idx = index_nodes(g);
    if (idx.size() != g.nodes.size()) throw FormatError("graph json: duplicate node ids");
    for (const MapperEdge& e : g.edges)
        if (!idx.count(e.u) || !idx.count(e.v))
            throw FormatError("graph json: edge references missing node");
    return g;
}

} // namespace mapper
