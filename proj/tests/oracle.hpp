#pragma once

// Test-only oracles, independent of the library's pipeline code paths:
// flood-fill component counting and random field generation.

#include <functional>
#include <random>
#include <vector>

#include "mapper/field.hpp"

namespace oracle {

// Connected components of {p : keep(p)} under the given connectivity,
// counted by plain flood fill.
inline int flood_fill_components(const mapper::ScalarField& field, mapper::Connectivity conn,
                                 const std::function<bool(std::int32_t)>& keep) {
    std::int32_t n = field.size();
    std::vector<char> visited(n, 0);
    std::vector<std::int32_t> stack, nbrs;
    int comps = 0;
    for (std::int32_t p = 0; p < n; ++p) {
        if (visited[p] || !keep(p)) continue;
        ++comps;
        visited[p] = 1;
        stack.assign(1, p);
        while (!stack.empty()) {
            std::int32_t q = stack.back();
            stack.pop_back();
            nbrs.clear();
            mapper::neighbors_into(field.width(), field.height(), q, conn, nbrs);
            for (std::int32_t r : nbrs)
                if (!visited[r] && keep(r)) {
                    visited[r] = 1;
                    stack.push_back(r);
                }
        }
    }
    return comps;
}

inline mapper::ScalarField random_field(int width, int height, std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    std::vector<double> values(static_cast<std::size_t>(width) * height);
    for (double& v : values) v = dist(rng);
    return mapper::ScalarField(width, height, std::move(values));
}

// Smooth-ish random field: random coarse lattice upsampled bilinearly.
// Produces fields whose Mapper graphs have non-trivial structure without
// the per-pixel noise of random_field.
inline mapper::ScalarField random_smooth_field(int size, std::uint32_t seed, int lattice = 5) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    std::vector<double> grid(static_cast<std::size_t>(lattice) * lattice);
    for (double& g : grid) g = dist(rng);
    std::vector<double> values(static_cast<std::size_t>(size) * size);
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
            double gx = static_cast<double>(x) / (size - 1) * (lattice - 1);
            double gy = static_cast<double>(y) / (size - 1) * (lattice - 1);
            int x0 = std::min(static_cast<int>(gx), lattice - 2);
            int y0 = std::min(static_cast<int>(gy), lattice - 2);
            double fx = gx - x0, fy = gy - y0;
            double v00 = grid[y0 * lattice + x0];
            double v10 = grid[y0 * lattice + x0 + 1];
            double v01 = grid[(y0 + 1) * lattice + x0];
            double v11 = grid[(y0 + 1) * lattice + x0 + 1];
            values[static_cast<std::size_t>(y) * size + x] =
                (1 - fy) * ((1 - fx) * v00 + fx * v10) + fy * ((1 - fx) * v01 + fx * v11);
        }
    return mapper::ScalarField(size, size, std::move(values));
}

} // namespace oracle
