#pragma once

// Brute-force visibility: least fixpoint of the propagation rule, evaluated
// straight from the entity pools.

#include <vector>

#include "navgrid/ecs.hpp"

namespace oracle {

inline bool opaque_at(const navgrid::State& s, int row, int col) {
    using navgrid::Tag;
    const auto& walls = s.pool(Tag::Wall);
    for (int k = 0; k < walls.capacity; ++k)
        if (walls.active[k] && walls.row[k] == row && walls.col[k] == col) return true;
    const auto& doors = s.pool(Tag::Door);
    for (int k = 0; k < doors.capacity; ++k)
        if (doors.active[k] && doors.row[k] == row && doors.col[k] == col && doors.door_state[k] != 0) return true;
    return false;
}

// Row-major R x R mask, agent at (R-1, R/2) looking towards row 0.
inline std::vector<unsigned char> fov_fixpoint(const navgrid::State& s, int R) {
    static const int kForward[4][2] = {{0, 1}, {1, 0}, {0, -1}, {-1, 0}};
    const int d = s.pools[0].direction[0];
    const int ar = s.pools[0].row[0];
    const int ac = s.pools[0].col[0];
    const int* fwd = kForward[d];
    const int* right = kForward[(d + 1) % 4];
    const int h = s.grid->h;
    const int w = s.grid->w;

    std::vector<unsigned char> inside(static_cast<std::size_t>(R * R)), clear(inside.size()), vis(inside.size());
    for (int i = 0; i < R; ++i) {
        for (int j = 0; j < R; ++j) {
            const int ahead = R - 1 - i;
            const int lateral = j - R / 2;
            const int row = ar + ahead * fwd[0] + lateral * right[0];
            const int col = ac + ahead * fwd[1] + lateral * right[1];
            const auto k = static_cast<std::size_t>(i * R + j);
            inside[k] = row >= 0 && row < h && col >= 0 && col < w;
            clear[k] = inside[k] && ((row == ar && col == ac) || !opaque_at(s, row, col));
        }
    }
    auto lit = [&](int i, int j) {
        if (i < 0 || i >= R || j < 0 || j >= R) return false;
        const auto k = static_cast<std::size_t>(i * R + j);
        return vis[k] && clear[k];
    };
    vis[static_cast<std::size_t>((R - 1) * R + R / 2)] = 1;
    for (bool changed = true; changed;) {
        changed = false;
        for (int i = 0; i < R; ++i) {
            for (int j = 0; j < R; ++j) {
                const auto k = static_cast<std::size_t>(i * R + j);
                if (vis[k] || !inside[k]) continue;
                if (lit(i, j - 1) || lit(i, j + 1) || lit(i + 1, j - 1) || lit(i + 1, j) || lit(i + 1, j + 1)) {
                    vis[k] = 1;
                    changed = true;
                }
            }
        }
    }
    return vis;
}

}  // namespace oracle
