#include "navgrid/grid.hpp"

#include <algorithm>

namespace navgrid {

bool walkable(StateCRef s, Position p) {
    if (!s.grid->is_floor(p)) return false;
    for (const auto& pool : s.pools) {
        const int slot = pool.find(p);
        if (slot < 0) continue;
        const auto door = pool.door_state ? static_cast<DoorState>(pool.door_state[slot]) : DoorState::Closed;
        if (blocks(pool.tag, door)) return false;
    }
    return true;
}

bool walkable(const State& state, Position p) { return walkable(state.view(), p); }

bool transparent(StateCRef s, Position p) {
    if (!s.grid->in_bounds(p)) return false;
    if (s.pool(Tag::Wall).find(p) >= 0) return false;
    const auto& doors = s.pool(Tag::Door);
    for (int slot = 0; slot < doors.capacity; ++slot)
        if (doors.at(slot, p) && doors.door_state[slot] != static_cast<std::uint8_t>(DoorState::Open)) return false;
    return true;
}

bool transparent(const State& state, Position p) { return transparent(state.view(), p); }

void opacity_raster(StateCRef s, std::span<std::uint8_t> out) {
    const int w = s.grid->w;
    std::fill(out.begin(), out.end(), std::uint8_t{0});
    const auto& walls = s.pool(Tag::Wall);
    for (int slot = 0; slot < walls.capacity; ++slot)
        if (walls.active[slot]) out[static_cast<std::size_t>(walls.row[slot] * w + walls.col[slot])] = 1;
    const auto& doors = s.pool(Tag::Door);
    for (int slot = 0; slot < doors.capacity; ++slot)
        if (doors.active[slot] && doors.door_state[slot] != static_cast<std::uint8_t>(DoorState::Open))
            out[static_cast<std::size_t>(doors.row[slot] * w + doors.col[slot])] = 1;
}

void visibility_from_opacity(std::span<const std::uint8_t> opaque, int h, int w, Position agent, Direction facing,
                             int view_size, std::span<std::uint8_t> out) {
    const int r = view_size;
    // Egocentric transparency; out-of-grid cells are opaque and never visible.
    std::uint8_t see[32 * 32];
    std::uint8_t inside[32 * 32];
    std::vector<std::uint8_t> big_see;
    std::vector<std::uint8_t> big_inside;
    std::uint8_t* see_p = see;
    std::uint8_t* inside_p = inside;
    if (r > 32) {
        big_see.resize(static_cast<std::size_t>(r * r));
        big_inside.resize(static_cast<std::size_t>(r * r));
        see_p = big_see.data();
        inside_p = big_inside.data();
    }
    for (int i = 0; i < r; ++i) {
        for (int j = 0; j < r; ++j) {
            const Position p = egocentric_to_world(agent, facing, r, i, j);
            const bool in = p.row >= 0 && p.row < h && p.col >= 0 && p.col < w;
            inside_p[i * r + j] = in;
            see_p[i * r + j] = in && !opaque[static_cast<std::size_t>(p.row * w + p.col)];
        }
    }
    // The agent's own cell is always see-through.
    see_p[(r - 1) * r + r / 2] = 1;

    std::fill(out.begin(), out.end(), std::uint8_t{0});
    out[static_cast<std::size_t>((r - 1) * r + r / 2)] = 1;
    for (int i = r - 1; i >= 0; --i) {
        std::uint8_t* row = out.data() + i * r;
        std::uint8_t* above = i > 0 ? out.data() + (i - 1) * r : nullptr;
        const std::uint8_t* row_see = see_p + i * r;
        for (int j = 0; j < r - 1; ++j) {
            if (!row[j] || !row_see[j]) continue;
            row[j + 1] = 1;
            if (above) {
                above[j + 1] = 1;
                above[j] = 1;
            }
        }
        for (int j = r - 1; j > 0; --j) {
            if (!row[j] || !row_see[j]) continue;
            row[j - 1] = 1;
            if (above) {
                above[j - 1] = 1;
                above[j] = 1;
            }
        }
    }
    for (int k = 0; k < r * r; ++k) out[static_cast<std::size_t>(k)] &= inside_p[k];
}

VisibilityMask visibility_mask(StateCRef s, int view_size) {
    require_odd_view(view_size);
    std::vector<std::uint8_t> opaque(static_cast<std::size_t>(s.grid->h * s.grid->w));
    opacity_raster(s, opaque);
    VisibilityMask mask;
    mask.size = view_size;
    mask.cells.resize(static_cast<std::size_t>(view_size * view_size));
    visibility_from_opacity(opaque, s.grid->h, s.grid->w, s.player_position(), s.player_direction(), view_size,
                            mask.cells);
    return mask;
}

VisibilityMask visibility_mask(const State& state, int view_size) { return visibility_mask(state.view(), view_size); }

}  // namespace navgrid
