#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "navgrid/ecs.hpp"

namespace navgrid {

// Default egocentric view size.
inline constexpr int kDefaultViewSize = 7;

// Out of bounds reads as blocked.
bool walkable(StateCRef state, Position position);
bool walkable(const State& state, Position position);

// Walls and closed/locked doors are opaque; out of bounds is opaque.
bool transparent(StateCRef state, Position position);
bool transparent(const State& state, Position position);

// Egocentric frame: the agent sits at (R - 1, R / 2) facing row 0.
// Cell (i, j) of the view maps to the world cell i rows ahead of the agent's
// bottom row and (j - R/2) cells to its right.
constexpr Position egocentric_to_world(Position agent, Direction facing, int view_size, int i, int j) noexcept {
    const int ahead = view_size - 1 - i;
    const int right = j - view_size / 2;
    const Position forward = step_towards(agent, facing, ahead);
    return step_towards(forward, rotate(facing, 1), right);
}

struct VisibilityMask {
    int size = 0;
    std::vector<std::uint8_t> cells;  // row-major size x size, 1 = visible

    bool visible(int i, int j) const noexcept { return cells[static_cast<std::size_t>(i * size + j)] != 0; }
    friend bool operator==(const VisibilityMask&, const VisibilityMask&) = default;
};

inline void require_odd_view(int view_size) {
    if (view_size < 3 || view_size % 2 == 0)
        throw std::invalid_argument("view size must be odd and >= 3, got " + std::to_string(view_size));
}

VisibilityMask visibility_mask(StateCRef state, int view_size);
VisibilityMask visibility_mask(const State& state, int view_size);

// Sweep kernel over a world opacity raster (h * w, 1 = opaque). Writes the
// view_size^2 mask into `out`.
void visibility_from_opacity(std::span<const std::uint8_t> opaque, int h, int w, Position agent, Direction facing,
                             int view_size, std::span<std::uint8_t> out);

// World opacity raster for a state: walls and non-open doors.
void opacity_raster(StateCRef state, std::span<std::uint8_t> out);

template <class T>
struct Tensor3 {
    int rows = 0;
    int cols = 0;
    int channels = 0;
    std::vector<T> data;

    Tensor3() = default;
    Tensor3(int r, int c, int ch, T fill = T{})
        : rows(r), cols(c), channels(ch), data(static_cast<std::size_t>(r * c * ch), fill) {}

    T& at(int r, int c, int ch = 0) { return data[static_cast<std::size_t>((r * cols + c) * channels + ch)]; }
    const T& at(int r, int c, int ch = 0) const {
        return data[static_cast<std::size_t>((r * cols + c) * channels + ch)];
    }
    friend bool operator==(const Tensor3&, const Tensor3&) = default;
};

// R x R window ahead of the agent, rotated so it faces up; out-of-grid cells
// take `unseen`.
template <class T>
Tensor3<T> egocentric_crop(const Tensor3<T>& full, Position agent, Direction facing, int view_size, T unseen = T{}) {
    require_odd_view(view_size);
    Tensor3<T> out(view_size, view_size, full.channels, unseen);
    for (int i = 0; i < view_size; ++i) {
        for (int j = 0; j < view_size; ++j) {
            const Position p = egocentric_to_world(agent, facing, view_size, i, j);
            if (p.row < 0 || p.row >= full.rows || p.col < 0 || p.col >= full.cols) continue;
            for (int ch = 0; ch < full.channels; ++ch) out.at(i, j, ch) = full.at(p.row, p.col, ch);
        }
    }
    return out;
}

}  // namespace navgrid
