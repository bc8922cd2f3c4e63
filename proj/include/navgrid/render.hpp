#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "navgrid/ecs.hpp"
#include "navgrid/grid.hpp"

namespace navgrid {

inline constexpr int kTileSize = 32;
inline constexpr int kTileBytes = kTileSize * kTileSize * 3;

using Image = Tensor3<std::uint8_t>;

struct TileKey {
    Tag tag = Tag::Floor;
    std::uint8_t colour = 0;
    std::uint8_t state = 0;
    std::uint8_t direction = 0;

    friend bool operator==(const TileKey&, const TileKey&) = default;
};

std::array<std::uint8_t, 3> palette(Colour colour) noexcept;

// Procedurally drawn tiles, one per renderable configuration. Built once on
// first use and immutable afterwards.
class SpriteRegistry {
public:
    static const SpriteRegistry& instance();

    int index_of(const TileKey& key) const;
    std::span<const std::uint8_t> tile(int index) const noexcept {
        return {pixels_.data() + static_cast<std::size_t>(index) * kTileBytes, kTileBytes};
    }
    std::span<const std::uint8_t> tile(const TileKey& key) const { return tile(index_of(key)); }
    const TileKey& key(int index) const noexcept { return keys_[static_cast<std::size_t>(index)]; }
    int size() const noexcept { return static_cast<int>(keys_.size()); }

    // Reverse lookup of a 32x32x3 block.
    std::optional<TileKey> identify(std::span<const std::uint8_t> tile) const;

    int floor_index() const noexcept { return 0; }
    int unseen_index() const noexcept { return 1; }

private:
    SpriteRegistry();

    std::vector<TileKey> keys_;
    std::vector<std::uint8_t> pixels_;
};

// Registry index of the topmost entity per cell (h * w), floor where empty.
void tile_raster(StateCRef state, std::span<std::int32_t> out);

Image render_full(StateCRef state);
Image render_full(const State& state);
// Writes 32h x 32w x 3 bytes.
void render_full_into(StateCRef state, std::span<std::uint8_t> out);

// Egocentric image; invisible cells use the unseen tile and the agent is
// drawn facing up.
Image render_first_person(StateCRef state, int view_size);
Image render_first_person(const State& state, int view_size);
void render_first_person_into(StateCRef state, int view_size, std::span<std::uint8_t> out);

// Throws std::runtime_error on I/O failure.
void write_png(const std::string& path, const Image& image);

}  // namespace navgrid
