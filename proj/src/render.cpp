#include "navgrid/render.hpp"

#include <png.h>

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <memory>
#include <stdexcept>

namespace navgrid {

std::array<std::uint8_t, 3> palette(Colour colour) noexcept {
    switch (colour) {
        case Colour::Red: return {255, 0, 0};
        case Colour::Green: return {0, 255, 0};
        case Colour::Blue: return {0, 0, 255};
        case Colour::Purple: return {112, 39, 195};
        case Colour::Yellow: return {255, 255, 0};
        case Colour::Grey: return {100, 100, 100};
    }
    return {0, 0, 0};
}

namespace {

using Rgb = std::array<std::uint8_t, 3>;

constexpr Rgb kBlack{0, 0, 0};
constexpr Rgb kGridLine{100, 100, 100};
constexpr Rgb kUnseen{30, 30, 30};
constexpr Rgb kLava{255, 128, 0};

// Integer-only canvas; coordinates in pixels, (x, y) = (column, row).
class Canvas {
public:
    explicit Canvas(std::uint8_t* px) : px_(px) {}

    void set(int x, int y, Rgb c) {
        if (x < 0 || y < 0 || x >= kTileSize || y >= kTileSize) return;
        std::uint8_t* p = px_ + (y * kTileSize + x) * 3;
        p[0] = c[0];
        p[1] = c[1];
        p[2] = c[2];
    }
    void fill(Rgb c) { rect(0, 0, kTileSize - 1, kTileSize - 1, c); }
    void rect(int x0, int y0, int x1, int y1, Rgb c) {
        for (int y = y0; y <= y1; ++y)
            for (int x = x0; x <= x1; ++x) set(x, y, c);
    }
    void ring(int x0, int y0, int x1, int y1, int thickness, Rgb c) {
        rect(x0, y0, x1, y0 + thickness - 1, c);
        rect(x0, y1 - thickness + 1, x1, y1, c);
        rect(x0, y0, x0 + thickness - 1, y1, c);
        rect(x1 - thickness + 1, y0, x1, y1, c);
    }
    // Disc test on pixel centres in half-pixel units: centre (cx2, cy2), radius r2.
    void disc(int cx2, int cy2, int r2, Rgb c) {
        for (int y = 0; y < kTileSize; ++y) {
            for (int x = 0; x < kTileSize; ++x) {
                const int dx = 2 * x + 1 - cx2;
                const int dy = 2 * y + 1 - cy2;
                if (dx * dx + dy * dy <= r2 * r2) set(x, y, c);
            }
        }
    }
    // Triangle by edge functions on half-pixel centres; vertices in half-pixel units.
    void triangle(std::array<int, 6> v, Rgb c) {
        auto edge = [](int ax, int ay, int bx, int by, int px, int py) {
            return (bx - ax) * (py - ay) - (by - ay) * (px - ax);
        };
        for (int y = 0; y < kTileSize; ++y) {
            for (int x = 0; x < kTileSize; ++x) {
                const int px = 2 * x + 1;
                const int py = 2 * y + 1;
                const int e0 = edge(v[0], v[1], v[2], v[3], px, py);
                const int e1 = edge(v[2], v[3], v[4], v[5], px, py);
                const int e2 = edge(v[4], v[5], v[0], v[1], px, py);
                const bool inside = (e0 >= 0 && e1 >= 0 && e2 >= 0) || (e0 <= 0 && e1 <= 0 && e2 <= 0);
                if (inside) set(x, y, c);
            }
        }
    }
    void grid_lines() {
        for (int i = 0; i < kTileSize; ++i) {
            set(i, 0, kGridLine);
            set(0, i, kGridLine);
        }
    }

private:
    std::uint8_t* px_;
};

Rgb dim(Rgb c) {
    return {static_cast<std::uint8_t>(c[0] * 115 / 255), static_cast<std::uint8_t>(c[1] * 115 / 255),
            static_cast<std::uint8_t>(c[2] * 115 / 255)};
}

void draw(Canvas& cv, const TileKey& key) {
    const Rgb colour = palette(static_cast<Colour>(key.colour));
    if (key.tag == Tag::Unseen) {
        cv.fill(kUnseen);
        return;
    }
    cv.fill(kBlack);
    switch (key.tag) {
        case Tag::Floor: break;
        case Tag::Wall: cv.fill(colour); break;
        case Tag::Goal:
            cv.rect(1, 1, kTileSize - 1, kTileSize - 1, colour);
            cv.ring(7, 7, 24, 24, 1, kBlack);
            break;
        case Tag::Lava:
            cv.rect(1, 1, kTileSize - 1, kTileSize - 1, kLava);
            for (int base : {8, 16, 24})
                for (int x = 5; x <= 26; ++x) cv.set(x, base + ((x / 3) % 2), kBlack);
            break;
        case Tag::Door:
            if (key.state == static_cast<std::uint8_t>(DoorState::Open)) {
                cv.rect(27, 0, 31, 31, colour);
                cv.rect(28, 1, 30, 30, kBlack);
            } else if (key.state == static_cast<std::uint8_t>(DoorState::Closed)) {
                cv.fill(colour);
                cv.ring(2, 2, 29, 29, 1, kBlack);
                cv.disc(48, 32, 4, kBlack);
            } else {
                cv.fill(dim(colour));
                cv.ring(2, 2, 29, 29, 1, kBlack);
                cv.rect(21, 15, 25, 17, kBlack);
            }
            break;
        case Tag::Key:
            cv.rect(15, 10, 18, 27, colour);
            cv.rect(19, 19, 21, 20, colour);
            cv.rect(19, 23, 21, 24, colour);
            cv.disc(34, 18, 12, colour);
            cv.disc(34, 18, 6, kBlack);
            break;
        case Tag::Ball: cv.disc(32, 32, 20, colour); break;
        case Tag::Box:
            cv.ring(4, 4, 27, 27, 2, colour);
            cv.rect(4, 15, 27, 16, colour);
            break;
        case Tag::Player: {
            // East-facing triangle in half-pixel units, rotated per direction.
            std::array<int, 6> v = {8, 8, 56, 32, 8, 56};
            for (int r = 0; r < key.direction; ++r) {
                for (int k = 0; k < 6; k += 2) {
                    const int x = v[k];
                    const int y = v[k + 1];
                    v[k] = 64 - y;  // 90 degrees clockwise about the tile centre
                    v[k + 1] = x;
                }
            }
            cv.triangle(v, palette(Colour::Red));
            break;
        }
        default: break;
    }
    cv.grid_lines();
}

}  // namespace

SpriteRegistry::SpriteRegistry() {
    keys_.push_back({Tag::Floor, 0, 0, 0});
    keys_.push_back({Tag::Unseen, 0, 0, 0});
    keys_.push_back({Tag::Lava, 0, 0, 0});
    for (std::uint8_t d = 0; d < 4; ++d) keys_.push_back({Tag::Player, 0, 0, d});
    for (Tag tag : {Tag::Wall, Tag::Key, Tag::Ball, Tag::Box, Tag::Goal})
        for (std::uint8_t c = 0; c < kColourCount; ++c) keys_.push_back({tag, c, 0, 0});
    for (std::uint8_t c = 0; c < kColourCount; ++c)
        for (std::uint8_t st = 0; st < 3; ++st) keys_.push_back({Tag::Door, c, st, 0});

    pixels_.assign(keys_.size() * kTileBytes, 0);
    for (std::size_t i = 0; i < keys_.size(); ++i) {
        Canvas cv(pixels_.data() + i * kTileBytes);
        draw(cv, keys_[i]);
    }
}

const SpriteRegistry& SpriteRegistry::instance() {
    static const SpriteRegistry registry;
    return registry;
}

int SpriteRegistry::index_of(const TileKey& key) const {
    // Layout mirrors the constructor.
    switch (key.tag) {
        case Tag::Floor: return 0;
        case Tag::Unseen: return 1;
        case Tag::Lava: return 2;
        case Tag::Player: return 3 + (key.direction & 3);
        case Tag::Wall: return 7 + key.colour;
        case Tag::Key: return 7 + kColourCount + key.colour;
        case Tag::Ball: return 7 + 2 * kColourCount + key.colour;
        case Tag::Box: return 7 + 3 * kColourCount + key.colour;
        case Tag::Goal: return 7 + 4 * kColourCount + key.colour;
        case Tag::Door: return 7 + 5 * kColourCount + key.colour * 3 + key.state;
    }
    throw std::invalid_argument("no sprite for tag " + to_string(key.tag));
}

std::optional<TileKey> SpriteRegistry::identify(std::span<const std::uint8_t> tile) const {
    if (tile.size() != static_cast<std::size_t>(kTileBytes)) return std::nullopt;
    for (std::size_t i = 0; i < keys_.size(); ++i)
        if (std::memcmp(pixels_.data() + i * kTileBytes, tile.data(), kTileBytes) == 0) return keys_[i];
    return std::nullopt;
}

namespace {

int entity_tile(const SpriteRegistry& reg, const PoolCRef& pool, int slot) {
    TileKey key{pool.tag, 0, 0, 0};
    if (pool.colour) key.colour = pool.colour[slot];
    if (pool.door_state) key.state = pool.door_state[slot];
    if (pool.direction) key.direction = pool.direction[slot];
    return reg.index_of(key);
}

}  // namespace

void tile_raster(StateCRef s, std::span<std::int32_t> out) {
    const auto& reg = SpriteRegistry::instance();
    const int h = s.grid->h;
    const int w = s.grid->w;
    for (int k = 0; k < h * w; ++k)
        out[static_cast<std::size_t>(k)] = s.grid->base[static_cast<std::size_t>(k)] ? reg.floor_index() : reg.unseen_index();
    for (auto it = kDrawOrderTopFirst.rbegin(); it != kDrawOrderTopFirst.rend(); ++it) {
        const auto& pool = s.pool(*it);
        for (int slot = 0; slot < pool.capacity; ++slot) {
            if (!pool.active[slot]) continue;
            out[static_cast<std::size_t>(pool.row[slot] * w + pool.col[slot])] = entity_tile(reg, pool, slot);
        }
    }
}

namespace {

void blit(std::span<std::uint8_t> image, int image_cols, int cell_row, int cell_col,
          std::span<const std::uint8_t> tile) {
    const std::size_t stride = static_cast<std::size_t>(image_cols) * kTileSize * 3;
    std::uint8_t* dst = image.data() + static_cast<std::size_t>(cell_row) * kTileSize * stride +
                        static_cast<std::size_t>(cell_col) * kTileSize * 3;
    for (int y = 0; y < kTileSize; ++y)
        std::memcpy(dst + y * stride, tile.data() + y * kTileSize * 3, kTileSize * 3);
}

}  // namespace

void render_full_into(StateCRef s, std::span<std::uint8_t> out) {
    const auto& reg = SpriteRegistry::instance();
    const int h = s.grid->h;
    const int w = s.grid->w;
    std::vector<std::int32_t> raster(static_cast<std::size_t>(h * w));
    tile_raster(s, raster);
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) blit(out, w, r, c, reg.tile(raster[static_cast<std::size_t>(r * w + c)]));
}

Image render_full(StateCRef s) {
    Image img(s.grid->h * kTileSize, s.grid->w * kTileSize, 3);
    render_full_into(s, img.data);
    return img;
}

Image render_full(const State& state) { return render_full(state.view()); }

void render_first_person_into(StateCRef s, int view_size, std::span<std::uint8_t> out) {
    require_odd_view(view_size);
    const auto& reg = SpriteRegistry::instance();
    const int h = s.grid->h;
    const int w = s.grid->w;
    std::vector<std::int32_t> raster(static_cast<std::size_t>(h * w));
    tile_raster(s, raster);
    std::vector<std::uint8_t> opaque(static_cast<std::size_t>(h * w));
    opacity_raster(s, opaque);
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(view_size * view_size));
    const Position agent = s.player_position();
    const Direction facing = s.player_direction();
    visibility_from_opacity(opaque, h, w, agent, facing, view_size, mask);
    const int agent_tile = reg.index_of({Tag::Player, 0, 0, static_cast<std::uint8_t>(Direction::North)});
    for (int i = 0; i < view_size; ++i) {
        for (int j = 0; j < view_size; ++j) {
            int idx = reg.unseen_index();
            if (mask[static_cast<std::size_t>(i * view_size + j)]) {
                const Position p = egocentric_to_world(agent, facing, view_size, i, j);
                idx = raster[static_cast<std::size_t>(p.row * w + p.col)];
                if (p == agent) idx = agent_tile;
            }
            blit(out, view_size, i, j, reg.tile(idx));
        }
    }
}

Image render_first_person(StateCRef s, int view_size) {
    require_odd_view(view_size);
    Image img(view_size * kTileSize, view_size * kTileSize, 3);
    render_first_person_into(s, view_size, img.data);
    return img;
}

Image render_first_person(const State& state, int view_size) { return render_first_person(state.view(), view_size); }

void write_png(const std::string& path, const Image& image) {
    if (image.channels != 3) throw std::invalid_argument("write_png expects an RGB image");
    std::unique_ptr<FILE, int (*)(FILE*)> file(std::fopen(path.c_str(), "wb"), &std::fclose);
    if (!file) throw std::runtime_error("cannot open " + path + " for writing");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw std::runtime_error("png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info || setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, info ? &info : nullptr);
        throw std::runtime_error("failed to encode " + path);
    }
    png_init_io(png, file.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(image.cols), static_cast<png_uint_32>(image.rows), 8,
                 PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int r = 0; r < image.rows; ++r)
        png_write_row(png, image.data.data() + static_cast<std::size_t>(r) * image.cols * 3);
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

}  // namespace navgrid
