#pragma once

// Entity pools, components and the composite State record.
//
// Every entity class owns a fixed-capacity pool laid out as structure of
// arrays. A pool may hold several lanes back to back (lane i occupies slots
// [i * capacity, (i + 1) * capacity) of every column); a single State is the
// one-lane case and BatchState the n-lane case. Systems never touch the
// storage directly; they work on StateRef / StateCRef views so the same
// kernels drive both layouts.

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "navgrid/rng.hpp"

namespace navgrid {

// Object index table shared with the MiniGrid symbolic encoding.
enum class Tag : std::uint8_t {
    Unseen = 0,
    Floor = 1,
    Wall = 2,
    Door = 4,
    Key = 5,
    Ball = 6,
    Box = 7,
    Goal = 8,
    Lava = 9,
    Player = 10,
};

enum class Colour : std::uint8_t { Red = 0, Green = 1, Blue = 2, Purple = 3, Yellow = 4, Grey = 5 };
inline constexpr int kColourCount = 6;

// East, south, west, north; rotate-right is +1 mod 4.
enum class Direction : std::uint8_t { East = 0, South = 1, West = 2, North = 3 };

enum class DoorState : std::uint8_t { Open = 0, Closed = 1, Locked = 2 };

struct Position {
    int row = -1;
    int col = -1;

    friend bool operator==(const Position&, const Position&) = default;
};

inline constexpr Position kOffGrid{-1, -1};

constexpr Position step_towards(Position p, Direction d, int distance = 1) noexcept {
    constexpr int kRow[4] = {0, 1, 0, -1};
    constexpr int kCol[4] = {1, 0, -1, 0};
    const auto i = static_cast<int>(d);
    return {p.row + distance * kRow[i], p.col + distance * kCol[i]};
}

constexpr Direction rotate(Direction d, int quarter_turns) noexcept {
    return static_cast<Direction>(((static_cast<int>(d) + quarter_turns) % 4 + 4) % 4);
}

std::string to_string(Tag tag);
std::string to_string(Colour colour);

// Pool order. Player first so slot 0 of pool 0 is always the agent.
inline constexpr int kPoolCount = 8;
inline constexpr std::array<Tag, kPoolCount> kPoolTags = {
    Tag::Player, Tag::Wall, Tag::Door, Tag::Key, Tag::Goal, Tag::Lava, Tag::Ball, Tag::Box,
};

// Index into kPoolTags; -1 for Floor/Unseen.
constexpr int pool_index(Tag tag) noexcept {
    for (int i = 0; i < kPoolCount; ++i)
        if (kPoolTags[i] == tag) return i;
    return -1;
}

// Which optional columns a class carries (Position, Tag and Sprite are implicit).
enum ComponentBits : std::uint8_t {
    kHasColour = 1,
    kHasDirection = 2,
    kHasDoorState = 4,
    kHasProbability = 8,
    kHasPocket = 16,
};

constexpr std::uint8_t components_of(Tag tag) noexcept {
    switch (tag) {
        case Tag::Player: return kHasDirection | kHasPocket;
        case Tag::Wall: return kHasColour;
        case Tag::Door: return kHasColour | kHasDoorState;
        case Tag::Key: return kHasColour;
        case Tag::Goal: return kHasColour | kHasProbability;
        case Tag::Ball: return kHasColour | kHasProbability;
        case Tag::Box: return kHasColour | kHasPocket;
        default: return 0;
    }
}

// Entity ids pack the class tag and the slot so a Pocket can name any entity.
constexpr std::int32_t entity_id(Tag tag, int slot) noexcept { return (static_cast<std::int32_t>(tag) << 16) | slot; }
constexpr Tag entity_tag(std::int32_t id) noexcept { return static_cast<Tag>(id >> 16); }
constexpr int entity_slot(std::int32_t id) noexcept { return id & 0xFFFF; }
inline constexpr std::int32_t kNoEntity = -1;

struct GridLayout {
    int h = 0;
    int w = 0;
    std::vector<std::uint8_t> base;  // 1 = floor, 0 = void

    bool in_bounds(Position p) const noexcept { return p.row >= 0 && p.row < h && p.col >= 0 && p.col < w; }
    bool is_floor(Position p) const noexcept { return in_bounds(p) && base[static_cast<std::size_t>(p.row * w + p.col)] != 0; }

    friend bool operator==(const GridLayout&, const GridLayout&) = default;
};

// h, w >= 3; all-floor base.
std::shared_ptr<const GridLayout> make_layout(int h, int w);

struct EventLog {
    bool goal_reached = false;
    Position goal_position = kOffGrid;
    bool lava_fallen = false;
    bool ball_hit = false;
    bool door_done = false;
    std::int8_t door_colour = -1;
    bool picked_up = false;
    std::int32_t picked_id = kNoEntity;

    friend bool operator==(const EventLog&, const EventLog&) = default;
};

struct EntityPool {
    Tag tag = Tag::Wall;
    int capacity = 0;
    std::vector<std::uint8_t> active;
    std::vector<std::int16_t> row;
    std::vector<std::int16_t> col;
    std::vector<std::uint8_t> colour;
    std::vector<std::uint8_t> direction;
    std::vector<std::uint8_t> door_state;
    std::vector<float> probability;
    std::vector<std::int32_t> pocket;

    EntityPool() = default;
    EntityPool(Tag tag, int capacity, std::size_t lanes = 1);

    std::size_t lanes() const noexcept { return capacity == 0 ? 0 : active.size() / static_cast<std::size_t>(capacity); }
    std::size_t memory_bytes() const noexcept;

    friend bool operator==(const EntityPool&, const EntityPool&) = default;
};

using Capacities = std::array<int, kPoolCount>;

template <bool Const>
struct BasicPoolView {
    template <class T>
    using Ptr = std::conditional_t<Const, const T*, T*>;

    Tag tag = Tag::Wall;
    int capacity = 0;
    Ptr<std::uint8_t> active = nullptr;
    Ptr<std::int16_t> row = nullptr;
    Ptr<std::int16_t> col = nullptr;
    Ptr<std::uint8_t> colour = nullptr;
    Ptr<std::uint8_t> direction = nullptr;
    Ptr<std::uint8_t> door_state = nullptr;
    Ptr<float> probability = nullptr;
    Ptr<std::int32_t> pocket = nullptr;

    BasicPoolView() = default;

    template <bool C = Const, std::enable_if_t<C, int> = 0>
    BasicPoolView(const BasicPoolView<false>& other)  // NOLINT(google-explicit-constructor)
        : tag(other.tag), capacity(other.capacity), active(other.active), row(other.row), col(other.col),
          colour(other.colour), direction(other.direction), door_state(other.door_state),
          probability(other.probability), pocket(other.pocket) {}

    Position position(int slot) const noexcept { return {row[slot], col[slot]}; }
    bool at(int slot, Position p) const noexcept { return active[slot] && row[slot] == p.row && col[slot] == p.col; }
    // First active slot at p, or -1.
    int find(Position p) const noexcept {
        for (int s = 0; s < capacity; ++s)
            if (at(s, p)) return s;
        return -1;
    }
    int active_count() const noexcept {
        int n = 0;
        for (int s = 0; s < capacity; ++s) n += active[s] != 0;
        return n;
    }
};

using PoolRef = BasicPoolView<false>;
using PoolCRef = BasicPoolView<true>;

template <bool Const>
struct BasicStateView {
    template <class T>
    using Ptr = std::conditional_t<Const, const T*, T*>;

    const GridLayout* grid = nullptr;
    std::array<BasicPoolView<Const>, kPoolCount> pools{};
    Ptr<std::int8_t> mission = nullptr;
    Ptr<EventLog> events = nullptr;
    Ptr<Key> key = nullptr;
    Ptr<std::int32_t> t = nullptr;

    BasicStateView() = default;

    template <bool C = Const, std::enable_if_t<C, int> = 0>
    BasicStateView(const BasicStateView<false>& other)  // NOLINT(google-explicit-constructor)
        : grid(other.grid), mission(other.mission), events(other.events), key(other.key), t(other.t) {
        for (int i = 0; i < kPoolCount; ++i) pools[i] = other.pools[i];
    }

    const BasicPoolView<Const>& pool(Tag tag) const noexcept { return pools[static_cast<std::size_t>(pool_index(tag))]; }
    const BasicPoolView<Const>& player() const noexcept { return pools[0]; }
    Position player_position() const noexcept { return pools[0].position(0); }
    Direction player_direction() const noexcept { return static_cast<Direction>(pools[0].direction[0]); }
};

using StateRef = BasicStateView<false>;
using StateCRef = BasicStateView<true>;

PoolRef lane_view(EntityPool& pool, std::size_t lane) noexcept;
PoolCRef lane_view(const EntityPool& pool, std::size_t lane) noexcept;

// Full world snapshot. A plain value: copying yields an independent state and
// == compares every field (the layout by content).
struct State {
    std::shared_ptr<const GridLayout> grid;
    std::array<EntityPool, kPoolCount> pools;
    std::int8_t mission = -1;  // target colour, -1 for none
    EventLog events;
    Key key;
    std::int32_t t = 0;

    State() = default;
    State(std::shared_ptr<const GridLayout> layout, const Capacities& capacities);

    StateRef view() noexcept;
    StateCRef view() const noexcept;

    const EntityPool& pool(Tag tag) const { return pools[static_cast<std::size_t>(pool_index(tag))]; }
    Capacities capacities() const noexcept;
    int height() const noexcept { return grid->h; }
    int width() const noexcept { return grid->w; }

    friend bool operator==(const State& a, const State& b);
};

class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class PlacementError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Per-class component values; fields that a class lacks are ignored.
struct SpawnArgs {
    Colour colour = Colour::Grey;
    Direction direction = Direction::East;
    DoorState door = DoorState::Closed;
    float probability = 1.0f;
};

// Default colour for classes whose colour the generators never vary.
Colour default_colour(Tag tag) noexcept;

// Blocking entities may not share a cell with anything; a Player may stand
// on a goal, lava or open door.
bool blocks(Tag tag, DoorState door = DoorState::Closed) noexcept;

// In-place spawn into a view; returns the slot used.
int spawn_into(StateRef state, Tag tag, Position position, const SpawnArgs& args = {});
State spawn(const State& state, Tag tag, Position position, const SpawnArgs& args = {});

struct EntityRef {
    Tag tag = Tag::Floor;
    int slot = -1;

    friend bool operator==(const EntityRef&, const EntityRef&) = default;
};

// Topmost active entity at a cell. Out of bounds throws std::invalid_argument.
std::optional<EntityRef> entity_at(StateCRef state, Position position);
std::optional<EntityRef> entity_at(const State& state, Position position);

// Stacking priority, highest first.
inline constexpr std::array<Tag, kPoolCount> kDrawOrderTopFirst = {
    Tag::Player, Tag::Ball, Tag::Box, Tag::Key, Tag::Door, Tag::Goal, Tag::Lava, Tag::Wall,
};

// Checks the State invariants (single player, in-bounds actives, pocket
// validity, no overlapping blockers). Returns an empty string when valid.
std::string validate(StateCRef state);

}  // namespace navgrid
