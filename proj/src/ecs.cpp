#include "navgrid/ecs.hpp"

#include <sstream>

namespace navgrid {

std::string to_string(Tag tag) {
    switch (tag) {
        case Tag::Unseen: return "unseen";
        case Tag::Floor: return "floor";
        case Tag::Wall: return "wall";
        case Tag::Door: return "door";
        case Tag::Key: return "key";
        case Tag::Ball: return "ball";
        case Tag::Box: return "box";
        case Tag::Goal: return "goal";
        case Tag::Lava: return "lava";
        case Tag::Player: return "player";
    }
    return "tag(" + std::to_string(static_cast<int>(tag)) + ")";
}

std::string to_string(Colour colour) {
    static constexpr const char* kNames[] = {"red", "green", "blue", "purple", "yellow", "grey"};
    const auto i = static_cast<int>(colour);
    return i >= 0 && i < kColourCount ? kNames[i] : "colour(" + std::to_string(i) + ")";
}

std::shared_ptr<const GridLayout> make_layout(int h, int w) {
    if (h < 3 || w < 3)
        throw std::invalid_argument("grid must be at least 3x3, got " + std::to_string(h) + "x" + std::to_string(w));
    auto layout = std::make_shared<GridLayout>();
    layout->h = h;
    layout->w = w;
    layout->base.assign(static_cast<std::size_t>(h * w), 1);
    return layout;
}

EntityPool::EntityPool(Tag tag_, int capacity_, std::size_t lanes) : tag(tag_), capacity(capacity_) {
    if (capacity_ < 0) throw std::invalid_argument("pool capacity must be non-negative");
    const std::size_t n = static_cast<std::size_t>(capacity_) * lanes;
    const auto comps = components_of(tag_);
    active.assign(n, 0);
    row.assign(n, -1);
    col.assign(n, -1);
    if (comps & kHasColour) colour.assign(n, static_cast<std::uint8_t>(default_colour(tag_)));
    if (comps & kHasDirection) direction.assign(n, 0);
    if (comps & kHasDoorState) door_state.assign(n, static_cast<std::uint8_t>(DoorState::Closed));
    if (comps & kHasProbability) probability.assign(n, 1.0f);
    if (comps & kHasPocket) pocket.assign(n, kNoEntity);
}

std::size_t EntityPool::memory_bytes() const noexcept {
    return active.size() + 2 * row.size() * sizeof(std::int16_t) + colour.size() + direction.size() +
           door_state.size() + probability.size() * sizeof(float) + pocket.size() * sizeof(std::int32_t);
}

namespace {

template <class View, class Pool>
View make_lane_view(Pool& pool, std::size_t lane) noexcept {
    const std::size_t off = lane * static_cast<std::size_t>(pool.capacity);
    auto ptr = [off](auto& column) { return column.empty() ? nullptr : column.data() + off; };
    View v;
    v.tag = pool.tag;
    v.capacity = pool.capacity;
    v.active = ptr(pool.active);
    v.row = ptr(pool.row);
    v.col = ptr(pool.col);
    v.colour = ptr(pool.colour);
    v.direction = ptr(pool.direction);
    v.door_state = ptr(pool.door_state);
    v.probability = ptr(pool.probability);
    v.pocket = ptr(pool.pocket);
    return v;
}

}  // namespace

PoolRef lane_view(EntityPool& pool, std::size_t lane) noexcept { return make_lane_view<PoolRef>(pool, lane); }
PoolCRef lane_view(const EntityPool& pool, std::size_t lane) noexcept { return make_lane_view<PoolCRef>(pool, lane); }

State::State(std::shared_ptr<const GridLayout> layout, const Capacities& capacities) : grid(std::move(layout)) {
    if (!grid) throw std::invalid_argument("State requires a grid layout");
    if (capacities[0] != 1) throw std::invalid_argument("player pool capacity must be exactly 1");
    for (int i = 0; i < kPoolCount; ++i) pools[i] = EntityPool(kPoolTags[i], capacities[i]);
}

StateRef State::view() noexcept {
    StateRef v;
    v.grid = grid.get();
    for (int i = 0; i < kPoolCount; ++i) v.pools[i] = lane_view(pools[i], 0);
    v.mission = &mission;
    v.events = &events;
    v.key = &key;
    v.t = &t;
    return v;
}

StateCRef State::view() const noexcept {
    StateCRef v;
    v.grid = grid.get();
    for (int i = 0; i < kPoolCount; ++i) v.pools[i] = lane_view(pools[i], 0);
    v.mission = &mission;
    v.events = &events;
    v.key = &key;
    v.t = &t;
    return v;
}

Capacities State::capacities() const noexcept {
    Capacities c{};
    for (int i = 0; i < kPoolCount; ++i) c[i] = pools[i].capacity;
    return c;
}

bool operator==(const State& a, const State& b) {
    const bool same_grid = a.grid == b.grid || (a.grid && b.grid && *a.grid == *b.grid);
    return same_grid && a.pools == b.pools && a.mission == b.mission && a.events == b.events && a.key == b.key &&
           a.t == b.t;
}

Colour default_colour(Tag tag) noexcept {
    switch (tag) {
        case Tag::Goal: return Colour::Green;
        case Tag::Player: return Colour::Red;
        case Tag::Lava: return Colour::Red;
        case Tag::Ball: return Colour::Blue;
        case Tag::Key:
        case Tag::Door: return Colour::Yellow;
        case Tag::Box: return Colour::Purple;
        default: return Colour::Grey;
    }
}

bool blocks(Tag tag, DoorState door) noexcept {
    switch (tag) {
        case Tag::Wall:
        case Tag::Key:
        case Tag::Ball:
        case Tag::Box:
        case Tag::Player: return true;
        case Tag::Door: return door != DoorState::Open;
        default: return false;
    }
}

namespace {

// Slot of any active entity at p other than the player, plus whether it blocks.
struct CellContents {
    bool occupied = false;
    bool blocking = false;
    bool has_player = false;
};

CellContents contents(StateCRef s, Position p) {
    CellContents c;
    for (int i = 0; i < kPoolCount; ++i) {
        const auto& pool = s.pools[i];
        const int slot = pool.find(p);
        if (slot < 0) continue;
        if (pool.tag == Tag::Player) {
            c.has_player = true;
            continue;
        }
        c.occupied = true;
        const auto door = pool.door_state ? static_cast<DoorState>(pool.door_state[slot]) : DoorState::Closed;
        c.blocking = c.blocking || blocks(pool.tag, door);
    }
    return c;
}

}  // namespace

int spawn_into(StateRef s, Tag tag, Position position, const SpawnArgs& args) {
    const int pi = pool_index(tag);
    if (pi < 0) throw std::invalid_argument("cannot spawn entity of class " + to_string(tag));
    if (!s.grid->is_floor(position))
        throw PlacementError("cannot place " + to_string(tag) + " at (" + std::to_string(position.row) + ", " +
                             std::to_string(position.col) + "): outside the floor");
    auto& pool = s.pools[static_cast<std::size_t>(pi)];
    // Inactive slots referenced by a pocket are held, not free.
    auto held = [&](int i) {
        const std::int32_t id = entity_id(tag, i);
        for (const auto& holder : s.pools) {
            if (!holder.pocket) continue;
            for (int h = 0; h < holder.capacity; ++h)
                if (holder.pocket[h] == id) return true;
        }
        return false;
    };
    int slot = -1;
    for (int i = 0; i < pool.capacity; ++i) {
        if (!pool.active[i] && !held(i)) {
            slot = i;
            break;
        }
    }
    if (slot < 0)
        throw CapacityError(to_string(tag) + " pool is full (capacity " + std::to_string(pool.capacity) + ")");

    const auto here = contents(s, position);
    const bool walk_over = tag == Tag::Player && !here.blocking && !here.has_player;
    if ((here.occupied || here.has_player) && !walk_over)
        throw PlacementError("cell (" + std::to_string(position.row) + ", " + std::to_string(position.col) +
                             ") is already occupied");

    pool.active[slot] = 1;
    pool.row[slot] = static_cast<std::int16_t>(position.row);
    pool.col[slot] = static_cast<std::int16_t>(position.col);
    if (pool.colour) pool.colour[slot] = static_cast<std::uint8_t>(args.colour);
    if (pool.direction) pool.direction[slot] = static_cast<std::uint8_t>(args.direction);
    if (pool.door_state) pool.door_state[slot] = static_cast<std::uint8_t>(args.door);
    if (pool.probability) {
        if (!(args.probability >= 0.0f && args.probability <= 1.0f))
            throw std::invalid_argument("probability must lie in [0, 1]");
        pool.probability[slot] = args.probability;
    }
    if (pool.pocket) pool.pocket[slot] = kNoEntity;
    return slot;
}

State spawn(const State& state, Tag tag, Position position, const SpawnArgs& args) {
    State next = state;
    spawn_into(next.view(), tag, position, args);
    return next;
}

std::optional<EntityRef> entity_at(StateCRef s, Position position) {
    if (!s.grid->in_bounds(position))
        throw std::invalid_argument("entity_at: position (" + std::to_string(position.row) + ", " +
                                    std::to_string(position.col) + ") out of bounds");
    for (Tag tag : kDrawOrderTopFirst) {
        const int slot = s.pool(tag).find(position);
        if (slot >= 0) return EntityRef{tag, slot};
    }
    return std::nullopt;
}

std::optional<EntityRef> entity_at(const State& state, Position position) { return entity_at(state.view(), position); }

std::string validate(StateCRef s) {
    std::ostringstream err;
    const auto& player = s.player();
    if (player.capacity != 1 || !player.active[0]) err << "expected exactly one active player; ";
    std::vector<int> blockers(static_cast<std::size_t>(s.grid->h * s.grid->w), 0);
    for (const auto& pool : s.pools) {
        for (int slot = 0; slot < pool.capacity; ++slot) {
            const Position p = pool.position(slot);
            if (!pool.active[slot]) {
                if (p != kOffGrid) err << to_string(pool.tag) << "[" << slot << "] inactive but positioned; ";
                continue;
            }
            if (!s.grid->in_bounds(p)) {
                err << to_string(pool.tag) << "[" << slot << "] out of bounds; ";
                continue;
            }
            const auto door = pool.door_state ? static_cast<DoorState>(pool.door_state[slot]) : DoorState::Closed;
            if (blocks(pool.tag, door) && ++blockers[static_cast<std::size_t>(p.row * s.grid->w + p.col)] > 1)
                err << "two blocking entities at (" << p.row << ", " << p.col << "); ";
        }
    }
    if (player.capacity == 1) {
        const std::int32_t held = player.pocket[0];
        if (held != kNoEntity) {
            const Tag tag = entity_tag(held);
            const int pi = pool_index(tag);
            if (tag != Tag::Key || pi < 0 || entity_slot(held) >= s.pools[pi].capacity)
                err << "pocket holds a non-pickable id; ";
            else if (s.pools[pi].active[entity_slot(held)])
                err << "pocket holds an entity that is still on the grid; ";
        }
    }
    return err.str();
}

}  // namespace navgrid
