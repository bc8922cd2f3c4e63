#include "navgrid/worlds.hpp"

#include <algorithm>
#include <regex>
#include <stdexcept>

namespace navgrid {

namespace {

struct Cell {
    Tag tag = Tag::Floor;
    Colour colour = Colour::Grey;
    DoorState door = DoorState::Closed;
};

// Cell-level plan of a world; packed into pools once complete.
class Blueprint {
public:
    Blueprint(int h, int w) : h_(h), w_(w), cells_(static_cast<std::size_t>(h * w)) {}

    int h() const { return h_; }
    int w() const { return w_; }

    void put(Position p, Tag tag, Colour colour, DoorState door = DoorState::Closed) {
        cells_[index(p)] = Cell{tag, colour, door};
    }
    void put(Position p, Tag tag) { put(p, tag, default_colour(tag)); }
    void clear(Position p) { cells_[index(p)] = Cell{}; }
    Tag at(Position p) const { return cells_[index(p)].tag; }

    void border() {
        for (int c = 0; c < w_; ++c) {
            put({0, c}, Tag::Wall);
            put({h_ - 1, c}, Tag::Wall);
        }
        for (int r = 0; r < h_; ++r) {
            put({r, 0}, Tag::Wall);
            put({r, w_ - 1}, Tag::Wall);
        }
    }

    // Floor cells in the inclusive rectangle, minus the player's cell.
    std::vector<Position> free_cells(int r0, int c0, int r1, int c1) const {
        std::vector<Position> out;
        for (int r = r0; r <= r1; ++r)
            for (int c = c0; c <= c1; ++c)
                if (at({r, c}) == Tag::Floor && Position{r, c} != player) out.push_back({r, c});
        return out;
    }
    std::vector<Position> free_interior() const { return free_cells(1, 1, h_ - 2, w_ - 2); }

    Capacities counts() const {
        Capacities caps{};
        caps[0] = 1;
        for (const auto& cell : cells_) {
            const int pi = pool_index(cell.tag);
            if (pi > 0) ++caps[static_cast<std::size_t>(pi)];
        }
        return caps;
    }

    State build(std::shared_ptr<const GridLayout> layout, const Capacities& caps, const Key& key) const {
        if (player == kOffGrid) throw std::logic_error("world design placed no player");
        State state(std::move(layout), caps);
        std::array<int, kPoolCount> next{};
        for (int r = 0; r < h_; ++r) {
            for (int c = 0; c < w_; ++c) {
                const Cell& cell = cells_[index({r, c})];
                const int pi = pool_index(cell.tag);
                if (pi <= 0) continue;
                auto& pool = state.pools[static_cast<std::size_t>(pi)];
                const int slot = next[static_cast<std::size_t>(pi)]++;
                if (slot >= pool.capacity)
                    throw CapacityError(to_string(cell.tag) + " pool overflow while building world (capacity " +
                                        std::to_string(pool.capacity) + ")");
                pool.active[slot] = 1;
                pool.row[slot] = static_cast<std::int16_t>(r);
                pool.col[slot] = static_cast<std::int16_t>(c);
                if (!pool.colour.empty()) pool.colour[slot] = static_cast<std::uint8_t>(cell.colour);
                if (!pool.door_state.empty()) pool.door_state[slot] = static_cast<std::uint8_t>(cell.door);
            }
        }
        auto& agent = state.pools[0];
        agent.active[0] = 1;
        agent.row[0] = static_cast<std::int16_t>(this->player.row);
        agent.col[0] = static_cast<std::int16_t>(this->player.col);
        agent.direction[0] = static_cast<std::uint8_t>(facing);
        agent.pocket[0] = kNoEntity;
        state.mission = mission;
        state.key = key;
        state.t = 0;
        return state;
    }

    Position player = kOffGrid;
    Direction facing = Direction::East;
    std::int8_t mission = -1;

private:
    std::size_t index(Position p) const {
        if (p.row < 0 || p.row >= h_ || p.col < 0 || p.col >= w_)
            throw std::out_of_range("blueprint position out of range");
        return static_cast<std::size_t>(p.row * w_ + p.col);
    }

    int h_;
    int w_;
    std::vector<Cell> cells_;
};

template <class T>
const T& pick(KeyStream& rng, const std::vector<T>& items) {
    if (items.empty()) throw std::logic_error("world generator ran out of free cells");
    return items[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(items.size())))];
}

Direction random_direction(KeyStream& rng) { return static_cast<Direction>(rng.uniform_int(0, 4)); }
Colour random_colour(KeyStream& rng) { return static_cast<Colour>(rng.uniform_int(0, kColourCount)); }

template <class T>
void shuffle(KeyStream& rng, std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i)));
        std::swap(items[i - 1], items[j]);
    }
}

void place_random_player(Blueprint& bp, KeyStream& rng, const std::vector<Position>& cells) {
    bp.player = pick(rng, cells);
    bp.facing = random_direction(rng);
}

Blueprint design_empty(const WorldClass& wc, KeyStream& rng) {
    Blueprint bp(wc.h, wc.w);
    bp.border();
    bp.put({wc.h - 2, wc.w - 2}, Tag::Goal);
    if (wc.kind == WorldKind::EmptyRandom)
        place_random_player(bp, rng, bp.free_interior());
    else
        bp.player = {1, 1};
    return bp;
}

Blueprint design_door_key(const WorldClass& wc, KeyStream& rng) {
    Blueprint bp(wc.h, wc.w);
    bp.border();
    bp.put({wc.h - 2, wc.w - 2}, Tag::Goal);
    const int split_col = static_cast<int>(rng.uniform_int(2, wc.w - 2));
    for (int r = 1; r < wc.h - 1; ++r) bp.put({r, split_col}, Tag::Wall);
    const int door_row = static_cast<int>(rng.uniform_int(1, wc.h - 2));
    bp.put({door_row, split_col}, Tag::Door, Colour::Yellow, DoorState::Locked);
    const auto left = bp.free_cells(1, 1, wc.h - 2, split_col - 1);
    if (wc.random_start)
        place_random_player(bp, rng, left);
    else
        bp.player = {1, 1};
    bp.put(pick(rng, bp.free_cells(1, 1, wc.h - 2, split_col - 1)), Tag::Key, Colour::Yellow);
    return bp;
}

Blueprint design_four_rooms(const WorldClass& wc, KeyStream& rng) {
    Blueprint bp(wc.h, wc.w);
    bp.border();
    const int mid_c = wc.w / 2;
    const int mid_r = wc.h / 2;
    for (int r = 1; r < wc.h - 1; ++r) bp.put({r, mid_c}, Tag::Wall);
    for (int c = 1; c < wc.w - 1; ++c) bp.put({mid_r, c}, Tag::Wall);
    // One gap per wall half.
    bp.clear({static_cast<int>(rng.uniform_int(1, mid_r)), mid_c});
    bp.clear({static_cast<int>(rng.uniform_int(mid_r + 1, wc.h - 1)), mid_c});
    bp.clear({mid_r, static_cast<int>(rng.uniform_int(1, mid_c))});
    bp.clear({mid_r, static_cast<int>(rng.uniform_int(mid_c + 1, wc.w - 1))});
    place_random_player(bp, rng, bp.free_interior());
    bp.put(pick(rng, bp.free_interior()), Tag::Goal);
    return bp;
}

Blueprint design_key_corridor(const WorldClass& wc, KeyStream& rng) {
    const int s = wc.room_size;
    const int span = s - 1;
    Blueprint bp(wc.h, wc.w);
    // 3 columns x R rows of rooms sharing walls.
    for (int j = 0; j <= wc.rows; ++j)
        for (int c = 0; c < wc.w; ++c) bp.put({j * span, c}, Tag::Wall);
    for (int i = 0; i <= 3; ++i)
        for (int r = 0; r < wc.h; ++r) bp.put({r, i * span}, Tag::Wall);
    // Middle column becomes one corridor.
    for (int j = 1; j < wc.rows; ++j)
        for (int c = span + 1; c < 2 * span; ++c) bp.clear({j * span, c});

    auto wall_slot = [&](int room_row) { return room_row * span + static_cast<int>(rng.uniform_int(1, span)); };
    auto room_cells = [&](int room_col, int room_row) {
        return bp.free_cells(room_row * span + 1, room_col * span + 1, room_row * span + span - 1,
                             room_col * span + span - 1);
    };

    const int target_row = static_cast<int>(rng.uniform_int(0, wc.rows));
    const Colour lock_colour = random_colour(rng);
    bp.put({wall_slot(target_row), 2 * span}, Tag::Door, lock_colour, DoorState::Locked);
    for (int j = 0; j < wc.rows; ++j) {
        bp.put({wall_slot(j), span}, Tag::Door, random_colour(rng), DoorState::Closed);
        if (j != target_row) bp.put({wall_slot(j), 2 * span}, Tag::Door, random_colour(rng), DoorState::Closed);
    }
    bp.put(pick(rng, room_cells(2, target_row)), Tag::Goal);
    const int key_row = static_cast<int>(rng.uniform_int(0, wc.rows));
    bp.put(pick(rng, room_cells(0, key_row)), Tag::Key, lock_colour);
    place_random_player(bp, rng, room_cells(1, wc.rows / 2));
    return bp;
}

Blueprint design_lava_gap(const WorldClass& wc, KeyStream& rng) {
    Blueprint bp(wc.h, wc.w);
    bp.border();
    bp.put({wc.h - 2, wc.w - 2}, Tag::Goal);
    bp.player = {1, 1};
    const int gap_col = static_cast<int>(rng.uniform_int(2, wc.w - 2));
    const int gap_row = static_cast<int>(rng.uniform_int(1, wc.h - 1));
    for (int r = 1; r < wc.h - 1; ++r)
        if (r != gap_row) bp.put({r, gap_col}, Tag::Lava);
    return bp;
}

Blueprint design_crossings(const WorldClass& wc, KeyStream& rng) {
    Blueprint bp(wc.h, wc.w);
    bp.border();
    bp.player = {1, 1};
    const Tag barrier = wc.lava_barriers ? Tag::Lava : Tag::Wall;
    // Candidate barriers: vertical at even columns, horizontal at even rows.
    struct Barrier {
        bool vertical;
        int index;
    };
    std::vector<Barrier> candidates;
    for (int c = 2; c < wc.w - 2; c += 2) candidates.push_back({true, c});
    for (int r = 2; r < wc.h - 2; r += 2) candidates.push_back({false, r});
    shuffle(rng, candidates);
    candidates.resize(static_cast<std::size_t>(wc.crossings));
    std::vector<int> cols;
    std::vector<int> rows;
    for (const auto& b : candidates) (b.vertical ? cols : rows).push_back(b.index);
    std::sort(cols.begin(), cols.end());
    std::sort(rows.begin(), rows.end());
    for (int c : cols)
        for (int r = 1; r < wc.h - 1; ++r) bp.put({r, c}, barrier);
    for (int r : rows)
        for (int c = 1; c < wc.w - 1; ++c) bp.put({r, c}, barrier);

    // A monotone path: cross each vertical barrier moving right and each
    // horizontal one moving down, in random order, opening one cell each.
    std::vector<bool> path(cols.size(), true);
    path.insert(path.end(), rows.size(), false);
    shuffle(rng, path);
    std::vector<int> col_limits{0};
    col_limits.insert(col_limits.end(), cols.begin(), cols.end());
    col_limits.push_back(wc.w - 1);
    std::vector<int> row_limits{0};
    row_limits.insert(row_limits.end(), rows.begin(), rows.end());
    row_limits.push_back(wc.h - 1);
    std::size_t room_r = 0;
    std::size_t room_c = 0;
    for (bool right : path) {
        if (right) {
            const int c = col_limits[room_c + 1];
            const int r = static_cast<int>(rng.uniform_int(row_limits[room_r] + 1, row_limits[room_r + 1]));
            bp.clear({r, c});
            ++room_c;
        } else {
            const int r = row_limits[room_r + 1];
            const int c = static_cast<int>(rng.uniform_int(col_limits[room_c] + 1, col_limits[room_c + 1]));
            bp.clear({r, c});
            ++room_r;
        }
    }
    bp.put({wc.h - 2, wc.w - 2}, Tag::Goal);
    return bp;
}

int obstacle_count(const WorldClass& wc) { return (wc.h - 2) * (wc.w - 2) / 9; }

Blueprint design_dynamic_obstacles(const WorldClass& wc, KeyStream& rng) {
    Blueprint bp(wc.h, wc.w);
    bp.border();
    bp.put({wc.h - 2, wc.w - 2}, Tag::Goal);
    bp.player = {1, 1};
    for (int k = 0; k < obstacle_count(wc); ++k) bp.put(pick(rng, bp.free_interior()), Tag::Ball);
    return bp;
}

int dist_shift_strip_row(const WorldClass& wc) { return wc.variant == 1 ? 2 : wc.h - 3; }

Blueprint design_dist_shift(const WorldClass& wc, KeyStream&) {
    Blueprint bp(wc.h, wc.w);
    bp.border();
    bp.put({1, wc.w - 2}, Tag::Goal);
    bp.player = {1, 1};
    const int end = std::max(wc.w - 3, 4);
    for (int c = 3; c < end; ++c) {
        bp.put({1, c}, Tag::Lava);
        bp.put({dist_shift_strip_row(wc), c}, Tag::Lava);
    }
    return bp;
}

Blueprint design_go_to_door(const WorldClass& wc, KeyStream& rng) {
    Blueprint bp(wc.h, wc.w);
    bp.border();
    std::vector<Colour> colours;
    for (int c = 0; c < kColourCount; ++c) colours.push_back(static_cast<Colour>(c));
    shuffle(rng, colours);
    const Position doors[4] = {{0, wc.w / 2}, {wc.h - 1, wc.w / 2}, {wc.h / 2, 0}, {wc.h / 2, wc.w - 1}};
    for (int i = 0; i < 4; ++i) bp.put(doors[i], Tag::Door, colours[static_cast<std::size_t>(i)], DoorState::Closed);
    bp.mission = static_cast<std::int8_t>(colours[static_cast<std::size_t>(rng.uniform_int(0, 4))]);
    place_random_player(bp, rng, bp.free_interior());
    return bp;
}

Blueprint design(const WorldClass& wc, KeyStream& rng) {
    switch (wc.kind) {
        case WorldKind::Empty:
        case WorldKind::EmptyRandom: return design_empty(wc, rng);
        case WorldKind::DoorKey: return design_door_key(wc, rng);
        case WorldKind::FourRooms: return design_four_rooms(wc, rng);
        case WorldKind::KeyCorridor: return design_key_corridor(wc, rng);
        case WorldKind::LavaGap: return design_lava_gap(wc, rng);
        case WorldKind::Crossings: return design_crossings(wc, rng);
        case WorldKind::DynamicObstacles: return design_dynamic_obstacles(wc, rng);
        case WorldKind::DistShift: return design_dist_shift(wc, rng);
        case WorldKind::GoToDoor: return design_go_to_door(wc, rng);
    }
    throw std::invalid_argument("unknown world kind");
}

[[noreturn]] void bad_world(const std::string& why) { throw std::invalid_argument("invalid world: " + why); }

}  // namespace

WorldClass empty_world(int size, bool random_start) {
    WorldClass wc{random_start ? WorldKind::EmptyRandom : WorldKind::Empty, size, size};
    check_world(wc);
    return wc;
}

WorldClass door_key_world(int size, bool random_start) {
    WorldClass wc{WorldKind::DoorKey, size, size};
    wc.random_start = random_start;
    check_world(wc);
    return wc;
}

WorldClass four_rooms_world() { return WorldClass{WorldKind::FourRooms, 17, 17}; }

WorldClass key_corridor_world(int room_size, int rows) {
    WorldClass wc{WorldKind::KeyCorridor, (room_size - 1) * rows + 1, (room_size - 1) * 3 + 1};
    wc.room_size = room_size;
    wc.rows = rows;
    check_world(wc);
    return wc;
}

WorldClass lava_gap_world(int size) {
    WorldClass wc{WorldKind::LavaGap, size, size};
    wc.room_size = size;
    check_world(wc);
    return wc;
}

WorldClass crossings_world(int size, int crossings, bool lava) {
    WorldClass wc{WorldKind::Crossings, size, size};
    wc.room_size = size;
    wc.crossings = crossings;
    wc.lava_barriers = lava;
    check_world(wc);
    return wc;
}

WorldClass dynamic_obstacles_world(int size) {
    WorldClass wc{WorldKind::DynamicObstacles, size, size};
    check_world(wc);
    return wc;
}

WorldClass dist_shift_world(int variant) {
    WorldClass wc{WorldKind::DistShift, variant == 1 ? 6 : 8, variant == 1 ? 6 : 8};
    wc.variant = variant;
    check_world(wc);
    return wc;
}

WorldClass go_to_door_world(int size) {
    WorldClass wc{WorldKind::GoToDoor, size, size};
    check_world(wc);
    return wc;
}

void check_world(const WorldClass& wc) {
    if (wc.h < 3 || wc.w < 3) bad_world("grid must be at least 3x3");
    switch (wc.kind) {
        case WorldKind::Empty:
        case WorldKind::EmptyRandom:
        case WorldKind::DynamicObstacles:
            if (wc.h < 4 || wc.w < 4) bad_world("needs at least 4x4");
            break;
        case WorldKind::DoorKey:
            if (wc.h < 5 || wc.w < 5) bad_world("DoorKey needs at least 5x5");
            break;
        case WorldKind::FourRooms:
            if (wc.h < 7 || wc.w < 7) bad_world("FourRooms needs at least 7x7");
            break;
        case WorldKind::KeyCorridor:
            if (wc.room_size < 3 || wc.rows < 1) bad_world("KeyCorridor needs S >= 3 and R >= 1");
            if (wc.h != (wc.room_size - 1) * wc.rows + 1 || wc.w != (wc.room_size - 1) * 3 + 1)
                bad_world("KeyCorridor size does not match S and R");
            break;
        case WorldKind::LavaGap:
            if (wc.h < 5 || wc.w < 5) bad_world("LavaGap needs at least 5x5");
            break;
        case WorldKind::Crossings: {
            if (wc.h < 5 || wc.w < 5 || wc.h % 2 == 0 || wc.w % 2 == 0) bad_world("Crossings needs an odd size >= 5");
            const int candidates = (wc.w - 3) / 2 + (wc.h - 3) / 2;
            if (wc.crossings < 1 || wc.crossings > candidates) bad_world("Crossings N out of range");
            break;
        }
        case WorldKind::DistShift:
            if (wc.variant != 1 && wc.variant != 2) bad_world("DistShift variant must be 1 or 2");
            if (wc.h < 6 || wc.w < 6) bad_world("DistShift needs at least 6x6");
            break;
        case WorldKind::GoToDoor:
            if (wc.h < 5 || wc.w < 5) bad_world("GoToDoor needs at least 5x5");
            break;
    }
}

std::string format_env_id(const WorldClass& wc) {
    const std::string hw = std::to_string(wc.h) + "x" + std::to_string(wc.w);
    switch (wc.kind) {
        case WorldKind::Empty: return "Navix-Empty-" + hw + "-v0";
        case WorldKind::EmptyRandom: return "Navix-Empty-Random-" + hw;
        case WorldKind::DoorKey: return wc.random_start ? "Navix-DoorKey-Random-" + hw : "Navix-DoorKey-" + hw + "-v0";
        case WorldKind::FourRooms: return "Navix-FourRooms-v0";
        case WorldKind::KeyCorridor:
            return "Navix-KeyCorridorS" + std::to_string(wc.room_size) + "R" + std::to_string(wc.rows) + "-v0";
        case WorldKind::LavaGap: return "Navix-LavaGap-S" + std::to_string(wc.room_size) + "-v0";
        case WorldKind::Crossings:
            return std::string(wc.lava_barriers ? "Navix-LavaCrossing-S" : "Navix-Crossings-S") +
                   std::to_string(wc.room_size) + "N" + std::to_string(wc.crossings) + "-v0";
        case WorldKind::DynamicObstacles: return "Navix-Dynamic-Obstacles-" + hw;
        case WorldKind::DistShift: return "Navix-DistShift" + std::to_string(wc.variant) + "-v0";
        case WorldKind::GoToDoor: return "Navix-GoToDoor-" + hw + "-v0";
    }
    throw std::invalid_argument("unknown world kind");
}

WorldClass parse_env_id(std::string_view id_view) {
    const std::string id(id_view);
    std::smatch m;
    auto num = [&](int i) { return std::stoi(m[static_cast<std::size_t>(i)].str()); };
    static const std::regex kEmpty(R"(Navix-Empty-(\d+)x(\d+)-v0)");
    static const std::regex kEmptyRandom(R"(Navix-Empty-Random-(\d+)x(\d+))");
    static const std::regex kDoorKey(R"(Navix-DoorKey-(\d+)x(\d+)-v0)");
    static const std::regex kDoorKeyRandom(R"(Navix-DoorKey-Random-(\d+)x(\d+))");
    static const std::regex kKeyCorridor(R"(Navix-KeyCorridorS(\d+)R(\d+)-v0)");
    static const std::regex kLavaGap(R"(Navix-LavaGap-?S(\d+)-v0)");
    static const std::regex kCrossings(R"(Navix-(Crossings-|SimpleCrossing|LavaCrossing-?)S(\d+)N(\d+)-v0)");
    static const std::regex kDynamic(R"(Navix-Dynamic-Obstacles-(\d+)x(\d+)(?:-v0)?)");
    static const std::regex kDistShift(R"(Navix-DistShift([12])-v0)");
    static const std::regex kGoToDoor(R"(Navix-GoToDoor-(\d+)x(\d+)-v0)");

    auto square = [&](WorldKind kind) {
        WorldClass wc{kind, num(1), num(2)};
        if (wc.h != wc.w) bad_world("only square sizes are supported: " + id);
        return wc;
    };
    WorldClass wc;
    if (std::regex_match(id, m, kEmpty)) {
        wc = square(WorldKind::Empty);
    } else if (std::regex_match(id, m, kEmptyRandom)) {
        wc = square(WorldKind::EmptyRandom);
    } else if (std::regex_match(id, m, kDoorKey)) {
        wc = square(WorldKind::DoorKey);
    } else if (std::regex_match(id, m, kDoorKeyRandom)) {
        wc = square(WorldKind::DoorKey);
        wc.random_start = true;
    } else if (id == "Navix-FourRooms-v0") {
        wc = four_rooms_world();
    } else if (std::regex_match(id, m, kKeyCorridor)) {
        wc = key_corridor_world(num(1), num(2));
    } else if (std::regex_match(id, m, kLavaGap)) {
        wc = lava_gap_world(num(1));
    } else if (std::regex_match(id, m, kCrossings)) {
        wc = crossings_world(num(2), num(3), m[1].str().rfind("Lava", 0) == 0);
    } else if (std::regex_match(id, m, kDynamic)) {
        wc = square(WorldKind::DynamicObstacles);
    } else if (std::regex_match(id, m, kDistShift)) {
        wc = dist_shift_world(num(1));
    } else if (std::regex_match(id, m, kGoToDoor)) {
        wc = square(WorldKind::GoToDoor);
    } else {
        throw std::invalid_argument("'" + id + "' does not name a world class");
    }
    check_world(wc);
    return wc;
}

Capacities world_capacities(const WorldClass& wc) {
    check_world(wc);
    // Crossings barrier counts vary with the key.
    KeyStream rng(make_key(0));
    Capacities caps = design(wc, rng).counts();
    if (wc.kind == WorldKind::Crossings) {
        const int border = 2 * (wc.h + wc.w) - 4;
        const int barrier_max = wc.crossings * (std::max(wc.h, wc.w) - 3);
        if (wc.lava_barriers)
            caps[static_cast<std::size_t>(pool_index(Tag::Lava))] = barrier_max;
        else
            caps[static_cast<std::size_t>(pool_index(Tag::Wall))] = border + barrier_max;
    }
    return caps;
}

State generate(const WorldClass& world, const Key& key) { return catalog_generator(world)->generate(key); }

RewardSpec default_reward(const WorldClass& wc) {
    switch (wc.kind) {
        case WorldKind::LavaGap:
        case WorldKind::Crossings:
        case WorldKind::DistShift: return rewards::compose({rewards::on_goal_reached(), rewards::on_lava_fall()});
        case WorldKind::DynamicObstacles: return rewards::compose({rewards::on_goal_reached(), rewards::on_ball_hit()});
        case WorldKind::GoToDoor: return rewards::on_door_done();
        default: return rewards::on_goal_reached();
    }
}

TerminationSpec default_termination(const WorldClass& wc) {
    switch (wc.kind) {
        case WorldKind::LavaGap:
        case WorldKind::Crossings:
        case WorldKind::DistShift:
            return terminations::compose({terminations::on_goal_reached(), terminations::on_lava_fall()});
        case WorldKind::DynamicObstacles:
            return terminations::compose({terminations::on_goal_reached(), terminations::on_ball_hit()});
        case WorldKind::GoToDoor: return terminations::on_door_done();
        default: return terminations::on_goal_reached();
    }
}

namespace {

class CatalogGenerator final : public WorldGenerator {
public:
    explicit CatalogGenerator(const WorldClass& wc)
        : world_(wc), layout_(make_layout(wc.h, wc.w)), caps_(world_capacities(wc)) {}

    int height() const override { return world_.h; }
    int width() const override { return world_.w; }
    Capacities capacities() const override { return caps_; }
    State generate(const Key& key) const override {
        KeyStream rng(key);
        return design(world_, rng).build(layout_, caps_, key);
    }

private:
    WorldClass world_;
    std::shared_ptr<const GridLayout> layout_;
    Capacities caps_;
};

class CustomGenerator final : public WorldGenerator {
public:
    CustomGenerator(int h, int w, Capacities caps, PlaceFn place)
        : layout_(make_layout(h, w)), caps_(caps), place_(std::move(place)) {
        if (!place_) throw std::invalid_argument("custom generator requires a placement function");
    }

    int height() const override { return layout_->h; }
    int width() const override { return layout_->w; }
    Capacities capacities() const override { return caps_; }
    State generate(const Key& key) const override {
        State state(layout_, caps_);
        state.key = key;
        KeyStream rng(key);
        place_(state.view(), rng);
        if (const auto err = validate(state.view()); !err.empty())
            throw std::logic_error("custom generator produced an invalid state: " + err);
        return state;
    }

private:
    std::shared_ptr<const GridLayout> layout_;
    Capacities caps_;
    PlaceFn place_;
};

}  // namespace

std::shared_ptr<const WorldGenerator> catalog_generator(const WorldClass& world) {
    return std::make_shared<CatalogGenerator>(world);
}

std::shared_ptr<const WorldGenerator> make_generator(int h, int w, Capacities capacities, PlaceFn place) {
    return std::make_shared<CustomGenerator>(h, w, capacities, std::move(place));
}

}  // namespace navgrid
