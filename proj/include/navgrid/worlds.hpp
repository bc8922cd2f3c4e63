#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "navgrid/ecs.hpp"
#include "navgrid/rng.hpp"
#include "navgrid/systems.hpp"

namespace navgrid {

enum class WorldKind : std::uint8_t {
    Empty,
    EmptyRandom,
    DoorKey,
    FourRooms,
    KeyCorridor,
    LavaGap,
    Crossings,
    DynamicObstacles,
    DistShift,
    GoToDoor,
};

struct WorldClass {
    WorldKind kind = WorldKind::Empty;
    int h = 5;
    int w = 5;
    int room_size = 0;      // KeyCorridor S, LavaGap/Crossings S
    int rows = 0;           // KeyCorridor R
    int crossings = 0;      // Crossings N
    int variant = 0;        // DistShift 1 or 2
    bool random_start = false;   // DoorKey-Random
    bool lava_barriers = false;  // Crossings barrier material; walls by default

    friend bool operator==(const WorldClass&, const WorldClass&) = default;
};

// Canonical constructors; sizes follow the catalog table.
WorldClass empty_world(int size, bool random_start = false);
WorldClass door_key_world(int size, bool random_start = false);
WorldClass four_rooms_world();
WorldClass key_corridor_world(int room_size, int rows);
WorldClass lava_gap_world(int size);
WorldClass crossings_world(int size, int crossings, bool lava = false);
WorldClass dynamic_obstacles_world(int size);
WorldClass dist_shift_world(int variant);
WorldClass go_to_door_world(int size);

// Throws std::invalid_argument for parameters outside the catalog ranges.
void check_world(const WorldClass& world);

// Canonical id, e.g. "Navix-KeyCorridorS3R1-v0".
std::string format_env_id(const WorldClass& world);
// Accepts canonical ids plus the alternate spellings
// ("Navix-LavaGapS5-v0", "Navix-SimpleCrossingS9N1-v0"). Throws
// std::invalid_argument when the id does not name a world class.
WorldClass parse_env_id(std::string_view id);

Capacities world_capacities(const WorldClass& world);
// Starting-state distribution: pure function of (world, key).
State generate(const WorldClass& world, const Key& key);

// Catalog wiring: goal worlds use goal reward, lava worlds add the lava
// penalty, obstacle worlds add the hit penalty, GoToDoor uses the door event.
RewardSpec default_reward(const WorldClass& world);
TerminationSpec default_termination(const WorldClass& world);

class WorldGenerator {
public:
    virtual ~WorldGenerator() = default;
    virtual int height() const = 0;
    virtual int width() const = 0;
    // Identical for every key; batch storage relies on it.
    virtual Capacities capacities() const = 0;
    virtual State generate(const Key& key) const = 0;
};

std::shared_ptr<const WorldGenerator> catalog_generator(const WorldClass& world);

// Custom worlds: `place` spawns entities (exactly one Player) into an empty
// state of the given shape. The layout object is shared by every state.
using PlaceFn = std::function<void(StateRef, KeyStream&)>;
std::shared_ptr<const WorldGenerator> make_generator(int h, int w, Capacities capacities, PlaceFn place);

}  // namespace navgrid
