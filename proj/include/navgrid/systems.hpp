#pragma once

// The five systems: intervention, transition, observation, reward and
// termination. Each has a value-level entry point (State in, State or value
// out) and an in-place kernel over a StateRef used by the steppers.

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "navgrid/ecs.hpp"
#include "navgrid/grid.hpp"
#include "navgrid/rng.hpp"

namespace navgrid {

enum class Action : std::int32_t {
    RotateLeft = 0,
    RotateRight = 1,
    Forward = 2,
    Pickup = 3,
    Drop = 4,
    Toggle = 5,
    Done = 6,
};
inline constexpr int kActionCount = 7;

// ---------------------------------------------------------------------------
// Observation

enum class ObsKind : std::uint8_t {
    Symbolic,
    SymbolicFirstPerson,
    Rgb,
    RgbFirstPerson,
    Categorical,
    CategoricalFirstPerson,
};

enum class DType : std::uint8_t { I32 = 0, U8 = 1 };

struct ObservationSpec {
    ObsKind kind = ObsKind::Symbolic;
    int view_size = kDefaultViewSize;

    friend bool operator==(const ObservationSpec&, const ObservationSpec&) = default;
};

namespace observations {
inline ObservationSpec symbolic() { return {ObsKind::Symbolic, kDefaultViewSize}; }
inline ObservationSpec symbolic_first_person(int r = kDefaultViewSize) { return {ObsKind::SymbolicFirstPerson, r}; }
inline ObservationSpec rgb() { return {ObsKind::Rgb, kDefaultViewSize}; }
inline ObservationSpec rgb_first_person(int r = kDefaultViewSize) { return {ObsKind::RgbFirstPerson, r}; }
inline ObservationSpec categorical() { return {ObsKind::Categorical, kDefaultViewSize}; }
inline ObservationSpec categorical_first_person(int r = kDefaultViewSize) { return {ObsKind::CategoricalFirstPerson, r}; }
}  // namespace observations

DType dtype_of(const ObservationSpec& spec) noexcept;
std::vector<int> observation_shape(const ObservationSpec& spec, int h, int w);
std::size_t observation_elements(const ObservationSpec& spec, int h, int w);

// Dense tensor; exactly one of i32 / u8 is populated according to dtype.
struct Observation {
    std::vector<int> shape;
    DType dtype = DType::I32;
    std::vector<std::int32_t> i32;
    std::vector<std::uint8_t> u8;

    std::size_t elements() const noexcept { return dtype == DType::I32 ? i32.size() : u8.size(); }
    friend bool operator==(const Observation&, const Observation&) = default;
};

Observation observe(const State& state, const ObservationSpec& spec);
// Throws std::invalid_argument when the spec's dtype does not match the buffer.
void observe_into(StateCRef state, const ObservationSpec& spec, std::span<std::int32_t> out);
void observe_into(StateCRef state, const ObservationSpec& spec, std::span<std::uint8_t> out);

// Per-cell (object, colour, state) codes of the full grid, h * w * 3.
void symbolic_encoding(StateCRef state, std::span<std::int32_t> out);

// ---------------------------------------------------------------------------
// Intervention and transition

// Clears the event log, applies the action, then records goal/lava events
// for the player's cell.
void intervene_inplace(StateRef state, Action action, const Key& key);
State intervene(const State& state, Action action, const Key& key);

// Moves every active ball to a uniformly chosen free 4-neighbour (or onto the
// player, which registers a hit and leaves the ball in place).
void transition_inplace(StateRef state, const Key& key);
State transition(const State& state, const Key& key);

// ---------------------------------------------------------------------------
// Reward and termination

enum class RewardKind : std::uint8_t {
    OnGoalReached,
    OnLavaFall,
    OnDoorDone,
    OnBallHit,
    Free,
    ActionCost,
    TimeCost,
    MinigridLegacy,
};

struct RewardTerm {
    RewardKind kind = RewardKind::Free;
    double param = 0.0;  // cost for the cost terms, T for the legacy term

    friend bool operator==(const RewardTerm&, const RewardTerm&) = default;
};

struct RewardSpec {
    std::vector<RewardTerm> terms;

    friend bool operator==(const RewardSpec&, const RewardSpec&) = default;
};

enum class TerminationKind : std::uint8_t { OnGoalReached, OnLavaFall, OnDoorDone, OnBallHit, Free };

struct TerminationSpec {
    std::vector<TerminationKind> terms;

    friend bool operator==(const TerminationSpec&, const TerminationSpec&) = default;
};

namespace rewards {
RewardSpec on_goal_reached();
RewardSpec on_lava_fall();
RewardSpec on_door_done();
RewardSpec on_ball_hit();
RewardSpec free();
RewardSpec action_cost(double cost);
RewardSpec time_cost(double cost);
// Step-count dependent legacy reward; not Markovian.
RewardSpec minigrid_legacy(int max_steps);
// Sum of the given specs; empty input throws std::invalid_argument.
RewardSpec compose(std::span<const RewardSpec> specs);
RewardSpec compose(std::initializer_list<RewardSpec> specs);
}  // namespace rewards

namespace terminations {
TerminationSpec on_goal_reached();
TerminationSpec on_lava_fall();
TerminationSpec on_door_done();
TerminationSpec on_ball_hit();
TerminationSpec free();
TerminationSpec compose(std::span<const TerminationSpec> specs);
TerminationSpec compose(std::initializer_list<TerminationSpec> specs);
}  // namespace terminations

RewardSpec compose_rewards(std::span<const RewardSpec> specs);

// Core evaluators. `t` is the step counter of the pre-transition state.
double reward_value(std::int32_t t, Action action, const EventLog& next_events, const RewardSpec& spec);
bool termination_value(const EventLog& next_events, const TerminationSpec& spec);

double reward(const State& state, Action action, const State& next_state, const RewardSpec& spec);
bool terminate(const State& state, Action action, const State& next_state, const TerminationSpec& spec);

// ---------------------------------------------------------------------------
// Plain-text grammar, e.g. "on_goal_reached+action_cost(0.01)" or
// "symbolic_first_person:5". All parsers throw std::invalid_argument.

RewardSpec parse_reward_spec(std::string_view text);
TerminationSpec parse_termination_spec(std::string_view text);
ObservationSpec parse_observation_spec(std::string_view text);
std::string to_string(const RewardSpec& spec);
std::string to_string(const TerminationSpec& spec);
std::string to_string(const ObservationSpec& spec);
std::string to_string(ObsKind kind);

}  // namespace navgrid
