#pragma once

// Structure-of-arrays batch of timesteps and the lane-parallel steppers.
//
// Every pool column and every scalar field is one contiguous array of n lanes.
// Lane i is bit-equivalent to an independent Timestep; timestep(i) and
// set_lane(i, ...) convert between the two.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "navgrid/env.hpp"

namespace navgrid {

struct ExecPolicy {
    int threads = 0;  // 0 selects the OpenMP default
};

struct BatchState {
    std::size_t n = 0;
    std::shared_ptr<const GridLayout> grid;
    std::array<EntityPool, kPoolCount> pools;

    std::vector<std::int8_t> mission;
    std::vector<EventLog> events;
    std::vector<Key> key;
    std::vector<std::int32_t> t;

    std::vector<std::int32_t> action;
    std::vector<double> reward;
    std::vector<StepType> step_type;
    std::vector<double> discount;
    std::vector<double> episode_return;
    std::vector<std::int32_t> episode_length;

    ObservationSpec obs_spec;
    std::vector<int> obs_shape;  // per lane
    std::size_t obs_stride = 0;
    std::vector<std::int32_t> obs_i32;
    std::vector<std::uint8_t> obs_u8;

    BatchState() = default;
    // Zeroed storage shaped for env; lanes are filled by batch_reset.
    BatchState(const Environment& env, std::size_t n);

    StateRef lane(std::size_t i) noexcept;
    StateCRef lane(std::size_t i) const noexcept;

    Timestep timestep(std::size_t i) const;
    State state(std::size_t i) const;
    // The timestep must come from an environment with the same shape.
    void set_lane(std::size_t i, const Timestep& ts);

    std::span<const std::int32_t> observation_i32(std::size_t i) const;
    std::span<const std::uint8_t> observation_u8(std::size_t i) const;

    bool terminated(std::size_t i) const noexcept { return step_type[i] == StepType::Terminated; }
    bool truncated(std::size_t i) const noexcept { return step_type[i] == StepType::Truncated; }

    std::size_t memory_bytes() const noexcept;

    friend bool operator==(const BatchState&, const BatchState&);
};

// n >= 1; lane i = reset(env, split(key, n)[i]).
BatchState batch_reset(const Environment& env, const Key& key, std::size_t n, ExecPolicy exec = {});

// Lane i = step(env, lane_i, actions[i], fold_in(key, i)). Throws
// std::invalid_argument when actions.size() != n or an action is invalid.
void batch_step_inplace(const Environment& env, BatchState& batch, std::span<const std::int32_t> actions,
                        const Key& key, ExecPolicy exec = {});
BatchState batch_step(const Environment& env, const BatchState& batch, std::span<const std::int32_t> actions,
                      const Key& key, ExecPolicy exec = {});

// Serial reference: the same contract computed with the value-level
// reset/step over a vector of timesteps.
namespace reference {
std::vector<Timestep> batch_reset(const Environment& env, const Key& key, std::size_t n);
void batch_step(const Environment& env, std::vector<Timestep>& lanes, std::span<const std::int32_t> actions,
                const Key& key);
}  // namespace reference

// Writes one action per lane.
using BatchPolicy = std::function<void(const BatchState&, const Key&, std::span<std::int32_t>)>;
// actions[i] = random_int(fold_in(key, i), 0, 7).
BatchPolicy random_batch_policy();
std::int32_t random_lane_action(const Key& policy_key, std::size_t lane);

struct BatchUnrollStats {
    std::vector<double> returns;          // summed rewards per lane over the whole unroll
    std::vector<std::int32_t> episodes;   // completed episodes per lane
    std::size_t total_steps = 0;
    double wall_time_s = 0.0;             // stepping only
    double steps_per_s = 0.0;
    std::size_t state_bytes = 0;          // BatchState::memory_bytes of the run
};

// (reset_key, run_key, policy_root) = split(key, 3); step s uses
// fold_in(run_key, s) and the policy fold_in(policy_root, s).
BatchUnrollStats batch_unroll(const Environment& env, const Key& key, std::size_t n, int n_steps,
                              const BatchPolicy& policy, ExecPolicy exec = {});

// Same statistics from serial reset/step; timing fields are zero.
BatchUnrollStats serial_unroll_stats(const Environment& env, const Key& key, std::size_t n, int n_steps);

}  // namespace navgrid
