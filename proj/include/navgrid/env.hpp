#pragma once

// Environment configuration, the Timestep record, reset/step with autoreset,
// and the string-id registry.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "navgrid/ecs.hpp"
#include "navgrid/rng.hpp"
#include "navgrid/systems.hpp"
#include "navgrid/worlds.hpp"

namespace navgrid {

struct ObservationSpace {
    std::vector<int> shape;
    DType dtype = DType::I32;

    friend bool operator==(const ObservationSpace&, const ObservationSpace&) = default;
};

struct ActionSpace {
    int n = kActionCount;
};

// Closed interval of attainable per-step rewards.
struct RewardSpace {
    double low = 0.0;
    double high = 0.0;
};

struct Environment {
    std::string id;
    int h = 0;
    int w = 0;
    int max_steps = 0;  // T
    double gamma = 1.0;
    ObservationSpec observation_fn;
    RewardSpec reward_fn;
    TerminationSpec termination_fn;
    std::shared_ptr<const WorldGenerator> generator;

    ObservationSpace observation_space() const;
    ActionSpace action_space() const { return {}; }
    RewardSpace reward_space() const;
};

// Assembles and validates an environment. T defaults to 4 * h * w.
Environment create_env(std::string id, std::shared_ptr<const WorldGenerator> generator, RewardSpec reward_fn,
                       TerminationSpec termination_fn, ObservationSpec observation_fn = observations::symbolic(),
                       std::optional<int> max_steps = std::nullopt, double gamma = 1.0);

// Throws std::invalid_argument on T < 1, gamma outside (0, 1], empty reward or
// termination spec, or a missing generator.
void check_env(const Environment& env);

struct EnvOverrides {
    std::optional<ObservationSpec> observation_fn;
    std::optional<RewardSpec> reward_fn;
    std::optional<TerminationSpec> termination_fn;
    std::optional<int> max_steps;
    std::optional<double> gamma;

    bool empty() const noexcept {
        return !observation_fn && !reward_fn && !termination_fn && !max_steps && !gamma;
    }
};

// "observation=rgb;reward=on_goal_reached+action_cost(0.01);T=50;gamma=0.99".
// Entries separate on ';' or on ',' outside parentheses. Keys also accept
// observation_fn, reward_fn, termination_fn and max_steps.
EnvOverrides parse_overrides(std::string_view text);
std::string to_string(const EnvOverrides& overrides);
Environment apply_overrides(Environment env, const EnvOverrides& overrides);

// ---------------------------------------------------------------------------
// Registry

class LookupError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ConflictError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

using EnvConstructor = std::function<Environment()>;

// Thread safe. The catalog ids are present from the start.
void register_env(const std::string& id, EnvConstructor constructor);
Environment make(std::string_view id, const EnvOverrides& overrides = {});
Environment make(std::string_view id, std::string_view overrides);
std::vector<std::string> registered_envs();
// The built-in catalog only, in table order.
const std::vector<std::string>& catalog_ids();

// ---------------------------------------------------------------------------
// Timestep protocol

enum class StepType : std::uint8_t { First = 0, Mid = 1, Terminated = 2, Truncated = 3 };

std::string to_string(StepType type);

struct Info {
    double episode_return = 0.0;
    std::int32_t episode_length = 0;

    std::map<std::string, double> as_map() const;
    friend bool operator==(const Info&, const Info&) = default;
};

struct Timestep {
    std::int32_t t = 0;
    Observation observation;
    std::int32_t action = -1;
    double reward = 0.0;
    StepType step_type = StepType::First;
    double discount = 1.0;
    State state;
    Info info;

    bool is_last() const noexcept { return step_type == StepType::Terminated || step_type == StepType::Truncated; }
    friend bool operator==(const Timestep&, const Timestep&) = default;
};

Timestep reset(const Environment& env, const Key& key);
// Autoresets with `key` when the incoming timestep is terminal. Actions
// outside [0, 7) throw std::invalid_argument.
Timestep step(const Environment& env, const Timestep& timestep, Action action, const Key& key);

struct StepOutcome {
    double reward = 0.0;
    StepType step_type = StepType::Mid;
    double discount = 1.0;
};

// The transition shared by step and the batch kernels: intervention with
// split(key,3)[0], transition with [1], t += 1 and the state key set to [2].
// The caller owns autoreset and observation.
StepOutcome advance_inplace(const Environment& env, StateRef state, Action action, const Key& key);

void check_action(std::int32_t action);

using Policy = std::function<Action(const Timestep&, const Key&)>;
// Uniform over all seven actions.
Policy random_policy();

struct Trajectory {
    Timestep initial;
    std::vector<Action> actions;
    std::vector<Timestep> steps;

    friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

// Reset with split(key,3)[0]; step s uses fold_in(split(key,3)[1], s) and asks
// the policy with fold_in(split(key,3)[2], s). n_steps >= 1.
Trajectory unroll(const Environment& env, const Key& key, const Policy& policy, int n_steps);

Key unroll_step_key(const Key& key, int s);
Key unroll_policy_key(const Key& key, int s);

}  // namespace navgrid
