#include "navgrid/env.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace navgrid {

ObservationSpace Environment::observation_space() const {
    return {observation_shape(observation_fn, h, w), dtype_of(observation_fn)};
}

RewardSpace Environment::reward_space() const {
    RewardSpace space;
    for (const auto& term : reward_fn.terms) {
        switch (term.kind) {
            case RewardKind::OnGoalReached:
            case RewardKind::OnDoorDone: space.high += 1.0; break;
            case RewardKind::OnLavaFall:
            case RewardKind::OnBallHit: space.low -= 1.0; break;
            case RewardKind::Free: break;
            case RewardKind::ActionCost:
            case RewardKind::TimeCost:
                (term.param >= 0 ? space.low : space.high) -= term.param;
                break;
            case RewardKind::MinigridLegacy: space.high += 1.0; break;
        }
    }
    return space;
}

void check_env(const Environment& env) {
    if (!env.generator) throw std::invalid_argument("environment '" + env.id + "' has no generator");
    if (env.max_steps < 1) throw std::invalid_argument("T must be at least 1");
    if (!(env.gamma > 0.0 && env.gamma <= 1.0)) throw std::invalid_argument("gamma must lie in (0, 1]");
    if (env.reward_fn.terms.empty()) throw std::invalid_argument("reward spec is empty");
    if (env.termination_fn.terms.empty()) throw std::invalid_argument("termination spec is empty");
    if (env.generator->height() != env.h || env.generator->width() != env.w)
        throw std::invalid_argument("generator shape does not match environment shape");
    (void)observation_shape(env.observation_fn, env.h, env.w);
}

Environment create_env(std::string id, std::shared_ptr<const WorldGenerator> generator, RewardSpec reward_fn,
                       TerminationSpec termination_fn, ObservationSpec observation_fn, std::optional<int> max_steps,
                       double gamma) {
    if (!generator) throw std::invalid_argument("environment '" + id + "' has no generator");
    Environment env;
    env.id = std::move(id);
    env.h = generator->height();
    env.w = generator->width();
    env.max_steps = max_steps.value_or(4 * env.h * env.w);
    env.gamma = gamma;
    env.observation_fn = observation_fn;
    env.reward_fn = std::move(reward_fn);
    env.termination_fn = std::move(termination_fn);
    env.generator = std::move(generator);
    check_env(env);
    return env;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_entries(std::string_view text) {
    std::vector<std::string_view> out;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        const char c = i < text.size() ? text[i] : ';';
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ';' || (c == ',' && depth == 0)) {
            const auto entry = trim(text.substr(start, i - start));
            if (!entry.empty()) out.push_back(entry);
            start = i + 1;
        }
    }
    return out;
}

template <class T>
T parse_scalar(std::string_view key, std::string_view text) {
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw std::invalid_argument("invalid value '" + std::string(text) + "' for override " + std::string(key));
    return value;
}

}  // namespace

EnvOverrides parse_overrides(std::string_view text) {
    EnvOverrides out;
    for (auto entry : split_entries(text)) {
        const auto eq = entry.find('=');
        if (eq == std::string_view::npos)
            throw std::invalid_argument("override entry '" + std::string(entry) + "' is not key=value");
        const auto key = trim(entry.substr(0, eq));
        const auto value = trim(entry.substr(eq + 1));
        if (key == "observation" || key == "observation_fn") {
            out.observation_fn = parse_observation_spec(value);
        } else if (key == "reward" || key == "reward_fn") {
            out.reward_fn = parse_reward_spec(value);
        } else if (key == "termination" || key == "termination_fn") {
            out.termination_fn = parse_termination_spec(value);
        } else if (key == "T" || key == "max_steps") {
            out.max_steps = parse_scalar<int>(key, value);
        } else if (key == "gamma") {
            out.gamma = parse_scalar<double>(key, value);
        } else {
            throw std::invalid_argument("unknown override key '" + std::string(key) + "'");
        }
    }
    return out;
}

std::string to_string(const EnvOverrides& o) {
    std::vector<std::string> parts;
    if (o.observation_fn) parts.push_back("observation=" + to_string(*o.observation_fn));
    if (o.reward_fn) parts.push_back("reward=" + to_string(*o.reward_fn));
    if (o.termination_fn) parts.push_back("termination=" + to_string(*o.termination_fn));
    if (o.max_steps) parts.push_back("T=" + std::to_string(*o.max_steps));
    if (o.gamma) {
        std::ostringstream os;
        os.precision(17);
        os << *o.gamma;
        parts.push_back("gamma=" + os.str());
    }
    std::string out;
    for (const auto& p : parts) out += (out.empty() ? "" : ";") + p;
    return out;
}

Environment apply_overrides(Environment env, const EnvOverrides& o) {
    if (o.observation_fn) env.observation_fn = *o.observation_fn;
    if (o.reward_fn) env.reward_fn = *o.reward_fn;
    if (o.termination_fn) env.termination_fn = *o.termination_fn;
    if (o.max_steps) env.max_steps = *o.max_steps;
    if (o.gamma) env.gamma = *o.gamma;
    check_env(env);
    return env;
}

// ---------------------------------------------------------------------------
// Registry

namespace {

std::vector<WorldClass> catalog_worlds() {
    std::vector<WorldClass> out;
    for (int s : {5, 6, 8, 16}) out.push_back(empty_world(s));
    for (int s : {5, 6, 8, 16}) out.push_back(empty_world(s, true));
    for (int s : {5, 6, 8, 16}) out.push_back(door_key_world(s));
    for (int s : {5, 6, 8, 16}) out.push_back(door_key_world(s, true));
    out.push_back(four_rooms_world());
    out.push_back(key_corridor_world(3, 1));
    out.push_back(key_corridor_world(3, 2));
    out.push_back(key_corridor_world(3, 3));
    out.push_back(key_corridor_world(4, 3));
    out.push_back(key_corridor_world(5, 3));
    out.push_back(key_corridor_world(6, 3));
    for (int s : {5, 6, 7}) out.push_back(lava_gap_world(s));
    out.push_back(crossings_world(9, 1));
    out.push_back(crossings_world(9, 2));
    out.push_back(crossings_world(9, 3));
    out.push_back(crossings_world(11, 5));
    for (int s : {5, 6, 8, 16}) out.push_back(dynamic_obstacles_world(s));
    out.push_back(dist_shift_world(1));
    out.push_back(dist_shift_world(2));
    for (int s : {5, 6, 8}) out.push_back(go_to_door_world(s));
    return out;
}

struct Registry {
    std::mutex mutex;
    std::vector<std::string> order;
    std::unordered_map<std::string, EnvConstructor> constructors;
    std::vector<std::string> catalog;

    Registry() {
        for (const auto& world : catalog_worlds()) {
            const auto id = format_env_id(world);
            catalog.push_back(id);
            order.push_back(id);
            constructors[id] = [world, id] {
                return create_env(id, catalog_generator(world), default_reward(world), default_termination(world));
            };
        }
    }
};

Registry& registry() {
    static Registry r;
    return r;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
    std::vector<std::size_t> prev(b.size() + 1);
    std::vector<std::size_t> cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j)
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

}  // namespace

void register_env(const std::string& id, EnvConstructor constructor) {
    if (id.empty()) throw std::invalid_argument("environment id must not be empty");
    if (!constructor) throw std::invalid_argument("constructor for '" + id + "' is empty");
    auto& r = registry();
    std::lock_guard lock(r.mutex);
    if (r.constructors.count(id)) throw ConflictError("environment id '" + id + "' is already registered");
    r.constructors.emplace(id, std::move(constructor));
    r.order.push_back(id);
}

Environment make(std::string_view id_view, const EnvOverrides& overrides) {
    const std::string id(id_view);
    EnvConstructor ctor;
    {
        auto& r = registry();
        std::lock_guard lock(r.mutex);
        if (auto it = r.constructors.find(id); it != r.constructors.end()) {
            ctor = it->second;
        } else {
            std::vector<std::pair<std::size_t, std::string>> ranked;
            for (const auto& known : r.order) ranked.emplace_back(edit_distance(id, known), known);
            std::stable_sort(ranked.begin(), ranked.end(),
                             [](const auto& a, const auto& b) { return a.first < b.first; });
            std::string msg = "unknown environment id '" + id + "'; did you mean:";
            for (std::size_t i = 0; i < std::min<std::size_t>(3, ranked.size()); ++i) msg += " " + ranked[i].second;
            throw LookupError(msg);
        }
    }
    Environment env = ctor();
    return overrides.empty() ? env : apply_overrides(std::move(env), overrides);
}

Environment make(std::string_view id, std::string_view overrides) { return make(id, parse_overrides(overrides)); }

std::vector<std::string> registered_envs() {
    auto& r = registry();
    std::lock_guard lock(r.mutex);
    return r.order;
}

const std::vector<std::string>& catalog_ids() { return registry().catalog; }

// ---------------------------------------------------------------------------
// Timestep protocol

std::string to_string(StepType type) {
    switch (type) {
        case StepType::First: return "FIRST";
        case StepType::Mid: return "MID";
        case StepType::Terminated: return "TERMINATED";
        case StepType::Truncated: return "TRUNCATED";
    }
    return "UNKNOWN";
}

std::map<std::string, double> Info::as_map() const {
    return {{"episode_return", episode_return}, {"episode_length", static_cast<double>(episode_length)}};
}

void check_action(std::int32_t action) {
    if (action < 0 || action >= kActionCount)
        throw std::invalid_argument("action " + std::to_string(action) + " outside [0, 7)");
}

Timestep reset(const Environment& env, const Key& key) {
    Timestep ts;
    ts.state = env.generator->generate(key);
    ts.t = 0;
    ts.action = -1;
    ts.reward = 0.0;
    ts.step_type = StepType::First;
    ts.discount = env.gamma;
    ts.observation = observe(ts.state, env.observation_fn);
    return ts;
}

StepOutcome advance_inplace(const Environment& env, StateRef s, Action action, const Key& key) {
    check_action(static_cast<std::int32_t>(action));
    const std::int32_t t0 = *s.t;
    intervene_inplace(s, action, split_at(key, 0));
    transition_inplace(s, split_at(key, 1));
    *s.t = t0 + 1;
    *s.key = split_at(key, 2);

    StepOutcome out;
    out.reward = reward_value(t0, action, *s.events, env.reward_fn);
    if (termination_value(*s.events, env.termination_fn)) {
        out.step_type = StepType::Terminated;
        out.discount = 0.0;
    } else {
        out.step_type = t0 + 1 >= env.max_steps ? StepType::Truncated : StepType::Mid;
        out.discount = env.gamma;
    }
    return out;
}

Timestep step(const Environment& env, const Timestep& timestep, Action action, const Key& key) {
    check_action(static_cast<std::int32_t>(action));
    if (timestep.is_last()) return reset(env, key);
    Timestep next;
    next.state = timestep.state;
    const auto outcome = advance_inplace(env, next.state.view(), action, key);
    next.t = next.state.t;
    next.action = static_cast<std::int32_t>(action);
    next.reward = outcome.reward;
    next.step_type = outcome.step_type;
    next.discount = outcome.discount;
    next.info.episode_return = timestep.info.episode_return + outcome.reward;
    next.info.episode_length = timestep.info.episode_length + 1;
    next.observation = observe(next.state, env.observation_fn);
    return next;
}

Policy random_policy() {
    return [](const Timestep&, const Key& key) { return static_cast<Action>(random_int(key, 0, kActionCount)); };
}

Key unroll_step_key(const Key& key, int s) { return fold_in(split_at(key, 1), static_cast<std::uint64_t>(s)); }
Key unroll_policy_key(const Key& key, int s) { return fold_in(split_at(key, 2), static_cast<std::uint64_t>(s)); }

Trajectory unroll(const Environment& env, const Key& key, const Policy& policy, int n_steps) {
    if (n_steps < 1) throw std::invalid_argument("unroll needs n_steps >= 1");
    if (!policy) throw std::invalid_argument("unroll needs a policy");
    Trajectory traj;
    traj.initial = reset(env, split_at(key, 0));
    traj.actions.reserve(static_cast<std::size_t>(n_steps));
    traj.steps.reserve(static_cast<std::size_t>(n_steps));
    const Timestep* current = &traj.initial;
    for (int s = 0; s < n_steps; ++s) {
        const Action a = policy(*current, unroll_policy_key(key, s));
        traj.actions.push_back(a);
        traj.steps.push_back(step(env, *current, a, unroll_step_key(key, s)));
        current = &traj.steps.back();
    }
    return traj;
}

}  // namespace navgrid
