#include "navgrid/systems.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "navgrid/render.hpp"

namespace navgrid {

// ---------------------------------------------------------------------------
// Observation

DType dtype_of(const ObservationSpec& spec) noexcept {
    return spec.kind == ObsKind::Rgb || spec.kind == ObsKind::RgbFirstPerson ? DType::U8 : DType::I32;
}

std::vector<int> observation_shape(const ObservationSpec& spec, int h, int w) {
    const int r = spec.view_size;
    if (spec.kind == ObsKind::SymbolicFirstPerson || spec.kind == ObsKind::RgbFirstPerson ||
        spec.kind == ObsKind::CategoricalFirstPerson)
        require_odd_view(r);
    switch (spec.kind) {
        case ObsKind::Symbolic: return {h, w, 3};
        case ObsKind::SymbolicFirstPerson: return {r, r, 3};
        case ObsKind::Rgb: return {kTileSize * h, kTileSize * w, 3};
        case ObsKind::RgbFirstPerson: return {kTileSize * r, kTileSize * r, 3};
        case ObsKind::Categorical: return {h, w};
        case ObsKind::CategoricalFirstPerson: return {r, r};
    }
    throw std::invalid_argument("unknown observation kind");
}

std::size_t observation_elements(const ObservationSpec& spec, int h, int w) {
    std::size_t n = 1;
    for (int d : observation_shape(spec, h, w)) n *= static_cast<std::size_t>(d);
    return n;
}

namespace {

bool is_first_person(ObsKind kind) {
    return kind == ObsKind::SymbolicFirstPerson || kind == ObsKind::RgbFirstPerson ||
           kind == ObsKind::CategoricalFirstPerson;
}

void check_spec(const ObservationSpec& spec) {
    switch (spec.kind) {
        case ObsKind::Symbolic:
        case ObsKind::SymbolicFirstPerson:
        case ObsKind::Rgb:
        case ObsKind::RgbFirstPerson:
        case ObsKind::Categorical:
        case ObsKind::CategoricalFirstPerson: break;
        default: throw std::invalid_argument("unknown observation kind " + std::to_string(static_cast<int>(spec.kind)));
    }
    if (is_first_person(spec.kind)) require_odd_view(spec.view_size);
}

// Reused per thread so stepping does not allocate.
struct Scratch {
    std::vector<std::int32_t> symbolic;
    std::vector<std::uint8_t> opaque;
    std::vector<std::uint8_t> mask;
    std::vector<std::uint8_t> occupancy;
};

Scratch& scratch() {
    thread_local Scratch s;
    return s;
}

template <class T>
T& sized(std::vector<T>& v, std::size_t n) {
    if (v.size() < n) v.resize(n);
    return v.front();
}

}  // namespace

void symbolic_encoding(StateCRef s, std::span<std::int32_t> out) {
    const int h = s.grid->h;
    const int w = s.grid->w;
    for (int k = 0; k < h * w; ++k) {
        const bool floor = s.grid->base[static_cast<std::size_t>(k)] != 0;
        out[3 * k] = floor ? static_cast<std::int32_t>(Tag::Floor) : static_cast<std::int32_t>(Tag::Unseen);
        out[3 * k + 1] = 0;
        out[3 * k + 2] = 0;
    }
    for (auto it = kDrawOrderTopFirst.rbegin(); it != kDrawOrderTopFirst.rend(); ++it) {
        const auto& pool = s.pool(*it);
        const auto fallback = static_cast<std::int32_t>(pool.tag == Tag::Lava || pool.tag == Tag::Player
                                                            ? Colour::Red
                                                            : default_colour(pool.tag));
        for (int slot = 0; slot < pool.capacity; ++slot) {
            if (!pool.active[slot]) continue;
            std::int32_t* cell = out.data() + 3 * (pool.row[slot] * w + pool.col[slot]);
            cell[0] = static_cast<std::int32_t>(pool.tag);
            cell[1] = pool.colour ? pool.colour[slot] : fallback;
            cell[2] = pool.door_state ? pool.door_state[slot] : pool.direction ? pool.direction[slot] : 0;
        }
    }
}

void observe_into(StateCRef s, const ObservationSpec& spec, std::span<std::int32_t> out) {
    check_spec(spec);
    if (dtype_of(spec) != DType::I32) throw std::invalid_argument("observation " + to_string(spec.kind) + " is u8");
    const int h = s.grid->h;
    const int w = s.grid->w;
    if (out.size() < observation_elements(spec, h, w)) throw std::invalid_argument("observation buffer too small");

    if (spec.kind == ObsKind::Symbolic) {
        symbolic_encoding(s, out);
        return;
    }
    auto& sc = scratch();
    const std::size_t cells = static_cast<std::size_t>(h * w);
    std::span<std::int32_t> full(&sized(sc.symbolic, 3 * cells), 3 * cells);
    symbolic_encoding(s, full);
    if (spec.kind == ObsKind::Categorical) {
        for (std::size_t k = 0; k < cells; ++k) out[k] = full[3 * k];
        return;
    }

    const int r = spec.view_size;
    std::span<std::uint8_t> opaque(&sized(sc.opaque, cells), cells);
    std::span<std::uint8_t> mask(&sized(sc.mask, static_cast<std::size_t>(r * r)), static_cast<std::size_t>(r * r));
    opacity_raster(s, opaque);
    const Position agent = s.player_position();
    const Direction facing = s.player_direction();
    visibility_from_opacity(opaque, h, w, agent, facing, r, mask);
    const int channels = spec.kind == ObsKind::SymbolicFirstPerson ? 3 : 1;
    for (int i = 0; i < r; ++i) {
        for (int j = 0; j < r; ++j) {
            std::int32_t* dst = out.data() + (i * r + j) * channels;
            if (!mask[static_cast<std::size_t>(i * r + j)]) {
                std::fill(dst, dst + channels, 0);
                continue;
            }
            const Position p = egocentric_to_world(agent, facing, r, i, j);
            const std::int32_t* src = full.data() + 3 * (p.row * w + p.col);
            std::copy(src, src + channels, dst);
        }
    }
}

void observe_into(StateCRef s, const ObservationSpec& spec, std::span<std::uint8_t> out) {
    check_spec(spec);
    if (dtype_of(spec) != DType::U8) throw std::invalid_argument("observation " + to_string(spec.kind) + " is i32");
    if (out.size() < observation_elements(spec, s.grid->h, s.grid->w))
        throw std::invalid_argument("observation buffer too small");
    if (spec.kind == ObsKind::Rgb)
        render_full_into(s, out);
    else
        render_first_person_into(s, spec.view_size, out);
}

Observation observe(const State& state, const ObservationSpec& spec) {
    check_spec(spec);
    Observation obs;
    obs.shape = observation_shape(spec, state.height(), state.width());
    obs.dtype = dtype_of(spec);
    const std::size_t n = observation_elements(spec, state.height(), state.width());
    if (obs.dtype == DType::I32) {
        obs.i32.resize(n);
        observe_into(state.view(), spec, std::span<std::int32_t>(obs.i32));
    } else {
        obs.u8.resize(n);
        observe_into(state.view(), spec, std::span<std::uint8_t>(obs.u8));
    }
    return obs;
}

// ---------------------------------------------------------------------------
// Intervention

namespace {

bool fires(float probability, const Key& key, std::int32_t id) {
    if (probability >= 1.0f) return true;
    return random_uniform(fold_in(key, static_cast<std::uint64_t>(id))) < static_cast<double>(probability);
}

bool cell_empty(StateCRef s, Position p) {
    if (!s.grid->is_floor(p)) return false;
    for (const auto& pool : s.pools)
        if (pool.find(p) >= 0) return false;
    return true;
}

}  // namespace

void intervene_inplace(StateRef s, Action action, const Key& key) {
    *s.events = EventLog{};
    auto& player = s.pools[0];
    const Position pos = player.position(0);
    const auto facing = static_cast<Direction>(player.direction[0]);
    const Position front = step_towards(pos, facing);
    auto& keys = s.pools[static_cast<std::size_t>(pool_index(Tag::Key))];
    auto& doors = s.pools[static_cast<std::size_t>(pool_index(Tag::Door))];
    auto& balls = s.pools[static_cast<std::size_t>(pool_index(Tag::Ball))];

    switch (action) {
        case Action::RotateLeft: player.direction[0] = static_cast<std::uint8_t>(rotate(facing, -1)); break;
        case Action::RotateRight: player.direction[0] = static_cast<std::uint8_t>(rotate(facing, 1)); break;
        case Action::Forward: {
            const int ball = balls.find(front);
            if (ball >= 0) {
                if (fires(balls.probability[ball], key, entity_id(Tag::Ball, ball))) s.events->ball_hit = true;
            } else if (walkable(StateCRef(s), front)) {
                player.row[0] = static_cast<std::int16_t>(front.row);
                player.col[0] = static_cast<std::int16_t>(front.col);
            }
            break;
        }
        case Action::Pickup: {
            if (player.pocket[0] != kNoEntity) break;
            const int k = keys.find(front);
            if (k < 0) break;
            keys.active[k] = 0;
            keys.row[k] = static_cast<std::int16_t>(kOffGrid.row);
            keys.col[k] = static_cast<std::int16_t>(kOffGrid.col);
            player.pocket[0] = entity_id(Tag::Key, k);
            s.events->picked_up = true;
            s.events->picked_id = player.pocket[0];
            break;
        }
        case Action::Drop: {
            const std::int32_t held = player.pocket[0];
            if (held == kNoEntity || !cell_empty(StateCRef(s), front)) break;
            const int k = entity_slot(held);
            keys.active[k] = 1;
            keys.row[k] = static_cast<std::int16_t>(front.row);
            keys.col[k] = static_cast<std::int16_t>(front.col);
            player.pocket[0] = kNoEntity;
            break;
        }
        case Action::Toggle: {
            const int d = doors.find(front);
            if (d < 0) break;
            auto& st = doors.door_state[d];
            if (st == static_cast<std::uint8_t>(DoorState::Open)) {
                st = static_cast<std::uint8_t>(DoorState::Closed);
            } else if (st == static_cast<std::uint8_t>(DoorState::Closed)) {
                st = static_cast<std::uint8_t>(DoorState::Open);
            } else {
                const std::int32_t held = player.pocket[0];
                if (held != kNoEntity && entity_tag(held) == Tag::Key &&
                    keys.colour[entity_slot(held)] == doors.colour[d])
                    st = static_cast<std::uint8_t>(DoorState::Open);
            }
            break;
        }
        case Action::Done: {
            const int d = doors.find(front);
            if (d >= 0 && *s.mission >= 0 && doors.colour[d] == static_cast<std::uint8_t>(*s.mission)) {
                s.events->door_done = true;
                s.events->door_colour = *s.mission;
            }
            break;
        }
        default: break;  // out-of-range actions are no-ops
    }

    const Position now = player.position(0);
    const auto& goals = s.pools[static_cast<std::size_t>(pool_index(Tag::Goal))];
    const int g = goals.find(now);
    if (g >= 0 && fires(goals.probability[g], key, entity_id(Tag::Goal, g))) {
        s.events->goal_reached = true;
        s.events->goal_position = now;
    }
    if (s.pools[static_cast<std::size_t>(pool_index(Tag::Lava))].find(now) >= 0) s.events->lava_fallen = true;
}

State intervene(const State& state, Action action, const Key& key) {
    State next = state;
    intervene_inplace(next.view(), action, key);
    return next;
}

// ---------------------------------------------------------------------------
// Transition

void transition_inplace(StateRef s, const Key& key) {
    auto& balls = s.pools[static_cast<std::size_t>(pool_index(Tag::Ball))];
    if (balls.capacity == 0 || balls.active_count() == 0) return;

    const int h = s.grid->h;
    const int w = s.grid->w;
    auto& sc = scratch();
    std::span<std::uint8_t> occ(&sized(sc.occupancy, static_cast<std::size_t>(h * w)), static_cast<std::size_t>(h * w));
    // 1 = some non-player entity or void, 2 = player alone.
    constexpr std::uint8_t kTaken = 1;
    constexpr std::uint8_t kPlayerOnly = 2;
    for (int k = 0; k < h * w; ++k) occ[static_cast<std::size_t>(k)] = s.grid->base[static_cast<std::size_t>(k)] ? 0 : kTaken;
    for (int i = 1; i < kPoolCount; ++i) {
        const auto& pool = s.pools[i];
        for (int slot = 0; slot < pool.capacity; ++slot)
            if (pool.active[slot]) occ[static_cast<std::size_t>(pool.row[slot] * w + pool.col[slot])] = kTaken;
    }
    const Position player = s.player_position();
    auto& player_cell = occ[static_cast<std::size_t>(player.row * w + player.col)];
    if (player_cell == 0) player_cell = kPlayerOnly;

    for (int b = 0; b < balls.capacity; ++b) {
        if (!balls.active[b]) continue;
        const Position from = balls.position(b);
        Position options[4];
        int n = 0;
        for (int d = 0; d < 4; ++d) {
            const Position p = step_towards(from, static_cast<Direction>(d));
            if (p.row < 0 || p.row >= h || p.col < 0 || p.col >= w) continue;
            const auto o = occ[static_cast<std::size_t>(p.row * w + p.col)];
            if (o == 0 || o == kPlayerOnly) options[n++] = p;
        }
        if (n == 0) continue;
        const std::int32_t id = entity_id(Tag::Ball, b);
        const auto choice = static_cast<int>(random_int(fold_in(key, static_cast<std::uint64_t>(id)), 0, n));
        const Position to = options[choice];
        if (to == player) {
            if (fires(balls.probability[b], key, id + (1 << 15))) s.events->ball_hit = true;
            continue;
        }
        occ[static_cast<std::size_t>(from.row * w + from.col)] = 0;
        occ[static_cast<std::size_t>(to.row * w + to.col)] = kTaken;
        balls.row[b] = static_cast<std::int16_t>(to.row);
        balls.col[b] = static_cast<std::int16_t>(to.col);
    }
}

State transition(const State& state, const Key& key) {
    State next = state;
    transition_inplace(next.view(), key);
    return next;
}

// ---------------------------------------------------------------------------
// Reward and termination

namespace rewards {
RewardSpec on_goal_reached() { return {{{RewardKind::OnGoalReached, 0.0}}}; }
RewardSpec on_lava_fall() { return {{{RewardKind::OnLavaFall, 0.0}}}; }
RewardSpec on_door_done() { return {{{RewardKind::OnDoorDone, 0.0}}}; }
RewardSpec on_ball_hit() { return {{{RewardKind::OnBallHit, 0.0}}}; }
RewardSpec free() { return {{{RewardKind::Free, 0.0}}}; }
RewardSpec action_cost(double cost) {
    if (!(cost >= 0.0)) throw std::invalid_argument("action_cost must be >= 0");
    return {{{RewardKind::ActionCost, cost}}};
}
RewardSpec time_cost(double cost) {
    if (!(cost >= 0.0)) throw std::invalid_argument("time_cost must be >= 0");
    return {{{RewardKind::TimeCost, cost}}};
}
RewardSpec minigrid_legacy(int max_steps) {
    if (max_steps < 1) throw std::invalid_argument("minigrid_legacy requires T >= 1");
    return {{{RewardKind::MinigridLegacy, static_cast<double>(max_steps)}}};
}
RewardSpec compose(std::span<const RewardSpec> specs) {
    if (specs.empty()) throw std::invalid_argument("compose requires at least one reward");
    RewardSpec out;
    for (const auto& s : specs) out.terms.insert(out.terms.end(), s.terms.begin(), s.terms.end());
    return out;
}
RewardSpec compose(std::initializer_list<RewardSpec> specs) {
    return compose(std::span<const RewardSpec>(specs.begin(), specs.size()));
}
}  // namespace rewards

namespace terminations {
TerminationSpec on_goal_reached() { return {{TerminationKind::OnGoalReached}}; }
TerminationSpec on_lava_fall() { return {{TerminationKind::OnLavaFall}}; }
TerminationSpec on_door_done() { return {{TerminationKind::OnDoorDone}}; }
TerminationSpec on_ball_hit() { return {{TerminationKind::OnBallHit}}; }
TerminationSpec free() { return {{TerminationKind::Free}}; }
TerminationSpec compose(std::span<const TerminationSpec> specs) {
    if (specs.empty()) throw std::invalid_argument("compose requires at least one termination");
    TerminationSpec out;
    for (const auto& s : specs) out.terms.insert(out.terms.end(), s.terms.begin(), s.terms.end());
    return out;
}
TerminationSpec compose(std::initializer_list<TerminationSpec> specs) {
    return compose(std::span<const TerminationSpec>(specs.begin(), specs.size()));
}
}  // namespace terminations

RewardSpec compose_rewards(std::span<const RewardSpec> specs) { return rewards::compose(specs); }

double reward_value(std::int32_t t, Action action, const EventLog& ev, const RewardSpec& spec) {
    double total = 0.0;
    for (const auto& term : spec.terms) {
        switch (term.kind) {
            case RewardKind::OnGoalReached: total += ev.goal_reached ? 1.0 : 0.0; break;
            case RewardKind::OnLavaFall: total += ev.lava_fallen ? -1.0 : 0.0; break;
            case RewardKind::OnDoorDone: total += ev.door_done ? 1.0 : 0.0; break;
            case RewardKind::OnBallHit: total += ev.ball_hit ? -1.0 : 0.0; break;
            case RewardKind::Free: break;
            case RewardKind::ActionCost: total -= action == Action::Done ? 0.0 : term.param; break;
            case RewardKind::TimeCost: total -= term.param; break;
            case RewardKind::MinigridLegacy:
                if (ev.goal_reached) total += 1.0 - 0.9 * static_cast<double>(t + 1) / term.param;
                break;
        }
    }
    return total;
}

bool termination_value(const EventLog& ev, const TerminationSpec& spec) {
    for (auto kind : spec.terms) {
        switch (kind) {
            case TerminationKind::OnGoalReached:
                if (ev.goal_reached) return true;
                break;
            case TerminationKind::OnLavaFall:
                if (ev.lava_fallen) return true;
                break;
            case TerminationKind::OnDoorDone:
                if (ev.door_done) return true;
                break;
            case TerminationKind::OnBallHit:
                if (ev.ball_hit) return true;
                break;
            case TerminationKind::Free: break;
        }
    }
    return false;
}

double reward(const State& state, Action action, const State& next_state, const RewardSpec& spec) {
    return reward_value(state.t, action, next_state.events, spec);
}

bool terminate(const State&, Action, const State& next_state, const TerminationSpec& spec) {
    return termination_value(next_state.events, spec);
}

// ---------------------------------------------------------------------------
// Grammar

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_terms(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    int depth = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i < text.size() && text[i] == '(') ++depth;
        if (i < text.size() && text[i] == ')') --depth;
        if (i == text.size() || (text[i] == '+' && depth == 0)) {
            out.push_back(trim(text.substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

struct TermCall {
    std::string_view name;
    std::optional<double> arg;
};

double parse_number(std::string_view s) {
    s = trim(s);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw std::invalid_argument("invalid number '" + std::string(s) + "'");
    return v;
}

TermCall parse_call(std::string_view term) {
    if (term.empty()) throw std::invalid_argument("empty term");
    const auto open = term.find('(');
    if (open == std::string_view::npos) return {term, std::nullopt};
    if (term.back() != ')') throw std::invalid_argument("unbalanced parentheses in '" + std::string(term) + "'");
    return {trim(term.substr(0, open)), parse_number(term.substr(open + 1, term.size() - open - 2))};
}

std::string format_number(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

RewardSpec parse_reward_spec(std::string_view text) {
    RewardSpec spec;
    for (auto term : split_terms(trim(text))) {
        const auto call = parse_call(term);
        auto no_arg = [&] {
            if (call.arg) throw std::invalid_argument(std::string(call.name) + " takes no argument");
        };
        auto need_arg = [&] {
            if (!call.arg) throw std::invalid_argument(std::string(call.name) + " requires an argument");
            return *call.arg;
        };
        RewardSpec one;
        if (call.name == "action_cost") {
            one = rewards::action_cost(need_arg());
        } else if (call.name == "time_cost") {
            one = rewards::time_cost(need_arg());
        } else if (call.name == "minigrid_legacy") {
            const double t = need_arg();
            if (t != std::floor(t)) throw std::invalid_argument("minigrid_legacy T must be an integer");
            one = rewards::minigrid_legacy(static_cast<int>(t));
        } else {
            no_arg();
            if (call.name == "on_goal_reached") one = rewards::on_goal_reached();
            else if (call.name == "on_lava_fall") one = rewards::on_lava_fall();
            else if (call.name == "on_door_done") one = rewards::on_door_done();
            else if (call.name == "on_ball_hit") one = rewards::on_ball_hit();
            else if (call.name == "free") one = rewards::free();
            else throw std::invalid_argument("unknown reward term '" + std::string(call.name) + "'");
        }
        spec.terms.insert(spec.terms.end(), one.terms.begin(), one.terms.end());
    }
    return spec;
}

TerminationSpec parse_termination_spec(std::string_view text) {
    TerminationSpec spec;
    for (auto term : split_terms(trim(text))) {
        if (term == "on_goal_reached") spec.terms.push_back(TerminationKind::OnGoalReached);
        else if (term == "on_lava_fall") spec.terms.push_back(TerminationKind::OnLavaFall);
        else if (term == "on_door_done") spec.terms.push_back(TerminationKind::OnDoorDone);
        else if (term == "on_ball_hit") spec.terms.push_back(TerminationKind::OnBallHit);
        else if (term == "free") spec.terms.push_back(TerminationKind::Free);
        else throw std::invalid_argument("unknown termination term '" + std::string(term) + "'");
    }
    return spec;
}

std::string to_string(ObsKind kind) {
    switch (kind) {
        case ObsKind::Symbolic: return "symbolic";
        case ObsKind::SymbolicFirstPerson: return "symbolic_first_person";
        case ObsKind::Rgb: return "rgb";
        case ObsKind::RgbFirstPerson: return "rgb_first_person";
        case ObsKind::Categorical: return "categorical";
        case ObsKind::CategoricalFirstPerson: return "categorical_first_person";
    }
    return "unknown";
}

ObservationSpec parse_observation_spec(std::string_view text) {
    text = trim(text);
    std::string_view name = text;
    int view = kDefaultViewSize;
    if (const auto colon = text.find(':'); colon != std::string_view::npos) {
        name = trim(text.substr(0, colon));
        const double v = parse_number(text.substr(colon + 1));
        if (v != std::floor(v)) throw std::invalid_argument("view size must be an integer");
        view = static_cast<int>(v);
    }
    for (auto kind : {ObsKind::Symbolic, ObsKind::SymbolicFirstPerson, ObsKind::Rgb, ObsKind::RgbFirstPerson,
                      ObsKind::Categorical, ObsKind::CategoricalFirstPerson}) {
        if (name == to_string(kind)) {
            ObservationSpec spec{kind, view};
            if (is_first_person(kind)) require_odd_view(view);
            return spec;
        }
    }
    throw std::invalid_argument("unknown observation kind '" + std::string(name) + "'");
}

std::string to_string(const RewardSpec& spec) {
    std::string out;
    for (const auto& term : spec.terms) {
        if (!out.empty()) out += '+';
        switch (term.kind) {
            case RewardKind::OnGoalReached: out += "on_goal_reached"; break;
            case RewardKind::OnLavaFall: out += "on_lava_fall"; break;
            case RewardKind::OnDoorDone: out += "on_door_done"; break;
            case RewardKind::OnBallHit: out += "on_ball_hit"; break;
            case RewardKind::Free: out += "free"; break;
            case RewardKind::ActionCost: out += "action_cost(" + format_number(term.param) + ")"; break;
            case RewardKind::TimeCost: out += "time_cost(" + format_number(term.param) + ")"; break;
            case RewardKind::MinigridLegacy: out += "minigrid_legacy(" + format_number(term.param) + ")"; break;
        }
    }
    return out;
}

std::string to_string(const TerminationSpec& spec) {
    std::string out;
    for (auto kind : spec.terms) {
        if (!out.empty()) out += '+';
        switch (kind) {
            case TerminationKind::OnGoalReached: out += "on_goal_reached"; break;
            case TerminationKind::OnLavaFall: out += "on_lava_fall"; break;
            case TerminationKind::OnDoorDone: out += "on_door_done"; break;
            case TerminationKind::OnBallHit: out += "on_ball_hit"; break;
            case TerminationKind::Free: out += "free"; break;
        }
    }
    return out;
}

std::string to_string(const ObservationSpec& spec) {
    return is_first_person(spec.kind) ? to_string(spec.kind) + ":" + std::to_string(spec.view_size) : to_string(spec.kind);
}

}  // namespace navgrid
