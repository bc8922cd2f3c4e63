#include "navgrid/batch.hpp"

#include <chrono>
#include <exception>
#include <stdexcept>

#include <omp.h>

namespace navgrid {

namespace {

template <class T>
void copy_column(const std::vector<T>& src, std::size_t src_off, std::vector<T>& dst, std::size_t dst_off,
                 std::size_t count) {
    if (src.empty()) return;
    std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(src_off), count,
                dst.begin() + static_cast<std::ptrdiff_t>(dst_off));
}

void copy_pool_lane(const EntityPool& src, std::size_t src_lane, EntityPool& dst, std::size_t dst_lane) {
    if (src.capacity != dst.capacity)
        throw CapacityError(to_string(src.tag) + " pool capacity " + std::to_string(src.capacity) +
                            " does not match batch capacity " + std::to_string(dst.capacity));
    const auto cap = static_cast<std::size_t>(src.capacity);
    const std::size_t so = src_lane * cap;
    const std::size_t d = dst_lane * cap;
    copy_column(src.active, so, dst.active, d, cap);
    copy_column(src.row, so, dst.row, d, cap);
    copy_column(src.col, so, dst.col, d, cap);
    copy_column(src.colour, so, dst.colour, d, cap);
    copy_column(src.direction, so, dst.direction, d, cap);
    copy_column(src.door_state, so, dst.door_state, d, cap);
    copy_column(src.probability, so, dst.probability, d, cap);
    copy_column(src.pocket, so, dst.pocket, d, cap);
}

template <class F>
void for_lanes(std::size_t n, ExecPolicy exec, F&& body) {
    const int threads = exec.threads > 0 ? exec.threads : omp_get_max_threads();
    std::exception_ptr error;
    const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static) num_threads(threads)
    for (std::int64_t i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(navgrid_lane_error)
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
}

void observe_lane(BatchState& b, std::size_t i) {
    if (dtype_of(b.obs_spec) == DType::I32)
        observe_into(b.lane(i), b.obs_spec, std::span<std::int32_t>(b.obs_i32.data() + i * b.obs_stride, b.obs_stride));
    else
        observe_into(b.lane(i), b.obs_spec, std::span<std::uint8_t>(b.obs_u8.data() + i * b.obs_stride, b.obs_stride));
}

void reset_lane(const Environment& env, BatchState& b, std::size_t i, const Key& key) {
    const State s = env.generator->generate(key);
    for (int p = 0; p < kPoolCount; ++p) copy_pool_lane(s.pools[p], 0, b.pools[p], i);
    b.mission[i] = s.mission;
    b.events[i] = s.events;
    b.key[i] = s.key;
    b.t[i] = s.t;
    b.action[i] = -1;
    b.reward[i] = 0.0;
    b.step_type[i] = StepType::First;
    b.discount[i] = env.gamma;
    b.episode_return[i] = 0.0;
    b.episode_length[i] = 0;
    observe_lane(b, i);
}

void step_lane(const Environment& env, BatchState& b, std::size_t i, std::int32_t action, const Key& key) {
    if (b.step_type[i] == StepType::Terminated || b.step_type[i] == StepType::Truncated) {
        reset_lane(env, b, i, key);
        return;
    }
    const auto out = advance_inplace(env, b.lane(i), static_cast<Action>(action), key);
    b.action[i] = action;
    b.reward[i] = out.reward;
    b.step_type[i] = out.step_type;
    b.discount[i] = out.discount;
    b.episode_return[i] += out.reward;
    b.episode_length[i] += 1;
    observe_lane(b, i);
}

void check_batch(const Environment& env, const BatchState& b) {
    if (!b.grid || b.grid->h != env.h || b.grid->w != env.w || !(b.obs_spec == env.observation_fn))
        throw std::invalid_argument("batch was not built for environment '" + env.id + "'");
}

}  // namespace

BatchState::BatchState(const Environment& env, std::size_t n_) : n(n_) {
    if (n_ == 0) throw std::invalid_argument("batch needs at least one lane");
    const auto caps = env.generator->capacities();
    const State probe(make_layout(env.h, env.w), caps);
    grid = probe.grid;
    for (int p = 0; p < kPoolCount; ++p) pools[p] = EntityPool(kPoolTags[p], caps[p], n_);
    mission.assign(n_, -1);
    events.assign(n_, EventLog{});
    key.assign(n_, Key{});
    t.assign(n_, 0);
    action.assign(n_, -1);
    reward.assign(n_, 0.0);
    step_type.assign(n_, StepType::First);
    discount.assign(n_, env.gamma);
    episode_return.assign(n_, 0.0);
    episode_length.assign(n_, 0);
    obs_spec = env.observation_fn;
    obs_shape = observation_shape(obs_spec, env.h, env.w);
    obs_stride = observation_elements(obs_spec, env.h, env.w);
    if (dtype_of(obs_spec) == DType::I32)
        obs_i32.assign(n_ * obs_stride, 0);
    else
        obs_u8.assign(n_ * obs_stride, 0);
}

StateRef BatchState::lane(std::size_t i) noexcept {
    StateRef v;
    v.grid = grid.get();
    for (int p = 0; p < kPoolCount; ++p) v.pools[p] = lane_view(pools[p], i);
    v.mission = &mission[i];
    v.events = &events[i];
    v.key = &key[i];
    v.t = &t[i];
    return v;
}

StateCRef BatchState::lane(std::size_t i) const noexcept {
    StateCRef v;
    v.grid = grid.get();
    for (int p = 0; p < kPoolCount; ++p) v.pools[p] = lane_view(pools[p], i);
    v.mission = &mission[i];
    v.events = &events[i];
    v.key = &key[i];
    v.t = &t[i];
    return v;
}

State BatchState::state(std::size_t i) const {
    if (i >= n) throw std::out_of_range("lane index out of range");
    Capacities caps{};
    for (int p = 0; p < kPoolCount; ++p) caps[p] = pools[p].capacity;
    State s(grid, caps);
    for (int p = 0; p < kPoolCount; ++p) copy_pool_lane(pools[p], i, s.pools[p], 0);
    s.mission = mission[i];
    s.events = events[i];
    s.key = key[i];
    s.t = t[i];
    return s;
}

Timestep BatchState::timestep(std::size_t i) const {
    Timestep ts;
    ts.state = state(i);
    ts.t = t[i];
    ts.action = action[i];
    ts.reward = reward[i];
    ts.step_type = step_type[i];
    ts.discount = discount[i];
    ts.info.episode_return = episode_return[i];
    ts.info.episode_length = episode_length[i];
    ts.observation.shape = obs_shape;
    ts.observation.dtype = dtype_of(obs_spec);
    if (ts.observation.dtype == DType::I32) {
        const auto view = observation_i32(i);
        ts.observation.i32.assign(view.begin(), view.end());
    } else {
        const auto view = observation_u8(i);
        ts.observation.u8.assign(view.begin(), view.end());
    }
    return ts;
}

void BatchState::set_lane(std::size_t i, const Timestep& ts) {
    if (i >= n) throw std::out_of_range("lane index out of range");
    if (!ts.state.grid || !(*ts.state.grid == *grid)) throw std::invalid_argument("timestep grid does not match batch");
    if (ts.observation.shape != obs_shape || ts.observation.dtype != dtype_of(obs_spec))
        throw std::invalid_argument("timestep observation does not match batch");
    for (int p = 0; p < kPoolCount; ++p) copy_pool_lane(ts.state.pools[p], 0, pools[p], i);
    mission[i] = ts.state.mission;
    events[i] = ts.state.events;
    key[i] = ts.state.key;
    t[i] = ts.state.t;
    action[i] = ts.action;
    reward[i] = ts.reward;
    step_type[i] = ts.step_type;
    discount[i] = ts.discount;
    episode_return[i] = ts.info.episode_return;
    episode_length[i] = ts.info.episode_length;
    if (ts.observation.dtype == DType::I32)
        std::copy(ts.observation.i32.begin(), ts.observation.i32.end(), obs_i32.begin() + static_cast<std::ptrdiff_t>(i * obs_stride));
    else
        std::copy(ts.observation.u8.begin(), ts.observation.u8.end(), obs_u8.begin() + static_cast<std::ptrdiff_t>(i * obs_stride));
}

std::span<const std::int32_t> BatchState::observation_i32(std::size_t i) const {
    if (obs_i32.empty()) throw std::invalid_argument("batch observations are u8");
    return {obs_i32.data() + i * obs_stride, obs_stride};
}

std::span<const std::uint8_t> BatchState::observation_u8(std::size_t i) const {
    if (obs_u8.empty()) throw std::invalid_argument("batch observations are i32");
    return {obs_u8.data() + i * obs_stride, obs_stride};
}

std::size_t BatchState::memory_bytes() const noexcept {
    std::size_t total = 0;
    for (const auto& p : pools) total += p.memory_bytes();
    total += mission.size() + events.size() * sizeof(EventLog) + key.size() * sizeof(Key) + t.size() * 4;
    total += action.size() * 4 + reward.size() * 8 + step_type.size() + discount.size() * 8;
    total += episode_return.size() * 8 + episode_length.size() * 4;
    total += obs_i32.size() * 4 + obs_u8.size();
    return total;
}

bool operator==(const BatchState& a, const BatchState& b) {
    const bool grids = (a.grid == b.grid) || (a.grid && b.grid && *a.grid == *b.grid);
    return a.n == b.n && grids && a.pools == b.pools && a.mission == b.mission && a.events == b.events &&
           a.key == b.key && a.t == b.t && a.action == b.action && a.reward == b.reward &&
           a.step_type == b.step_type && a.discount == b.discount && a.episode_return == b.episode_return &&
           a.episode_length == b.episode_length && a.obs_spec == b.obs_spec && a.obs_shape == b.obs_shape &&
           a.obs_i32 == b.obs_i32 && a.obs_u8 == b.obs_u8;
}

BatchState batch_reset(const Environment& env, const Key& key, std::size_t n, ExecPolicy exec) {
    BatchState b(env, n);
    for_lanes(n, exec, [&](std::size_t i) { reset_lane(env, b, i, split_at(key, i)); });
    return b;
}

void batch_step_inplace(const Environment& env, BatchState& batch, std::span<const std::int32_t> actions,
                        const Key& key, ExecPolicy exec) {
    check_batch(env, batch);
    if (actions.size() != batch.n)
        throw std::invalid_argument("expected " + std::to_string(batch.n) + " actions, got " +
                                    std::to_string(actions.size()));
    for (auto a : actions) check_action(a);
    for_lanes(batch.n, exec, [&](std::size_t i) { step_lane(env, batch, i, actions[i], fold_in(key, i)); });
}

BatchState batch_step(const Environment& env, const BatchState& batch, std::span<const std::int32_t> actions,
                      const Key& key, ExecPolicy exec) {
    BatchState next = batch;
    batch_step_inplace(env, next, actions, key, exec);
    return next;
}

namespace reference {

std::vector<Timestep> batch_reset(const Environment& env, const Key& key, std::size_t n) {
    if (n == 0) throw std::invalid_argument("batch needs at least one lane");
    std::vector<Timestep> lanes;
    lanes.reserve(n);
    for (std::size_t i = 0; i < n; ++i) lanes.push_back(reset(env, split_at(key, i)));
    return lanes;
}

void batch_step(const Environment& env, std::vector<Timestep>& lanes, std::span<const std::int32_t> actions,
                const Key& key) {
    if (actions.size() != lanes.size()) throw std::invalid_argument("action count does not match lane count");
    for (std::size_t i = 0; i < lanes.size(); ++i)
        lanes[i] = step(env, lanes[i], static_cast<Action>(actions[i]), fold_in(key, i));
}

}  // namespace reference

std::int32_t random_lane_action(const Key& policy_key, std::size_t lane) {
    return static_cast<std::int32_t>(random_int(fold_in(policy_key, lane), 0, kActionCount));
}

BatchPolicy random_batch_policy() {
    return [](const BatchState&, const Key& key, std::span<std::int32_t> out) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = random_lane_action(key, i);
    };
}

BatchUnrollStats batch_unroll(const Environment& env, const Key& key, std::size_t n, int n_steps,
                              const BatchPolicy& policy, ExecPolicy exec) {
    if (n_steps < 1) throw std::invalid_argument("batch_unroll needs n_steps >= 1");
    if (!policy) throw std::invalid_argument("batch_unroll needs a policy");
    BatchState b = batch_reset(env, split_at(key, 0), n, exec);
    const Key run_key = split_at(key, 1);
    const Key policy_root = split_at(key, 2);
    BatchUnrollStats stats;
    stats.returns.assign(n, 0.0);
    stats.episodes.assign(n, 0);
    std::vector<std::int32_t> actions(n);

    const auto start = std::chrono::steady_clock::now();
    for (int s = 0; s < n_steps; ++s) {
        policy(b, fold_in(policy_root, static_cast<std::uint64_t>(s)), actions);
        batch_step_inplace(env, b, actions, fold_in(run_key, static_cast<std::uint64_t>(s)), exec);
        for (std::size_t i = 0; i < n; ++i) {
            stats.returns[i] += b.reward[i];
            stats.episodes[i] += b.step_type[i] == StepType::Terminated || b.step_type[i] == StepType::Truncated;
        }
    }
    stats.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    stats.total_steps = n * static_cast<std::size_t>(n_steps);
    stats.steps_per_s = stats.wall_time_s > 0 ? static_cast<double>(stats.total_steps) / stats.wall_time_s : 0.0;
    stats.state_bytes = b.memory_bytes();
    return stats;
}

BatchUnrollStats serial_unroll_stats(const Environment& env, const Key& key, std::size_t n, int n_steps) {
    if (n_steps < 1) throw std::invalid_argument("serial_unroll_stats needs n_steps >= 1");
    auto lanes = reference::batch_reset(env, split_at(key, 0), n);
    const Key run_key = split_at(key, 1);
    const Key policy_root = split_at(key, 2);
    BatchUnrollStats stats;
    stats.returns.assign(n, 0.0);
    stats.episodes.assign(n, 0);
    std::vector<std::int32_t> actions(n);
    for (int s = 0; s < n_steps; ++s) {
        const Key pk = fold_in(policy_root, static_cast<std::uint64_t>(s));
        for (std::size_t i = 0; i < n; ++i) actions[i] = random_lane_action(pk, i);
        reference::batch_step(env, lanes, actions, fold_in(run_key, static_cast<std::uint64_t>(s)));
        for (std::size_t i = 0; i < n; ++i) {
            stats.returns[i] += lanes[i].reward;
            stats.episodes[i] += lanes[i].is_last();
        }
    }
    stats.total_steps = n * static_cast<std::size_t>(n_steps);
    return stats;
}

}  // namespace navgrid
