// Acceptance runner: one PASS/FAIL line per criterion.
//
//   acceptance                 all criteria
//   acceptance --criterion N   criterion N only

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "navgrid/batch.hpp"
#include "navgrid/bench.hpp"
#include "navgrid/env.hpp"
#include "navgrid/grid.hpp"
#include "navgrid/serialize.hpp"
#include "oracles/fov_oracle.hpp"
#include "oracles/serial_batch.hpp"
#include "oracles/solver.hpp"

using namespace navgrid;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Verdict {
    bool pass = false;
    std::string detail;
};

// --------------------------------------------------------------------------
// 1. batch vs serial

Verdict batch_serial_equivalence() {
    const auto start = Clock::now();
    const std::size_t n = 64;
    const int n_steps = 1000;
    std::size_t compared = 0;
    for (const auto& id : registered_envs()) {
        const Environment env = make(id);
        const Key key = fold_in(make_key(0xacce), std::hash<std::string>{}(id) & 0xffff);
        const Key policy_root = split_at(key, 2);
        BatchState batch = batch_reset(env, split_at(key, 0), n);
        auto lanes = oracle::serial_reset(env, split_at(key, 0), n);
        std::vector<std::int32_t> actions(n);
        for (int s = 0; s <= n_steps; ++s) {
            for (std::size_t i = 0; i < n; ++i) {
                if (!(batch.timestep(i) == lanes[i]))
                    return {false, id + " lane " + std::to_string(i) + " diverges at step " + std::to_string(s)};
                ++compared;
            }
            if (s == n_steps) break;
            const Key policy_key = fold_in(policy_root, static_cast<std::uint64_t>(s));
            for (std::size_t i = 0; i < n; ++i) actions[i] = random_lane_action(policy_key, i);
            const Key step_key = fold_in(split_at(key, 1), static_cast<std::uint64_t>(s));
            batch_step_inplace(env, batch, actions, step_key);
            oracle::serial_step(env, lanes, actions, step_key);
        }
    }
    const double elapsed = seconds_since(start);
    std::ostringstream out;
    out << registered_envs().size() << " ids, " << compared << " lane-timesteps identical, " << elapsed << " s";
    return {elapsed < 120.0, out.str()};
}

// --------------------------------------------------------------------------
// 2. determinism

Verdict determinism() {
    const auto start = Clock::now();
    const std::vector<std::string> ids = {"Navix-Empty-8x8-v0", "Navix-DoorKey-8x8-v0", "Navix-FourRooms-v0",
                                          "Navix-Crossings-S9N1-v0", "Navix-Dynamic-Obstacles-8x8"};
    std::size_t bytes = 0;
    for (const auto& id : ids) {
        const Key seed = make_key(2024);
        auto dump = [&] {
            const Environment env = make(id);
            return serialize_trajectory({id, "", seed, unroll(env, seed, random_policy(), 10000)});
        };
        const auto a = dump();
        const auto b = dump();
        if (a != b) return {false, id + " dumps differ"};
        bytes += a.size();
    }
    const double elapsed = seconds_since(start);
    std::ostringstream out;
    out << ids.size() << " classes x 10000 steps, " << bytes << " bytes per pass identical, " << elapsed << " s";
    return {elapsed < 60.0, out.str()};
}

// --------------------------------------------------------------------------
// 3. visibility vs propagation oracle

bool same_mask(const State& s, int R) {
    return visibility_mask(s, R).cells == oracle::fov_fixpoint(s, R);
}

Verdict fov_oracle_equivalence() {
    const auto start = Clock::now();
    std::size_t checked = 0;

    // Exhaustive 5x5: any player pose, up to three cells each a wall or a
    // closed door.
    Capacities caps{};
    caps[0] = 1;
    caps[static_cast<std::size_t>(pool_index(Tag::Wall))] = 3;
    caps[static_cast<std::size_t>(pool_index(Tag::Door))] = 3;
    State s(make_layout(5, 5), caps);
    auto& player = s.pools[0];
    auto& walls = s.pools[static_cast<std::size_t>(pool_index(Tag::Wall))];
    auto& doors = s.pools[static_cast<std::size_t>(pool_index(Tag::Door))];
    player.active[0] = 1;
    for (int k = 0; k < 3; ++k) doors.door_state[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(DoorState::Closed);

    std::vector<std::vector<int>> subsets;
    for (int a = 0; a < 25; ++a) {
        subsets.push_back({a});
        for (int b = a + 1; b < 25; ++b) {
            subsets.push_back({a, b});
            for (int c = b + 1; c < 25; ++c) subsets.push_back({a, b, c});
        }
    }
    subsets.push_back({});

    for (int cell = 0; cell < 25; ++cell) {
        player.row[0] = static_cast<std::int16_t>(cell / 5);
        player.col[0] = static_cast<std::int16_t>(cell % 5);
        for (const auto& subset : subsets) {
            if (std::find(subset.begin(), subset.end(), cell) != subset.end()) continue;
            const int kinds = 1 << subset.size();
            for (int mask = 0; mask < kinds; ++mask) {
                std::fill(walls.active.begin(), walls.active.end(), 0);
                std::fill(doors.active.begin(), doors.active.end(), 0);
                int nw = 0;
                int nd = 0;
                for (std::size_t k = 0; k < subset.size(); ++k) {
                    auto& pool = (mask >> k) & 1 ? doors : walls;
                    const auto slot = static_cast<std::size_t>((mask >> k) & 1 ? nd++ : nw++);
                    pool.active[slot] = 1;
                    pool.row[slot] = static_cast<std::int16_t>(subset[k] / 5);
                    pool.col[slot] = static_cast<std::int16_t>(subset[k] % 5);
                }
                for (int d = 0; d < 4; ++d) {
                    player.direction[0] = static_cast<std::uint8_t>(d);
                    for (int R : {3, 5, 7}) {
                        if (!same_mask(s, R)) {
                            std::ostringstream out;
                            out << "5x5 mismatch: player " << cell << " dir " << d << " R " << R;
                            return {false, out.str()};
                        }
                        ++checked;
                    }
                }
            }
        }
    }
    const std::size_t exhaustive = checked;

    // Random 9x9 states with walls and doors in every state.
    caps[static_cast<std::size_t>(pool_index(Tag::Wall))] = 30;
    caps[static_cast<std::size_t>(pool_index(Tag::Door))] = 10;
    KeyStream rng(make_key(0xf0f));
    for (int trial = 0; trial < 1000; ++trial) {
        State r(make_layout(9, 9), caps);
        std::vector<int> cells(81);
        for (int i = 0; i < 81; ++i) cells[static_cast<std::size_t>(i)] = i;
        for (int i = 80; i > 0; --i) std::swap(cells[static_cast<std::size_t>(i)], cells[static_cast<std::size_t>(rng.uniform_int(0, i + 1))]);
        const int nw = static_cast<int>(rng.uniform_int(0, 31));
        const int nd = static_cast<int>(rng.uniform_int(0, 11));
        std::size_t next = 0;
        auto pos = [&] {
            const int c = cells[next++];
            return Position{c / 9, c % 9};
        };
        SpawnArgs pa;
        pa.direction = static_cast<Direction>(rng.uniform_int(0, 4));
        spawn_into(r.view(), Tag::Player, pos(), pa);
        for (int k = 0; k < nw; ++k) spawn_into(r.view(), Tag::Wall, pos());
        for (int k = 0; k < nd; ++k) {
            SpawnArgs da;
            da.door = static_cast<DoorState>(rng.uniform_int(0, 3));
            spawn_into(r.view(), Tag::Door, pos(), da);
        }
        for (int R : {3, 5, 7, 9}) {
            if (!same_mask(r, R)) return {false, "random 9x9 mismatch at trial " + std::to_string(trial)};
            ++checked;
        }
    }
    const double elapsed = seconds_since(start);
    std::ostringstream out;
    out << exhaustive << " exhaustive 5x5 masks and " << checked - exhaustive << " random 9x9 masks match, " << elapsed
        << " s";
    return {elapsed < 60.0, out.str()};
}

// --------------------------------------------------------------------------
// 4. reward and termination truth tables

Verdict reward_termination_tables() {
    // Flag combination c: bit 0 goal, bit 1 lava, bit 2 door done, bit 3 ball hit.
    auto events_of = [](int c) {
        EventLog ev;
        ev.goal_reached = c & 1;
        ev.lava_fallen = c & 2;
        ev.door_done = c & 4;
        ev.ball_hit = c & 8;
        return ev;
    };
    // Hand-written columns over c = 0..15.
    const std::array<double, 16> goal = {0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1};
    const std::array<double, 16> lava = {0, 0, -1, -1, 0, 0, -1, -1, 0, 0, -1, -1, 0, 0, -1, -1};
    const std::array<double, 16> door = {0, 0, 0, 0, 1, 1, 1, 1, 0, 0, 0, 0, 1, 1, 1, 1};
    const std::array<double, 16> ball = {0, 0, 0, 0, 0, 0, 0, 0, -1, -1, -1, -1, -1, -1, -1, -1};
    const std::array<double, 16> legacy = {0, 0.82, 0, 0.82, 0, 0.82, 0, 0.82, 0, 0.82, 0, 0.82, 0, 0.82, 0, 0.82};
    const std::array<bool, 16> t_goal = {0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1};
    const std::array<bool, 16> t_lava = {0, 0, 1, 1, 0, 0, 1, 1, 0, 0, 1, 1, 0, 0, 1, 1};
    const std::array<bool, 16> t_door = {0, 0, 0, 0, 1, 1, 1, 1, 0, 0, 0, 0, 1, 1, 1, 1};
    const std::array<bool, 16> t_ball = {0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1};
    const std::array<bool, 16> t_goal_lava = {0, 1, 1, 1, 0, 1, 1, 1, 0, 1, 1, 1, 0, 1, 1, 1};

    int checked = 0;
    std::string failure;
    auto expect = [&](double got, double want, const std::string& what) {
        ++checked;
        if (std::abs(got - want) > 1e-9 && failure.empty()) {
            std::ostringstream out;
            out << what << ": got " << got << ", want " << want;
            failure = out.str();
        }
    };

    for (int c = 0; c < 16; ++c) {
        const EventLog ev = events_of(c);
        const std::string tag = " flags " + std::to_string(c);
        for (int a = 0; a < kActionCount; ++a) {
            const auto act = static_cast<Action>(a);
            for (std::int32_t t : {0, 19, 57}) {
                expect(reward_value(t, act, ev, rewards::on_goal_reached()), goal[c], "on_goal_reached" + tag);
                expect(reward_value(t, act, ev, rewards::on_lava_fall()), lava[c], "on_lava_fall" + tag);
                expect(reward_value(t, act, ev, rewards::on_door_done()), door[c], "on_door_done" + tag);
                expect(reward_value(t, act, ev, rewards::on_ball_hit()), ball[c], "on_ball_hit" + tag);
                expect(reward_value(t, act, ev, rewards::free()), 0.0, "free" + tag);
                expect(reward_value(t, act, ev, rewards::action_cost(0.25)), act == Action::Done ? 0.0 : -0.25,
                       "action_cost" + tag);
                expect(reward_value(t, act, ev, rewards::time_cost(0.5)), -0.5, "time_cost" + tag);
                expect(reward_value(t, act, ev, rewards::compose({rewards::on_goal_reached(), rewards::on_lava_fall()})),
                       goal[c] + lava[c], "goal+lava" + tag);
                expect(reward_value(t, act, ev, rewards::compose({rewards::on_goal_reached(), rewards::time_cost(0.01)})),
                       goal[c] - 0.01, "goal+time_cost" + tag);
            }
            expect(reward_value(19, act, ev, rewards::minigrid_legacy(100)), legacy[c], "minigrid_legacy" + tag);
        }
        expect(termination_value(ev, terminations::on_goal_reached()), t_goal[c], "term on_goal_reached" + tag);
        expect(termination_value(ev, terminations::on_lava_fall()), t_lava[c], "term on_lava_fall" + tag);
        expect(termination_value(ev, terminations::on_door_done()), t_door[c], "term on_door_done" + tag);
        expect(termination_value(ev, terminations::on_ball_hit()), t_ball[c], "term on_ball_hit" + tag);
        expect(termination_value(ev, terminations::free()), false, "term free" + tag);
        expect(termination_value(ev, terminations::compose({terminations::on_goal_reached(), terminations::on_lava_fall()})),
               t_goal_lava[c], "term goal|lava" + tag);
    }

    // The state-level entry points read t from the pre-transition state.
    State before;
    State after;
    before.t = 19;
    after.events.goal_reached = true;
    const double legacy_value = reward(before, Action::Forward, after, rewards::minigrid_legacy(100));
    expect(legacy_value, 0.82, "legacy via reward()");
    expect(terminate(before, Action::Forward, after, terminations::on_goal_reached()), true, "terminate()");

    std::ostringstream out;
    out << checked << " table entries, legacy(t=19, T=100) = " << legacy_value;
    if (!failure.empty()) return {false, failure};
    return {true, out.str()};
}

// --------------------------------------------------------------------------
// 5. solvability

Verdict solvability() {
    const auto start = Clock::now();
    const int seeds = 10000;
    std::size_t certified = 0;
    std::size_t classes = 0;
    std::size_t dynamic_total = 0;
    std::size_t dynamic_live = 0;
    for (const auto& id : catalog_ids()) {
        const Environment env = make(id);
        const WorldClass wc = parse_env_id(id);
        ++classes;
        for (int s = 0; s < seeds; ++s) {
            const Key key = make_key(static_cast<std::uint64_t>(s));
            Timestep ts = reset(env, key);
            const Key run_key = fold_in(key, 0x501);
            if (wc.kind == WorldKind::DynamicObstacles) {
                dynamic_total += 1;
                dynamic_live += oracle::certify_dynamic(env, ts, run_key, 8).solved;
                // Moving balls are not static hazards: certify the layout without them.
                auto& balls = ts.state.pools[static_cast<std::size_t>(pool_index(Tag::Ball))];
                std::fill(balls.active.begin(), balls.active.end(), 0);
            }
            const oracle::Certificate cert = oracle::certify(env, ts, run_key, wc.kind == WorldKind::GoToDoor);
            if (!cert.solved) return {false, id + " seed " + std::to_string(s) + ": " + cert.reason};
            ++certified;
        }
    }
    const double elapsed = seconds_since(start);
    std::ostringstream out;
    out << classes << " ids x " << seeds << " seeds, " << certified << " certified +1 terminations (" << dynamic_live << "/"
        << dynamic_total << " obstacle starts also won with moving balls), " << elapsed << " s";
    return {elapsed < 300.0, out.str()};
}

// --------------------------------------------------------------------------
// 6. observation shapes

std::string shape_string(DType dtype, const std::vector<int>& shape) {
    std::string s = dtype == DType::I32 ? "i32[" : "u8[";
    for (std::size_t i = 0; i < shape.size(); ++i) s += (i ? ", " : "") + std::to_string(shape[i]);
    return s + "]";
}

Verdict observation_shapes() {
    struct Case {
        std::string override_text;
        std::string want;
    };
    const std::vector<Case> cases = {
        {"observation=symbolic", "i32[8, 8, 3]"},
        {"observation=rgb", "u8[256, 256, 3]"},
        {"observation=symbolic_first_person:7", "i32[7, 7, 3]"},
        {"observation=rgb_first_person:7", "u8[224, 224, 3]"},
    };
    std::string detail;
    for (const auto& c : cases) {
        const Environment env = make("Navix-Empty-8x8-v0", c.override_text);
        const auto space = env.observation_space();
        const Timestep ts = reset(env, make_key(6));
        const std::string declared = shape_string(space.dtype, space.shape);
        const std::string produced = shape_string(ts.observation.dtype, ts.observation.shape);
        std::size_t elements = 1;
        for (int d : ts.observation.shape) elements *= static_cast<std::size_t>(d);
        if (declared != c.want || produced != c.want || ts.observation.elements() != elements)
            return {false, c.override_text + ": declared " + declared + ", produced " + produced + ", want " + c.want};
        detail += (detail.empty() ? "" : " ") + c.want;
    }
    return {true, detail};
}

// --------------------------------------------------------------------------
// 7. speed suite smoke

Verdict speed_suite_smoke() {
    const auto start = Clock::now();
    SpeedOptions options;
    options.env_ids = resolve_env_ids({"all"});
    options.n_envs = 8;
    options.n_steps = 1000;
    options.repeats = 5;
    const auto reports = run_speed_suite(options);
    std::ostringstream csv;
    write_csv(csv, reports);
    const double elapsed = seconds_since(start);

    std::istringstream lines(csv.str());
    std::string line;
    std::getline(lines, line);
    if (line != kCsvHeader) return {false, "header is '" + line + "'"};
    std::size_t rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        if (std::count(line.begin(), line.end(), ',') != 6) return {false, "malformed row '" + line + "'"};
        if (line.find("nan") != std::string::npos) return {false, "failed run '" + line + "'"};
    }
    const std::size_t want = options.env_ids.size() * 5;
    std::ostringstream out;
    out << options.env_ids.size() << " ids x 5 repeats, " << rows << " CSV rows, " << elapsed << " s";
    return {rows == want && elapsed < 60.0, out.str()};
}

// --------------------------------------------------------------------------
// 8. scaling

Verdict scaling() {
    SweepOptions ratio;
    ratio.env_id = "Navix-Empty-8x8-v0";
    ratio.n_steps = 100;
    ratio.n_envs_list = {1, 1024};
    const auto pair = run_scaling_sweep(ratio);
    const double factor = pair[1].wall_time_s / pair[0].wall_time_s;

    const auto start = Clock::now();
    SweepOptions sweep = ratio;
    sweep.n_envs_list = powers_of_two(65536);
    const auto rows = run_scaling_sweep(sweep);
    const double elapsed = seconds_since(start);
    const bool sweep_ok = std::none_of(rows.begin(), rows.end(), [](const BenchReport& r) { return r.failed; }) &&
                          rows.back().n_envs == 65536;

    std::ostringstream out;
    out << "T(1024)/T(1) = " << factor << " (limit 32); sweep to 65536 lanes " << (sweep_ok ? "completed" : "failed")
        << " in " << elapsed << " s";
    return {factor <= 32.0 && sweep_ok && elapsed < 600.0, out.str()};
}

// --------------------------------------------------------------------------
// 9. autoreset and timeout

Verdict autoreset_timeout() {
    const int T = 25;
    const Environment env = make("Navix-Empty-5x5-v0", "termination=free;T=" + std::to_string(T) + ";gamma=0.9");
    Timestep ts = reset(env, make_key(9));
    for (int s = 1; s <= T; ++s) {
        ts = step(env, ts, Action::RotateLeft, make_key(static_cast<std::uint64_t>(100 + s)));
        const StepType want = s < T ? StepType::Mid : StepType::Truncated;
        if (ts.step_type != want || ts.t != s || ts.discount != 0.9)
            return {false, "step " + std::to_string(s) + " is " + to_string(ts.step_type) + " t=" + std::to_string(ts.t)};
    }
    const Key restart = make_key(777);
    const Timestep after_trunc = step(env, ts, Action::Forward, restart);
    if (!(after_trunc == reset(env, restart)) || after_trunc.action != -1 || after_trunc.reward != 0.0 ||
        after_trunc.step_type != StepType::First || after_trunc.t != 0)
        return {false, "step after truncation is not a fresh FIRST timestep"};

    // Terminal by goal: Empty-5x5 from (1,1) facing east, goal at (3,3).
    const Environment goal_env = make("Navix-Empty-5x5-v0");
    Timestep g = reset(goal_env, make_key(1));
    for (Action a : {Action::Forward, Action::Forward, Action::RotateRight, Action::Forward, Action::Forward})
        g = step(goal_env, g, a, make_key(5));
    if (g.step_type != StepType::Terminated || g.discount != 0.0 || g.reward != 1.0)
        return {false, "goal run ended " + to_string(g.step_type)};
    const Timestep after_term = step(goal_env, g, Action::Forward, restart);
    if (!(after_term == reset(goal_env, restart)) || after_term.action != -1 || after_term.reward != 0.0)
        return {false, "step after termination is not a fresh FIRST timestep"};

    // Same rules per lane in the batch path.
    BatchState batch = batch_reset(env, make_key(3), 4);
    const std::vector<std::int32_t> rotate(4, 0);
    for (int s = 1; s <= T; ++s) batch_step_inplace(env, batch, rotate, make_key(static_cast<std::uint64_t>(s)));
    for (std::size_t i = 0; i < 4; ++i)
        if (!batch.truncated(i) || batch.t[i] != T) return {false, "batch lane did not truncate at T"};
    batch_step_inplace(env, batch, rotate, make_key(99));
    for (std::size_t i = 0; i < 4; ++i)
        if (batch.step_type[i] != StepType::First || batch.action[i] != -1 || batch.reward[i] != 0.0 ||
            !(batch.timestep(i) == reset(env, fold_in(make_key(99), i))))
            return {false, "batch lane did not autoreset"};
    return {true, "truncated at t=" + std::to_string(T) + ", FIRST(action=-1, reward=0) after TRUNCATED and TERMINATED"};
}

struct Criterion {
    const char* name;
    Verdict (*run)();
};

const std::array<Criterion, 9> kCriteria = {{
    {"batch-serial equivalence", batch_serial_equivalence},
    {"determinism", determinism},
    {"visibility oracle equivalence", fov_oracle_equivalence},
    {"reward/termination truth table", reward_termination_tables},
    {"solvability", solvability},
    {"observation shapes", observation_shapes},
    {"speed suite smoke", speed_suite_smoke},
    {"scaling", scaling},
    {"autoreset/timeout", autoreset_timeout},
}};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    int only = 0;
    app.add_option("--criterion", only, "run a single criterion (1-9)")->check(CLI::Range(1, 9));
    CLI11_PARSE(app, argc, argv);

    bool all_pass = true;
    for (int i = 1; i <= 9; ++i) {
        if (only != 0 && i != only) continue;
        const auto& c = kCriteria[static_cast<std::size_t>(i - 1)];
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        std::cout << "criterion " << i << " " << (v.pass ? "PASS" : "FAIL") << " " << c.name << ": " << v.detail
                  << std::endl;
        all_pass = all_pass && v.pass;
    }
    return all_pass ? 0 : 1;
}
