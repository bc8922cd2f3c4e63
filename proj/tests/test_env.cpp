#include <doctest.h>

#include <atomic>
#include <thread>

#include "navgrid/env.hpp"

using namespace navgrid;

namespace {

const Key k0 = make_key(0);

// Empty-5x5 from (1,1) east to the goal at (3,3).
const std::vector<Action> kToGoal = {Action::Forward, Action::Forward, Action::RotateRight, Action::Forward,
                                     Action::Forward};

}  // namespace

TEST_CASE("catalog environments carry the default wiring") {
    const Environment env = make("Navix-Empty-8x8-v0");
    CHECK(env.id == "Navix-Empty-8x8-v0");
    CHECK(env.h == 8);
    CHECK(env.w == 8);
    CHECK(env.max_steps == 4 * 8 * 8);
    CHECK(env.gamma == 1.0);
    CHECK(env.observation_fn == observations::symbolic());
    CHECK(env.reward_fn == rewards::on_goal_reached());
    CHECK(env.termination_fn == terminations::on_goal_reached());
    CHECK(env.action_space().n == 7);
    CHECK(env.observation_space().shape == std::vector<int>{8, 8, 3});
    CHECK(env.observation_space().dtype == DType::I32);
    CHECK(env.reward_space().low == 0.0);
    CHECK(env.reward_space().high == 1.0);

    const Environment lava = make("Navix-LavaGap-S7-v0");
    CHECK(lava.reward_space().low == -1.0);
    CHECK(lava.reward_space().high == 1.0);
    CHECK(make("Navix-Empty-5x5-v0", "reward=on_goal_reached+time_cost(0.25)").reward_space().low == -0.25);
}

TEST_CASE("every catalog id can be made") {
    for (const auto& id : catalog_ids()) CHECK_NOTHROW(make(id));
    const auto ids = registered_envs();
    CHECK(ids.size() >= catalog_ids().size());
}

TEST_CASE("unknown ids raise a lookup error with suggestions") {
    try {
        (void)make("Navix-Empty-7x7-v0");
        FAIL("expected LookupError");
    } catch (const LookupError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("Navix-Empty-7x7-v0") != std::string::npos);
        CHECK(msg.find("did you mean") != std::string::npos);
        CHECK(msg.find("Navix-Empty-") != std::string::npos);
    }
    CHECK_THROWS_AS(make("nonsense"), std::invalid_argument);
}

TEST_CASE("create_env validates its inputs") {
    const auto gen = catalog_generator(empty_world(5));
    CHECK_THROWS_AS(create_env("x", nullptr, rewards::free(), terminations::free()), std::invalid_argument);
    CHECK_THROWS_AS(create_env("x", gen, RewardSpec{}, terminations::free()), std::invalid_argument);
    CHECK_THROWS_AS(create_env("x", gen, rewards::free(), TerminationSpec{}), std::invalid_argument);
    CHECK_THROWS_AS(create_env("x", gen, rewards::free(), terminations::free(), observations::symbolic(), 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(create_env("x", gen, rewards::free(), terminations::free(), observations::symbolic(), 10, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(create_env("x", gen, rewards::free(), terminations::free(), observations::symbolic(), 10, 1.5),
                    std::invalid_argument);
    CHECK_THROWS_AS(create_env("x", gen, rewards::free(), terminations::free(), observations::rgb_first_person(4)),
                    std::invalid_argument);
    const Environment ok = create_env("x", gen, rewards::free(), terminations::free(), observations::rgb(), 12, 0.5);
    CHECK(ok.max_steps == 12);
    CHECK(ok.gamma == 0.5);
}

TEST_CASE("override grammar") {
    const auto o = parse_overrides("observation=rgb_first_person:5; reward=on_goal_reached+action_cost(0.01), T=50,gamma=0.99");
    REQUIRE(o.observation_fn);
    CHECK(*o.observation_fn == observations::rgb_first_person(5));
    REQUIRE(o.reward_fn);
    CHECK(o.reward_fn->terms.size() == 2);
    CHECK(o.max_steps == 50);
    CHECK(o.gamma == 0.99);
    CHECK_FALSE(o.termination_fn);
    CHECK(parse_overrides(to_string(o)).reward_fn == o.reward_fn);
    CHECK(to_string(parse_overrides(to_string(o))) == to_string(o));

    const auto alias = parse_overrides("observation_fn=categorical;termination_fn=free;max_steps=3");
    CHECK(alias.observation_fn == observations::categorical());
    CHECK(alias.termination_fn == terminations::free());
    CHECK(alias.max_steps == 3);
    CHECK(parse_overrides("").empty());

    CHECK_THROWS_AS(parse_overrides("T"), std::invalid_argument);
    CHECK_THROWS_AS(parse_overrides("speed=3"), std::invalid_argument);
    CHECK_THROWS_AS(parse_overrides("T=ten"), std::invalid_argument);
    CHECK_THROWS_AS(parse_overrides("gamma=0.5x"), std::invalid_argument);
}

TEST_CASE("overrides apply on make and are validated") {
    const Environment env = make("Navix-DoorKey-5x5-v0", "observation=categorical;T=7;gamma=0.5");
    CHECK(env.observation_fn == observations::categorical());
    CHECK(env.max_steps == 7);
    CHECK(env.gamma == 0.5);
    CHECK(env.reward_fn == rewards::on_goal_reached());
    CHECK_THROWS_AS(make("Navix-DoorKey-5x5-v0", "T=0"), std::invalid_argument);
    CHECK_THROWS_AS(make("Navix-DoorKey-5x5-v0", "gamma=2"), std::invalid_argument);
}

TEST_CASE("register_env adds ids and refuses duplicates") {
    register_env("Test-Custom-v0", [] {
        auto gen = make_generator(5, 5, {1, 0, 0, 0, 1, 0, 0, 0}, [](StateRef s, KeyStream&) {
            spawn_into(s, Tag::Player, {0, 0});
            spawn_into(s, Tag::Goal, {0, 1});
        });
        return create_env("Test-Custom-v0", gen, rewards::on_goal_reached(), terminations::on_goal_reached());
    });
    const Environment env = make("Test-Custom-v0");
    Timestep ts = step(env, reset(env, k0), Action::Forward, k0);
    CHECK(ts.step_type == StepType::Terminated);
    CHECK(ts.reward == 1.0);

    CHECK_THROWS_AS(register_env("Test-Custom-v0", [] { return make("Navix-Empty-5x5-v0"); }), ConflictError);
    CHECK_THROWS_AS(register_env("Navix-Empty-5x5-v0", [] { return make("Navix-Empty-6x6-v0"); }), ConflictError);
    CHECK_THROWS_AS(register_env("", [] { return make("Navix-Empty-5x5-v0"); }), std::invalid_argument);
    CHECK_THROWS_AS(register_env("Test-Null-v0", nullptr), std::invalid_argument);
    const auto ids = registered_envs();
    CHECK(std::find(ids.begin(), ids.end(), "Test-Custom-v0") != ids.end());
    CHECK(std::find(catalog_ids().begin(), catalog_ids().end(), "Test-Custom-v0") == catalog_ids().end());
}

TEST_CASE("registry is safe under concurrent use") {
    std::atomic<int> made{0};
    std::vector<std::thread> threads;
    for (int t = 0; t < 4; ++t) {
        threads.emplace_back([t, &made] {
            register_env("Test-Thread-" + std::to_string(t), [] { return make("Navix-Empty-5x5-v0"); });
            for (int i = 0; i < 20; ++i) {
                (void)make("Navix-Empty-6x6-v0");
                ++made;
            }
        });
    }
    for (auto& th : threads) th.join();
    CHECK(made == 80);
    for (int t = 0; t < 4; ++t) CHECK_NOTHROW(make("Test-Thread-" + std::to_string(t)));
}

TEST_CASE("reset produces a padded FIRST timestep") {
    const Environment env = make("Navix-Empty-5x5-v0");
    const Timestep ts = reset(env, make_key(3));
    CHECK(ts.t == 0);
    CHECK(ts.action == -1);
    CHECK(ts.reward == 0.0);
    CHECK(ts.step_type == StepType::First);
    CHECK(ts.info == Info{});
    CHECK(ts.observation == observe(ts.state, env.observation_fn));
    CHECK(ts.state == env.generator->generate(make_key(3)));
    CHECK(reset(env, make_key(3)) == ts);
    CHECK(to_string(StepType::Truncated) == "TRUNCATED");
}

TEST_CASE("step follows the documented key split") {
    const Environment env = make("Navix-Dynamic-Obstacles-8x8");
    const Timestep ts = reset(env, make_key(4));
    const Key key = make_key(77);
    const Timestep next = step(env, ts, Action::RotateLeft, key);

    State manual = ts.state;
    manual = intervene(manual, Action::RotateLeft, split_at(key, 0));
    manual = transition(manual, split_at(key, 1));
    manual.t += 1;
    manual.key = split_at(key, 2);
    CHECK(next.state == manual);
    CHECK(next.t == 1);
    CHECK(next.action == static_cast<int>(Action::RotateLeft));
}

TEST_CASE("goal run terminates with discount zero and accumulates info") {
    const Environment env = make("Navix-Empty-5x5-v0", "gamma=0.9");
    Timestep ts = reset(env, k0);
    for (std::size_t i = 0; i < kToGoal.size(); ++i) {
        ts = step(env, ts, kToGoal[i], make_key(i));
        if (i + 1 < kToGoal.size()) {
            CHECK(ts.step_type == StepType::Mid);
            CHECK(ts.discount == 0.9);
            CHECK(ts.reward == 0.0);
        }
    }
    CHECK(ts.step_type == StepType::Terminated);
    CHECK(ts.discount == 0.0);
    CHECK(ts.reward == 1.0);
    CHECK(ts.t == 5);
    CHECK(ts.info.episode_return == 1.0);
    CHECK(ts.info.episode_length == 5);
    CHECK(ts.info.as_map().at("episode_length") == 5.0);
    CHECK(ts.is_last());
}

TEST_CASE("truncation happens exactly at T") {
    const Environment env = make("Navix-Empty-5x5-v0", "T=3");
    Timestep ts = reset(env, k0);
    ts = step(env, ts, Action::RotateLeft, k0);
    CHECK(ts.step_type == StepType::Mid);
    ts = step(env, ts, Action::RotateLeft, k0);
    CHECK(ts.step_type == StepType::Mid);
    ts = step(env, ts, Action::RotateLeft, k0);
    CHECK(ts.step_type == StepType::Truncated);
    CHECK(ts.t == 3);
    CHECK(ts.discount == 1.0);
}

TEST_CASE("termination wins over truncation on the last step") {
    const Environment env = make("Navix-Empty-5x5-v0", "T=5");
    Timestep ts = reset(env, k0);
    for (Action a : kToGoal) ts = step(env, ts, a, k0);
    CHECK(ts.step_type == StepType::Terminated);
}

TEST_CASE("stepping a terminal timestep autoresets with the given key") {
    const Environment env = make("Navix-Empty-Random-6x6", "T=2");
    Timestep ts = reset(env, k0);
    ts = step(env, step(env, ts, Action::Forward, k0), Action::Forward, k0);
    REQUIRE(ts.step_type == StepType::Truncated);
    const Timestep fresh = step(env, ts, Action::Done, make_key(55));
    CHECK(fresh == reset(env, make_key(55)));
    CHECK(fresh.info == Info{});
}

TEST_CASE("invalid actions throw") {
    const Environment env = make("Navix-Empty-5x5-v0");
    const Timestep ts = reset(env, k0);
    CHECK_THROWS_AS(step(env, ts, static_cast<Action>(7), k0), std::invalid_argument);
    CHECK_THROWS_AS(step(env, ts, static_cast<Action>(-1), k0), std::invalid_argument);
    CHECK_THROWS_AS(check_action(9), std::invalid_argument);
    CHECK_NOTHROW(check_action(6));
}

TEST_CASE("go-to-door terminates on done in front of the mission door") {
    const Environment env = make("Navix-GoToDoor-5x5-v0");
    bool checked = false;
    for (std::uint64_t k = 0; k < 50 && !checked; ++k) {
        Timestep ts = reset(env, make_key(k));
        const auto& s = ts.state;
        const Position p = s.view().player_position();
        const Position front = step_towards(p, s.view().player_direction());
        const auto e = entity_at(s, front);
        if (!e || e->tag != Tag::Door) continue;
        const bool right = s.pool(Tag::Door).colour[static_cast<std::size_t>(e->slot)] == s.mission;
        ts = step(env, ts, Action::Done, k0);
        CHECK(ts.step_type == (right ? StepType::Terminated : StepType::Mid));
        CHECK(ts.reward == (right ? 1.0 : 0.0));
        checked = right;
    }
    CHECK(checked);
}

TEST_CASE("lava ends the episode with -1") {
    const Environment env = make("Navix-DistShift1-v0");
    Timestep ts = reset(env, k0);
    ts = step(env, ts, Action::Forward, k0);
    ts = step(env, ts, Action::Forward, k0);
    CHECK(ts.step_type == StepType::Terminated);
    CHECK(ts.reward == -1.0);
}

TEST_CASE("unroll uses the documented key schedule") {
    const Environment env = make("Navix-Dynamic-Obstacles-6x6");
    const Key key = make_key(12);
    std::vector<Key> seen;
    const Policy spy = [&](const Timestep&, const Key& k) {
        seen.push_back(k);
        return Action::RotateRight;
    };
    const Trajectory traj = unroll(env, key, spy, 6);
    CHECK(traj.initial == reset(env, split_at(key, 0)));
    CHECK(traj.actions.size() == 6);
    CHECK(traj.steps.size() == 6);
    Timestep ts = traj.initial;
    for (int s = 0; s < 6; ++s) {
        CHECK(seen[static_cast<std::size_t>(s)] == unroll_policy_key(key, s));
        CHECK(unroll_policy_key(key, s) == fold_in(split_at(key, 2), static_cast<std::uint64_t>(s)));
        ts = step(env, ts, Action::RotateRight, unroll_step_key(key, s));
        CHECK(traj.steps[static_cast<std::size_t>(s)] == ts);
    }
    CHECK_THROWS_AS(unroll(env, key, spy, 0), std::invalid_argument);
    CHECK_THROWS_AS(unroll(env, key, Policy{}, 3), std::invalid_argument);
}

TEST_CASE("random policy is uniform over all seven actions") {
    const Policy p = random_policy();
    const Environment env = make("Navix-Empty-5x5-v0");
    const Timestep ts = reset(env, k0);
    std::vector<int> counts(7, 0);
    for (std::uint64_t i = 0; i < 7000; ++i) ++counts[static_cast<std::size_t>(p(ts, make_key(i)))];
    for (int c : counts) {
        CHECK(c > 850);
        CHECK(c < 1150);
    }
}

TEST_CASE("episode accounting across autoresets") {
    const Environment env = make("Navix-Empty-5x5-v0", "T=4");
    const Trajectory traj = unroll(env, make_key(5), random_policy(), 50);
    int length = 0;
    double ret = 0.0;
    for (const auto& ts : traj.steps) {
        if (ts.step_type == StepType::First) {
            length = 0;
            ret = 0.0;
            CHECK(ts.info == Info{});
            continue;
        }
        ++length;
        ret += ts.reward;
        CHECK(ts.info.episode_length == length);
        CHECK(ts.info.episode_return == ret);
        CHECK(ts.t == length);
    }
}
