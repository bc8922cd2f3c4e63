// bench speed|sweep|fixture
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "navgrid/bench.hpp"
#include "navgrid/serialize.hpp"

namespace {

std::vector<navgrid::Action> parse_actions(const std::string& text) {
    std::vector<navgrid::Action> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const int a = std::stoi(item);
        navgrid::check_action(a);
        out.push_back(static_cast<navgrid::Action>(a));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"navgrid benchmark and fixture harness"};
    app.require_subcommand(1);

    std::vector<std::string> env_ids;
    std::size_t n_envs = 8;
    int n_steps = 1000;
    int repeats = 5;
    std::string seed_hex = "0";
    std::string csv_path;
    std::string frames_dir;
    int n_frames = 16;
    std::string overrides;
    int threads = 0;
    std::size_t max_envs = 65536;
    std::string out_path;
    std::string actions_text;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--env", env_ids, "environment id (repeatable; 'all' for the catalog)")->required();
        sub->add_option("--seed", seed_hex, "hex seed, 1-16 or 32 digits");
        sub->add_option("--override", overrides, "override string, e.g. observation=rgb;T=50");
    };

    auto* speed = app.add_subcommand("speed", "fixed-batch speed suite");
    common(speed);
    speed->add_option("--n-envs", n_envs, "lanes per run")->check(CLI::PositiveNumber);
    speed->add_option("--n-steps", n_steps, "steps per lane")->check(CLI::PositiveNumber);
    speed->add_option("--repeats", repeats, "runs per environment")->check(CLI::PositiveNumber);
    speed->add_option("--csv", csv_path, "CSV output path (stdout when omitted)");
    speed->add_option("--threads", threads, "worker threads (0 = OpenMP default)");
    speed->add_option("--dump-frames", frames_dir, "write PNG frames of one lane per environment here");
    speed->add_option("--frames", n_frames, "frames per environment for --dump-frames");

    auto* sweep = app.add_subcommand("sweep", "batch-size scaling sweep");
    common(sweep);
    sweep->add_option("--n-envs", max_envs, "largest batch size (powers of two from 1)")->check(CLI::PositiveNumber);
    sweep->add_option("--n-steps", n_steps, "steps per lane")->check(CLI::PositiveNumber);
    sweep->add_option("--csv", csv_path, "CSV output path (stdout when omitted)");
    sweep->add_option("--threads", threads, "worker threads (0 = OpenMP default)");
    sweep->add_option("--dump-frames", frames_dir, "write PNG frames of one lane here");
    sweep->add_option("--frames", n_frames, "frames for --dump-frames");

    auto* fixture = app.add_subcommand("fixture", "write a trajectory fixture");
    common(fixture);
    fixture->add_option("--n-steps", n_steps, "steps to record")->check(CLI::PositiveNumber);
    fixture->add_option("--out,--csv", out_path, "fixture output path")->required();
    fixture->add_option("--actions", actions_text, "comma separated scripted actions");
    fixture->add_option("--dump-frames", frames_dir, "write PNG frames of the run here");

    CLI11_PARSE(app, argc, argv);

    try {
        const navgrid::Key seed = navgrid::parse_seed(seed_hex);
        const navgrid::ExecPolicy exec{threads};
        std::vector<navgrid::BenchReport> reports;
        const auto ids = navgrid::resolve_env_ids(env_ids);

        if (speed->parsed()) {
            navgrid::SpeedOptions opt;
            opt.env_ids = ids;
            opt.n_envs = n_envs;
            opt.n_steps = n_steps;
            opt.repeats = repeats;
            opt.seed = seed;
            opt.overrides = overrides;
            opt.exec = exec;
            reports = navgrid::run_speed_suite(opt, &std::cerr);
        } else if (sweep->parsed()) {
            for (const auto& id : ids) {
                navgrid::SweepOptions opt;
                opt.env_id = id;
                opt.n_envs_list = navgrid::powers_of_two(max_envs);
                opt.n_steps = n_steps;
                opt.seed = seed;
                opt.overrides = overrides;
                opt.exec = exec;
                std::cerr << id << '\n';
                auto rows = navgrid::run_scaling_sweep(opt, &std::cerr);
                reports.insert(reports.end(), rows.begin(), rows.end());
            }
        } else {
            if (ids.size() != 1) throw std::invalid_argument("fixture takes exactly one --env");
            std::optional<std::vector<navgrid::Action>> scripted;
            if (!actions_text.empty()) scripted = parse_actions(actions_text);
            navgrid::dump_fixture(ids[0], seed, n_steps, out_path, overrides, scripted);
            const auto file = navgrid::read_trajectory(out_path);
            const auto& last = file.trajectory.steps.back();
            std::cerr << "wrote " << out_path << ": " << file.trajectory.steps.size() << " steps, last "
                      << navgrid::to_string(last.step_type) << " reward " << last.reward << '\n';
        }

        if (!frames_dir.empty())
            for (const auto& id : ids) navgrid::dump_frames(id, seed, n_frames, std::filesystem::path(frames_dir) / id, overrides);

        if (!fixture->parsed()) {
            if (csv_path.empty())
                navgrid::write_csv(std::cout, reports);
            else
                navgrid::write_csv(csv_path, reports);
        }
    } catch (const std::exception& e) {
        std::cerr << "bench: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
