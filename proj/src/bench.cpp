#include "navgrid/bench.hpp"

#include <sys/resource.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <new>
#include <ostream>
#include <sstream>

#include "navgrid/render.hpp"
#include "navgrid/serialize.hpp"

namespace navgrid {

std::string csv_row(const BenchReport& r) {
    std::ostringstream os;
    os << r.env_id << ',' << r.n_envs << ',' << r.n_steps << ',';
    if (r.failed) {
        os << "nan,nan,";
    } else {
        os << std::setprecision(9) << r.wall_time_s << ',' << std::setprecision(9) << r.steps_per_s << ',';
    }
    os << r.peak_bytes << ',' << to_hex(r.seed);
    return os.str();
}

void write_csv(std::ostream& out, const std::vector<BenchReport>& reports) {
    out << kCsvHeader << '\n';
    for (const auto& r : reports) out << csv_row(r) << '\n';
}

void write_csv(const std::filesystem::path& path, const std::vector<BenchReport>& reports) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    write_csv(out, reports);
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

std::size_t peak_resident_bytes() {
    rusage usage{};
    getrusage(RUSAGE_SELF, &usage);
    return static_cast<std::size_t>(usage.ru_maxrss) * 1024;
}

Percentiles percentiles(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("percentiles of an empty sample");
    std::sort(values.begin(), values.end());
    auto at = [&](double q) {
        const double pos = q * static_cast<double>(values.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const auto hi = std::min(lo + 1, values.size() - 1);
        return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
    };
    Percentiles p;
    p.p5 = at(0.05);
    p.p50 = at(0.5);
    p.p95 = at(0.95);
    double sum = 0.0;
    for (double v : values) sum += v;
    p.mean = sum / static_cast<double>(values.size());
    return p;
}

std::vector<std::string> resolve_env_ids(const std::vector<std::string>& ids) {
    std::vector<std::string> out;
    for (const auto& id : ids) {
        if (id == "all") {
            const auto& all = catalog_ids();
            out.insert(out.end(), all.begin(), all.end());
        } else {
            (void)make(id);
            out.push_back(id);
        }
    }
    if (out.empty()) throw std::invalid_argument("no environment ids given");
    return out;
}

Key parse_seed(std::string_view text) {
    if (text.size() == 32) return key_from_hex(text);
    if (text.empty() || text.size() > 16) throw std::invalid_argument("seed must be 1-16 or 32 hex digits");
    std::uint64_t v = 0;
    for (char c : text) {
        int d = -1;
        if (c >= '0' && c <= '9') d = c - '0';
        else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
        if (d < 0) throw std::invalid_argument("seed '" + std::string(text) + "' is not hex");
        v = (v << 4) | static_cast<std::uint64_t>(d);
    }
    return make_key(v);
}

std::vector<BenchReport> run_speed_suite(const SpeedOptions& opt, std::ostream* summary) {
    if (opt.n_envs < 1 || opt.n_steps < 1 || opt.repeats < 1)
        throw std::invalid_argument("n_envs, n_steps and repeats must be positive");
    const auto ids = resolve_env_ids(opt.env_ids);
    std::vector<Environment> envs;
    envs.reserve(ids.size());
    for (const auto& id : ids) envs.push_back(make(id, opt.overrides));

    std::vector<BenchReport> reports;
    const auto policy = random_batch_policy();
    for (const auto& env : envs) {
        std::vector<double> warm;
        double cold = 0.0;
        for (int r = 0; r < opt.repeats; ++r) {
            const auto stats = batch_unroll(env, opt.seed, opt.n_envs, opt.n_steps, policy, opt.exec);
            BenchReport rep;
            rep.env_id = env.id;
            rep.n_envs = opt.n_envs;
            rep.n_steps = opt.n_steps;
            rep.wall_time_s = stats.wall_time_s;
            rep.steps_per_s = stats.steps_per_s;
            rep.peak_bytes = peak_resident_bytes();
            rep.seed = opt.seed;
            rep.state_bytes = stats.state_bytes;
            rep.repeat = r;
            reports.push_back(rep);
            if (r == 0)
                cold = stats.wall_time_s;
            else
                warm.push_back(stats.wall_time_s);
        }
        if (summary) {
            *summary << env.id << ": cold " << std::setprecision(4) << cold << " s";
            if (!warm.empty()) {
                const auto p = percentiles(warm);
                *summary << ", warm mean " << p.mean << " s [p5 " << p.p5 << ", p95 " << p.p95 << "]";
            }
            *summary << '\n';
        }
    }
    return reports;
}

std::vector<std::size_t> powers_of_two(std::size_t max_lanes) {
    if (max_lanes == 0) throw std::invalid_argument("largest batch size must be at least 1");
    std::vector<std::size_t> out;
    for (std::size_t n = 1; n <= max_lanes; n *= 2) out.push_back(n);
    return out;
}

std::vector<BenchReport> run_scaling_sweep(const SweepOptions& opt, std::ostream* summary) {
    if (opt.n_envs_list.empty()) throw std::invalid_argument("sweep needs at least one batch size");
    if (opt.n_steps < 1) throw std::invalid_argument("n_steps must be positive");
    const Environment env = make(opt.env_id, opt.overrides);
    const auto policy = random_batch_policy();
    std::optional<std::size_t> failed_at;
    std::vector<BenchReport> reports;
    for (const auto n : opt.n_envs_list) {
        BenchReport rep;
        rep.env_id = env.id;
        rep.n_envs = n;
        rep.n_steps = opt.n_steps;
        rep.seed = opt.seed;
        if (failed_at && n >= *failed_at) {
            rep.failed = true;
            rep.note = "skipped after allocation failure at " + std::to_string(*failed_at) + " lanes";
        } else {
            try {
                const auto stats = batch_unroll(env, opt.seed, n, opt.n_steps, policy, opt.exec);
                rep.wall_time_s = stats.wall_time_s;
                rep.steps_per_s = stats.steps_per_s;
                rep.state_bytes = stats.state_bytes;
            } catch (const std::bad_alloc&) {
                rep.failed = true;
                rep.note = "out of memory";
                failed_at = failed_at ? std::min(*failed_at, n) : n;
            }
        }
        rep.peak_bytes = peak_resident_bytes();
        if (summary) {
            *summary << std::setw(8) << n << " lanes: ";
            if (rep.failed)
                *summary << "FAILED (" << rep.note << ")\n";
            else
                *summary << std::setprecision(4) << rep.wall_time_s << " s, " << rep.steps_per_s << " steps/s, "
                         << static_cast<double>(rep.state_bytes) / static_cast<double>(n) << " state bytes/lane\n";
        }
        reports.push_back(rep);
    }
    return reports;
}

void dump_fixture(const std::string& env_id, const Key& seed, int n_steps, const std::filesystem::path& path,
                  const std::string& overrides, const std::optional<std::vector<Action>>& scripted) {
    const Environment env = make(env_id, overrides);
    TrajectoryFile file;
    file.env_id = env_id;
    file.overrides = overrides;
    file.seed = seed;
    if (scripted) {
        if (scripted->empty()) throw std::invalid_argument("scripted action list is empty");
        std::size_t s = 0;
        file.trajectory = unroll(
            env, seed, [&](const Timestep&, const Key&) { return (*scripted)[s++]; },
            static_cast<int>(scripted->size()));
    } else {
        file.trajectory = unroll(env, seed, random_policy(), n_steps);
    }
    write_trajectory(path, file);
}

void dump_frames(const std::string& env_id, const Key& seed, int n_frames, const std::filesystem::path& dir,
                 const std::string& overrides) {
    if (n_frames < 1) throw std::invalid_argument("n_frames must be positive");
    const Environment env = make(env_id, overrides);
    std::filesystem::create_directories(dir);
    const auto traj = unroll(env, seed, random_policy(), n_frames - 1 > 0 ? n_frames - 1 : 1);
    auto frame = [&](int i, const Timestep& ts) {
        char name[32];
        std::snprintf(name, sizeof name, "frame_%04d.png", i);
        write_png((dir / name).string(), render_full(ts.state));
    };
    frame(0, traj.initial);
    for (int i = 1; i < n_frames; ++i) frame(i, traj.steps[static_cast<std::size_t>(i - 1)]);
}

}  // namespace navgrid
