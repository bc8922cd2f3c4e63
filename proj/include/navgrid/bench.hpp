#pragma once

// Benchmark and fixture harness behind the `bench` CLI.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "navgrid/batch.hpp"

namespace navgrid {

inline constexpr std::string_view kCsvHeader = "env_id,n_envs,n_steps,wall_time_s,steps_per_s,peak_bytes,seed";

struct BenchReport {
    std::string env_id;
    std::size_t n_envs = 0;
    int n_steps = 0;
    double wall_time_s = 0.0;
    double steps_per_s = 0.0;
    std::size_t peak_bytes = 0;  // process peak resident set
    Key seed;

    // Not part of the CSV.
    bool failed = false;
    std::string note;
    std::size_t state_bytes = 0;
    int repeat = 0;
};

// One row without newline; failed rows carry nan timings.
std::string csv_row(const BenchReport& report);
void write_csv(std::ostream& out, const std::vector<BenchReport>& reports);
void write_csv(const std::filesystem::path& path, const std::vector<BenchReport>& reports);

std::size_t peak_resident_bytes();

struct Percentiles {
    double p5 = 0.0;
    double p50 = 0.0;
    double p95 = 0.0;
    double mean = 0.0;
};
// Linear interpolation between order statistics; empty input throws.
Percentiles percentiles(std::vector<double> values);

// "all" expands to the built-in catalog. Unknown ids throw LookupError.
std::vector<std::string> resolve_env_ids(const std::vector<std::string>& ids);

// Accepts 32 hex digits or a shorter hex seed s, taken as make_key(s).
Key parse_seed(std::string_view text);

struct SpeedOptions {
    std::vector<std::string> env_ids;
    std::size_t n_envs = 8;
    int n_steps = 1000;
    int repeats = 5;
    Key seed = make_key(0);
    std::string overrides;
    ExecPolicy exec;
};

// One report per (env, repeat). Every id is resolved before the first run.
// Repeat 0 is the cold run; the summary gives it separately from the warm
// 5-95 percentile band.
std::vector<BenchReport> run_speed_suite(const SpeedOptions& options, std::ostream* summary = nullptr);

struct SweepOptions {
    std::string env_id;
    std::vector<std::size_t> n_envs_list;
    int n_steps = 100;
    Key seed = make_key(0);
    std::string overrides;
    ExecPolicy exec;
};

std::vector<std::size_t> powers_of_two(std::size_t max_lanes);

// One report per batch size. An allocation failure records a failed row; sizes
// at least as large are then skipped with failed rows, smaller ones still run.
std::vector<BenchReport> run_scaling_sweep(const SweepOptions& options, std::ostream* summary = nullptr);

// Unroll with the random policy, or with `scripted` actions when given (then
// n_steps is ignored). Throws std::runtime_error when the path is unwritable.
void dump_fixture(const std::string& env_id, const Key& seed, int n_steps, const std::filesystem::path& path,
                  const std::string& overrides = {}, const std::optional<std::vector<Action>>& scripted = {});

// RGB PNG frames of a single-lane random unroll: frame_0000.png ...
void dump_frames(const std::string& env_id, const Key& seed, int n_frames, const std::filesystem::path& dir,
                 const std::string& overrides = {});

}  // namespace navgrid
