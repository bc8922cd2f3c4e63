#pragma once

// Versioned little-endian binary formats for State, Timestep and trajectory
// fixtures. Output is byte-stable across runs and platforms.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "navgrid/env.hpp"

namespace navgrid {

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::uint32_t kStateFormatVersion = 1;
inline constexpr std::uint32_t kTrajectoryFormatVersion = 1;

std::vector<std::uint8_t> serialize_state(const State& state);
State deserialize_state(const std::vector<std::uint8_t>& bytes);

std::vector<std::uint8_t> serialize_timestep(const Timestep& ts);
Timestep deserialize_timestep(const std::vector<std::uint8_t>& bytes);

// A recorded unroll plus what is needed to replay it.
struct TrajectoryFile {
    std::string env_id;
    std::string overrides;  // override grammar text, may be empty
    Key seed;
    Trajectory trajectory;
};

std::vector<std::uint8_t> serialize_trajectory(const TrajectoryFile& file);
TrajectoryFile deserialize_trajectory(const std::vector<std::uint8_t>& bytes);

// Throws std::runtime_error when the path cannot be opened.
void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path);

void write_trajectory(const std::filesystem::path& path, const TrajectoryFile& file);
TrajectoryFile read_trajectory(const std::filesystem::path& path);

// Re-runs the recorded actions through make(env_id, overrides) with the unroll
// key schedule. Returns the replayed trajectory.
Trajectory replay(const TrajectoryFile& file);

}  // namespace navgrid
