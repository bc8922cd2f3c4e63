#pragma once

// Serial-loop batch oracle: n independent timesteps driven one by one through
// reset/step with the documented key derivation.

#include <span>
#include <vector>

#include "navgrid/env.hpp"

namespace oracle {

inline std::vector<navgrid::Timestep> serial_reset(const navgrid::Environment& env, const navgrid::Key& key,
                                                   std::size_t n) {
    const auto keys = navgrid::split(key, n);
    std::vector<navgrid::Timestep> lanes;
    for (const auto& k : keys) lanes.push_back(navgrid::reset(env, k));
    return lanes;
}

inline void serial_step(const navgrid::Environment& env, std::vector<navgrid::Timestep>& lanes,
                        std::span<const std::int32_t> actions, const navgrid::Key& key) {
    for (std::size_t i = 0; i < lanes.size(); ++i)
        lanes[i] = navgrid::step(env, lanes[i], static_cast<navgrid::Action>(actions[i]), navgrid::fold_in(key, i));
}

}  // namespace oracle
