#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace navgrid {

// Splittable counter-based key. Every derived value is a pure function of
// the 128 key bits, so a rollout never depends on batch layout or threads.
struct Key {
    std::uint64_t hi = 0;
    std::uint64_t lo = 0;

    friend bool operator==(const Key&, const Key&) = default;
};

// Threefry-2x64 with 20 rounds. Exposed for tests and for callers that need
// raw bits.
std::array<std::uint64_t, 2> threefry2x64(std::array<std::uint64_t, 2> counter, const Key& key) noexcept;

Key make_key(std::uint64_t seed) noexcept;

// n >= 1, otherwise std::invalid_argument.
std::vector<Key> split(const Key& key, std::size_t n);

// Child i of split(key, n); does not allocate.
Key split_at(const Key& key, std::size_t i) noexcept;

Key fold_in(const Key& key, std::uint64_t data) noexcept;

// Uniform integer in [lo, hi). lo >= hi throws std::invalid_argument.
std::int64_t random_int(const Key& key, std::int64_t lo, std::int64_t hi);

// Uniform double in [0, 1), 53 bits of precision.
double random_uniform(const Key& key) noexcept;

// 32 lowercase hex characters, hi word first.
std::string to_hex(const Key& key);
// Accepts exactly 32 hex characters (either case); throws std::invalid_argument otherwise.
Key key_from_hex(std::string_view hex);

// Sequential helper for generators: the i-th draw uses fold_in(base, i).
class KeyStream {
public:
    explicit KeyStream(Key base) noexcept : base_(base) {}

    Key next() noexcept { return fold_in(base_, counter_++); }
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) { return random_int(next(), lo, hi); }

private:
    Key base_;
    std::uint64_t counter_ = 0;
};

}  // namespace navgrid
