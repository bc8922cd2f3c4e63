#include "navgrid/rng.hpp"

#include <stdexcept>

namespace navgrid {

namespace {

constexpr std::uint64_t kParity = 0x1BD11BDAA9FC1A22ULL;
constexpr int kRotations[8] = {16, 42, 12, 31, 16, 32, 24, 21};

// Domain separation tags live in the second counter word.
constexpr std::uint64_t kSplitTag = 0x73706c6974000000ULL;
constexpr std::uint64_t kFoldTag = 0x666f6c6400000000ULL;
constexpr std::uint64_t kIntTag = 0x696e740000000000ULL;
constexpr std::uint64_t kUniformTag = 0x756e690000000000ULL;

constexpr std::uint64_t rotl(std::uint64_t x, int r) noexcept { return (x << r) | (x >> (64 - r)); }

int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

std::array<std::uint64_t, 2> threefry2x64(std::array<std::uint64_t, 2> counter, const Key& key) noexcept {
    const std::uint64_t ks[3] = {key.hi, key.lo, kParity ^ key.hi ^ key.lo};
    std::uint64_t x0 = counter[0] + ks[0];
    std::uint64_t x1 = counter[1] + ks[1];
    for (int r = 0; r < 20; ++r) {
        x0 += x1;
        x1 = rotl(x1, kRotations[r % 8]);
        x1 ^= x0;
        if (r % 4 == 3) {
            const std::uint64_t s = static_cast<std::uint64_t>(r + 1) / 4;
            x0 += ks[s % 3];
            x1 += ks[(s + 1) % 3] + s;
        }
    }
    return {x0, x1};
}

Key make_key(std::uint64_t seed) noexcept { return Key{0, seed}; }

Key split_at(const Key& key, std::size_t i) noexcept {
    const auto bits = threefry2x64({static_cast<std::uint64_t>(i), kSplitTag}, key);
    return Key{bits[0], bits[1]};
}

std::vector<Key> split(const Key& key, std::size_t n) {
    if (n == 0) throw std::invalid_argument("split: n must be >= 1");
    std::vector<Key> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(split_at(key, i));
    return out;
}

Key fold_in(const Key& key, std::uint64_t data) noexcept {
    const auto bits = threefry2x64({data, kFoldTag}, key);
    return Key{bits[0], bits[1]};
}

std::int64_t random_int(const Key& key, std::int64_t lo, std::int64_t hi) {
    if (lo >= hi) throw std::invalid_argument("random_int: lo must be < hi");
    const std::uint64_t range = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
    // Lemire's multiply-shift with rejection; redraws walk the counter.
    std::uint64_t draw = 0;
    auto next = [&] { return threefry2x64({draw++, kIntTag}, key)[0]; };
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * range;
    auto low = static_cast<std::uint64_t>(m);
    if (low < range) {
        const std::uint64_t threshold = (0 - range) % range;
        while (low < threshold) {
            m = static_cast<unsigned __int128>(next()) * range;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return lo + static_cast<std::int64_t>(static_cast<std::uint64_t>(m >> 64));
}

double random_uniform(const Key& key) noexcept {
    const std::uint64_t bits = threefry2x64({0, kUniformTag}, key)[0];
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

std::string to_hex(const Key& key) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out(32, '0');
    for (int i = 0; i < 16; ++i) {
        out[15 - i] = kDigits[(key.hi >> (4 * i)) & 0xF];
        out[31 - i] = kDigits[(key.lo >> (4 * i)) & 0xF];
    }
    return out;
}

Key key_from_hex(std::string_view hex) {
    if (hex.size() != 32) throw std::invalid_argument("key hex must be 32 characters, got " + std::to_string(hex.size()));
    Key key;
    for (std::size_t i = 0; i < 32; ++i) {
        const int d = hex_digit(hex[i]);
        if (d < 0) throw std::invalid_argument("invalid hex character in key: '" + std::string(1, hex[i]) + "'");
        std::uint64_t& word = i < 16 ? key.hi : key.lo;
        word = (word << 4) | static_cast<std::uint64_t>(d);
    }
    return key;
}

}  // namespace navgrid
