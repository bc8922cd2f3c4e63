#include "navgrid/serialize.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace navgrid {

namespace {

constexpr char kStateMagic[4] = {'N', 'G', 'S', 'T'};
constexpr char kStepMagic[4] = {'N', 'G', 'T', 'S'};
constexpr char kTrajMagic[4] = {'N', 'G', 'T', 'J'};

class Writer {
public:
    void magic(const char (&m)[4]) { out_.insert(out_.end(), m, m + 4); }
    void u8(std::uint8_t v) { out_.push_back(v); }
    void u16(std::uint16_t v) { le(v, 2); }
    void u32(std::uint32_t v) { le(v, 4); }
    void u64(std::uint64_t v) { le(v, 8); }
    void i16(std::int16_t v) { u16(static_cast<std::uint16_t>(v)); }
    void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
    void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void str(const std::string& s) {
        u32(static_cast<std::uint32_t>(s.size()));
        out_.insert(out_.end(), s.begin(), s.end());
    }
    void key(const Key& k) {
        u64(k.hi);
        u64(k.lo);
    }
    template <class T, class F>
    void column(const std::vector<T>& v, F&& put) {
        u32(static_cast<std::uint32_t>(v.size()));
        for (const auto& x : v) put(x);
    }

    std::vector<std::uint8_t> take() { return std::move(out_); }

private:
    void le(std::uint64_t v, int bytes) {
        for (int i = 0; i < bytes; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    std::vector<std::uint8_t> out_;
};

class Reader {
public:
    explicit Reader(const std::vector<std::uint8_t>& in) : in_(in) {}

    void magic(const char (&m)[4], const char* what) {
        need(4);
        if (std::memcmp(in_.data() + pos_, m, 4) != 0) throw FormatError(std::string("bad magic for ") + what);
        pos_ += 4;
    }
    std::uint8_t u8() {
        need(1);
        return in_[pos_++];
    }
    std::uint16_t u16() { return static_cast<std::uint16_t>(le(2)); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
    std::uint64_t u64() { return le(8); }
    std::int16_t i16() { return static_cast<std::int16_t>(u16()); }
    std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
    float f32() { return std::bit_cast<float>(u32()); }
    double f64() { return std::bit_cast<double>(u64()); }
    std::string str() {
        const auto n = u32();
        need(n);
        std::string s(reinterpret_cast<const char*>(in_.data() + pos_), n);
        pos_ += n;
        return s;
    }
    Key key() {
        Key k;
        k.hi = u64();
        k.lo = u64();
        return k;
    }
    template <class T, class F>
    void column(std::vector<T>& v, F&& get) {
        const auto n = u32();
        if (n > in_.size()) throw FormatError("column length exceeds input size");
        v.resize(n);
        for (auto& x : v) x = get();
    }
    void finish() const {
        if (pos_ != in_.size()) throw FormatError("trailing bytes after record");
    }

private:
    void need(std::size_t n) const {
        if (in_.size() - pos_ < n) throw FormatError("unexpected end of input");
    }
    std::uint64_t le(int bytes) {
        need(static_cast<std::size_t>(bytes));
        std::uint64_t v = 0;
        for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(in_[pos_++]) << (8 * i);
        return v;
    }
    const std::vector<std::uint8_t>& in_;
    std::size_t pos_ = 0;
};

void put_events(Writer& w, const EventLog& e) {
    w.u8(e.goal_reached);
    w.i16(static_cast<std::int16_t>(e.goal_position.row));
    w.i16(static_cast<std::int16_t>(e.goal_position.col));
    w.u8(e.lava_fallen);
    w.u8(e.ball_hit);
    w.u8(e.door_done);
    w.u8(static_cast<std::uint8_t>(e.door_colour));
    w.u8(e.picked_up);
    w.i32(e.picked_id);
}

EventLog get_events(Reader& r) {
    EventLog e;
    e.goal_reached = r.u8() != 0;
    e.goal_position.row = r.i16();
    e.goal_position.col = r.i16();
    e.lava_fallen = r.u8() != 0;
    e.ball_hit = r.u8() != 0;
    e.door_done = r.u8() != 0;
    e.door_colour = static_cast<std::int8_t>(r.u8());
    e.picked_up = r.u8() != 0;
    e.picked_id = r.i32();
    return e;
}

void put_state(Writer& w, const State& s) {
    w.magic(kStateMagic);
    w.u32(kStateFormatVersion);
    w.i32(s.grid->h);
    w.i32(s.grid->w);
    w.column(s.grid->base, [&](std::uint8_t v) { w.u8(v); });
    for (const auto& p : s.pools) {
        w.u8(static_cast<std::uint8_t>(p.tag));
        w.i32(p.capacity);
        w.column(p.active, [&](std::uint8_t v) { w.u8(v); });
        w.column(p.row, [&](std::int16_t v) { w.i16(v); });
        w.column(p.col, [&](std::int16_t v) { w.i16(v); });
        w.column(p.colour, [&](std::uint8_t v) { w.u8(v); });
        w.column(p.direction, [&](std::uint8_t v) { w.u8(v); });
        w.column(p.door_state, [&](std::uint8_t v) { w.u8(v); });
        w.column(p.probability, [&](float v) { w.f32(v); });
        w.column(p.pocket, [&](std::int32_t v) { w.i32(v); });
    }
    w.u8(static_cast<std::uint8_t>(s.mission));
    put_events(w, s.events);
    w.key(s.key);
    w.i32(s.t);
}

State get_state(Reader& r) {
    r.magic(kStateMagic, "state");
    if (const auto v = r.u32(); v != kStateFormatVersion)
        throw FormatError("unsupported state format version " + std::to_string(v));
    const int h = r.i32();
    const int w = r.i32();
    auto layout = std::make_shared<GridLayout>();
    layout->h = h;
    layout->w = w;
    r.column(layout->base, [&] { return r.u8(); });
    if (h < 3 || w < 3 || layout->base.size() != static_cast<std::size_t>(h) * static_cast<std::size_t>(w))
        throw FormatError("inconsistent grid layout");
    State s;
    s.grid = std::move(layout);
    for (int i = 0; i < kPoolCount; ++i) {
        auto& p = s.pools[i];
        p.tag = static_cast<Tag>(r.u8());
        if (p.tag != kPoolTags[i]) throw FormatError("pool order mismatch");
        p.capacity = r.i32();
        r.column(p.active, [&] { return r.u8(); });
        r.column(p.row, [&] { return r.i16(); });
        r.column(p.col, [&] { return r.i16(); });
        r.column(p.colour, [&] { return r.u8(); });
        r.column(p.direction, [&] { return r.u8(); });
        r.column(p.door_state, [&] { return r.u8(); });
        r.column(p.probability, [&] { return r.f32(); });
        r.column(p.pocket, [&] { return r.i32(); });
        if (p.capacity < 0 || p.active.size() != static_cast<std::size_t>(p.capacity))
            throw FormatError("pool column length mismatch");
    }
    s.mission = static_cast<std::int8_t>(r.u8());
    s.events = get_events(r);
    s.key = r.key();
    s.t = r.i32();
    return s;
}

void put_timestep(Writer& w, const Timestep& ts) {
    w.magic(kStepMagic);
    w.i32(ts.t);
    w.i32(ts.action);
    w.f64(ts.reward);
    w.u8(static_cast<std::uint8_t>(ts.step_type));
    w.f64(ts.discount);
    w.f64(ts.info.episode_return);
    w.i32(ts.info.episode_length);
    w.column(ts.observation.shape, [&](int v) { w.i32(v); });
    w.u8(static_cast<std::uint8_t>(ts.observation.dtype));
    w.column(ts.observation.i32, [&](std::int32_t v) { w.i32(v); });
    w.column(ts.observation.u8, [&](std::uint8_t v) { w.u8(v); });
    put_state(w, ts.state);
}

Timestep get_timestep(Reader& r) {
    r.magic(kStepMagic, "timestep");
    Timestep ts;
    ts.t = r.i32();
    ts.action = r.i32();
    ts.reward = r.f64();
    const auto type = r.u8();
    if (type > 3) throw FormatError("invalid step type");
    ts.step_type = static_cast<StepType>(type);
    ts.discount = r.f64();
    ts.info.episode_return = r.f64();
    ts.info.episode_length = r.i32();
    r.column(ts.observation.shape, [&] { return r.i32(); });
    const auto dtype = r.u8();
    if (dtype > 1) throw FormatError("invalid dtype");
    ts.observation.dtype = static_cast<DType>(dtype);
    r.column(ts.observation.i32, [&] { return r.i32(); });
    r.column(ts.observation.u8, [&] { return r.u8(); });
    ts.state = get_state(r);
    return ts;
}

}  // namespace

std::vector<std::uint8_t> serialize_state(const State& state) {
    Writer w;
    put_state(w, state);
    return w.take();
}

State deserialize_state(const std::vector<std::uint8_t>& bytes) {
    Reader r(bytes);
    State s = get_state(r);
    r.finish();
    return s;
}

std::vector<std::uint8_t> serialize_timestep(const Timestep& ts) {
    Writer w;
    put_timestep(w, ts);
    return w.take();
}

Timestep deserialize_timestep(const std::vector<std::uint8_t>& bytes) {
    Reader r(bytes);
    Timestep ts = get_timestep(r);
    r.finish();
    return ts;
}

std::vector<std::uint8_t> serialize_trajectory(const TrajectoryFile& file) {
    const auto& traj = file.trajectory;
    if (traj.actions.size() != traj.steps.size()) throw std::invalid_argument("trajectory actions/steps mismatch");
    Writer w;
    w.magic(kTrajMagic);
    w.u32(kTrajectoryFormatVersion);
    w.str(file.env_id);
    w.str(file.overrides);
    w.key(file.seed);
    w.u32(static_cast<std::uint32_t>(traj.steps.size()));
    for (auto a : traj.actions) w.i32(static_cast<std::int32_t>(a));
    put_timestep(w, traj.initial);
    for (const auto& ts : traj.steps) put_timestep(w, ts);
    return w.take();
}

TrajectoryFile deserialize_trajectory(const std::vector<std::uint8_t>& bytes) {
    Reader r(bytes);
    r.magic(kTrajMagic, "trajectory");
    if (const auto v = r.u32(); v != kTrajectoryFormatVersion)
        throw FormatError("unsupported trajectory format version " + std::to_string(v));
    TrajectoryFile file;
    file.env_id = r.str();
    file.overrides = r.str();
    file.seed = r.key();
    const auto n = r.u32();
    if (n > bytes.size()) throw FormatError("step count exceeds input size");
    file.trajectory.actions.resize(n);
    for (auto& a : file.trajectory.actions) {
        const auto v = r.i32();
        if (v < 0 || v >= kActionCount) throw FormatError("invalid action in trajectory");
        a = static_cast<Action>(v);
    }
    file.trajectory.initial = get_timestep(r);
    file.trajectory.steps.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) file.trajectory.steps.push_back(get_timestep(r));
    r.finish();
    return file;
}

void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_trajectory(const std::filesystem::path& path, const TrajectoryFile& file) {
    write_bytes(path, serialize_trajectory(file));
}

TrajectoryFile read_trajectory(const std::filesystem::path& path) { return deserialize_trajectory(read_bytes(path)); }

Trajectory replay(const TrajectoryFile& file) {
    const Environment env = make(file.env_id, file.overrides);
    const auto& actions = file.trajectory.actions;
    if (actions.empty()) throw std::invalid_argument("trajectory has no steps to replay");
    std::size_t s = 0;
    return unroll(
        env, file.seed, [&](const Timestep&, const Key&) { return actions[s++]; },
        static_cast<int>(actions.size()));
}

}  // namespace navgrid
