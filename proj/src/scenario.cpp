#include "trajlab/scenario.hpp"

#include <cstdio>
#include <numbers>

#include "trajlab/errors.hpp"
#include "trajlab/rng.hpp"

namespace trajlab {

namespace {

// Stream tags for substream derivation.
constexpr std::uint64_t kKinematicsStream = 0x6b696e656d617400ULL;
constexpr std::uint64_t kMaterialStream = 0x6d6174657269616cULL;

void hash_bytes(std::uint64_t& h, const void* data, std::size_t n) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;  // FNV-1a prime
    }
}

void hash_double(std::uint64_t& h, double v) { hash_bytes(h, &v, sizeof v); }
void hash_int(std::uint64_t& h, int v) { hash_bytes(h, &v, sizeof v); }

}  // namespace

GeneratorConfig GeneratorConfig::null_signal() {
    GeneratorConfig gen;
    gen.heavy = gen.light;
    return gen;
}

RigidBodyState ScenarioParams::initial_state() const {
    RigidBodyState s;
    s.position = initial_position;
    s.orientation = Quat::from_euler_xyz(initial_euler.x, initial_euler.y, initial_euler.z);
    s.linear_velocity = initial_linear_velocity;
    s.angular_velocity = initial_angular_velocity;
    return s;
}

ScenarioParams sample_scenario(int label, std::uint64_t seed, const GeneratorConfig& gen) {
    if (label != kLabelHeavy && label != kLabelLight)
        throw DataError("sample_scenario: label must be 0 (heavy) or 1 (light)");

    ScenarioParams sc;
    sc.label = label;
    sc.seed = seed;

    // Kinematics are label-independent: equal seeds give both classes the
    // same initial pose and velocities, so only material separates them.
    Rng kin(mix_seed(seed, kKinematicsStream));
    constexpr double two_pi = 2.0 * std::numbers::pi;
    sc.initial_position.x = kin.uniform(-gen.horizontal_extent, gen.horizontal_extent);
    sc.initial_position.y = kin.uniform(-gen.horizontal_extent, gen.horizontal_extent);
    sc.initial_position.z = kin.uniform(gen.height_min, gen.height_max);
    sc.initial_euler = {kin.uniform(0.0, two_pi), kin.uniform(0.0, two_pi),
                        kin.uniform(0.0, two_pi)};
    sc.initial_linear_velocity.x = kin.uniform(-gen.linear_xy_max, gen.linear_xy_max);
    sc.initial_linear_velocity.y = kin.uniform(-gen.linear_xy_max, gen.linear_xy_max);
    sc.initial_linear_velocity.z = kin.uniform(-gen.linear_z_max, gen.linear_z_max);
    sc.initial_angular_velocity = {kin.uniform(-gen.angular_max, gen.angular_max),
                                   kin.uniform(-gen.angular_max, gen.angular_max),
                                   kin.uniform(-gen.angular_max, gen.angular_max)};

    Rng mat(mix_seed(mix_seed(seed, kMaterialStream), static_cast<std::uint64_t>(label) + 1));
    const MaterialRange& range = (label == kLabelLight) ? gen.light : gen.heavy;
    sc.material.restitution = mat.uniform(range.restitution_min, range.restitution_max);
    sc.material.mass = mat.uniform(range.mass_min, range.mass_max);
    sc.material.friction_coeff = mat.uniform(gen.friction_min, gen.friction_max);
    sc.material.half_extent = gen.half_extent;
    sc.material.validate();
    return sc;
}

Trajectory simulate_trajectory(const ScenarioParams& scenario, const SimConfig& config) {
    FrameSeries series = run_frames(scenario.initial_state(), scenario.material, config);
    Trajectory traj;
    traj.frame_rate = series.frame_rate;
    traj.label = scenario.label;
    traj.scenario_seed = scenario.seed;
    traj.samples.reserve(series.frames.size());
    for (const auto& f : series.frames) traj.samples.push_back(f.position);
    traj.validate();
    return traj;
}

std::string config_hash(const GeneratorConfig& gen, const SimConfig& sim) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a offset basis
    for (const MaterialRange* r : {&gen.heavy, &gen.light}) {
        hash_double(h, r->restitution_min);
        hash_double(h, r->restitution_max);
        hash_double(h, r->mass_min);
        hash_double(h, r->mass_max);
    }
    hash_double(h, gen.friction_min);
    hash_double(h, gen.friction_max);
    hash_double(h, gen.half_extent);
    hash_double(h, gen.height_min);
    hash_double(h, gen.height_max);
    hash_double(h, gen.horizontal_extent);
    hash_double(h, gen.linear_xy_max);
    hash_double(h, gen.linear_z_max);
    hash_double(h, gen.angular_max);

    hash_double(h, sim.gravity);
    hash_double(h, sim.dt);
    hash_double(h, sim.frame_rate);
    hash_int(h, sim.max_frames);
    hash_double(h, sim.rest_linear_speed);
    hash_double(h, sim.rest_angular_speed);
    hash_int(h, sim.rest_frames);
    hash_double(h, sim.penetration_tolerance);
    hash_double(h, sim.correction_factor);
    hash_int(h, sim.solver_iterations);
    hash_double(h, sim.restitution_speed_threshold);

    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace trajlab
