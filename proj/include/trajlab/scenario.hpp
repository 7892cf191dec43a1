#pragma once

#include <cstdint>
#include <string>

#include "trajlab/physics.hpp"
#include "trajlab/trajectory.hpp"

namespace trajlab {

inline constexpr int kLabelHeavy = 0;
inline constexpr int kLabelLight = 1;

struct MaterialRange {
    double restitution_min = 0.0, restitution_max = 1.0;
    double mass_min = 1.0, mass_max = 1.0;
};

/// Sampling ranges for scenario randomization. The two classes share the
/// kinematic ranges and the friction range; only restitution and mass differ.
struct GeneratorConfig {
    MaterialRange heavy{0.05, 0.30, 2.0, 8.0};   // slides, barely bounces
    MaterialRange light{0.60, 0.85, 0.05, 0.30};  // bounces
    double friction_min = 0.3, friction_max = 0.7;
    double half_extent = 0.1;

    double height_min = 0.5, height_max = 3.0;    // initial center z, m
    double horizontal_extent = 1.0;               // x, y ~ U(-1, 1)
    double linear_xy_max = 3.0;                   // vx, vy ~ U(-3, 3)
    double linear_z_max = 1.0;                    // vz ~ U(-1, 1)
    double angular_max = 6.0;                     // omega ~ U(-6, 6)^3

    /// Label-independent materials: both classes draw from the light ranges.
    /// Used as a leakage control; a classifier should score at chance.
    static GeneratorConfig null_signal();
};

/// Randomized initial conditions plus class-dependent material for one run.
struct ScenarioParams {
    Vec3 initial_position;
    Vec3 initial_euler;  // radians, extrinsic x-y-z
    Vec3 initial_linear_velocity;
    Vec3 initial_angular_velocity;
    MaterialParams material;
    int label = kLabelHeavy;
    std::uint64_t seed = 0;

    RigidBodyState initial_state() const;
};

/// Deterministic function of (label, seed). Kinematics come from a
/// label-independent substream so the two classes differ only in material.
ScenarioParams sample_scenario(int label, std::uint64_t seed, const GeneratorConfig& gen);

/// Simulate one scenario and record the center-of-mass position per frame.
Trajectory simulate_trajectory(const ScenarioParams& scenario, const SimConfig& config);

/// FNV-1a hash over every generator and simulation parameter, hex-encoded.
/// Stored in manifests and reports to tie results to their dataset.
std::string config_hash(const GeneratorConfig& gen, const SimConfig& sim);

}  // namespace trajlab
