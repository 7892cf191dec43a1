#pragma once

#include <vector>

#include "trajlab/geom.hpp"

namespace trajlab {

/// Pose and velocities of the simulated cube at one instant (world frame).
struct RigidBodyState {
    Vec3 position;
    Quat orientation;
    Vec3 linear_velocity;
    Vec3 angular_velocity;
};

struct MaterialParams {
    double mass = 1.0;            // kg
    double restitution = 0.5;     // in [0, 1]
    double friction_coeff = 0.5;  // Coulomb, >= 0
    double half_extent = 0.1;     // cube half-side, m

    void validate() const;

    /// Solid cube inertia is isotropic: I = m (2 a)^2 / 6 about every axis,
    /// so the world-frame inverse inertia is a constant scalar.
    double inertia() const { return mass * (2.0 * half_extent) * (2.0 * half_extent) / 6.0; }
    double inv_inertia() const { return 1.0 / inertia(); }
};

struct SimConfig {
    double gravity = 9.81;       // m/s^2 along -z
    double dt = 1.0 / 240.0;     // physics substep
    double frame_rate = 24.0;    // recorded samples per second
    int max_frames = 240;        // cap on recorded frames per trajectory

    // Rest detection: both speeds below threshold for rest_frames frames.
    double rest_linear_speed = 0.01;   // m/s
    double rest_angular_speed = 0.05;  // rad/s
    int rest_frames = 12;

    // Contact solver.
    double penetration_tolerance = 0.001;        // detection slop, m
    double correction_factor = 0.8;              // positional correction gain
    int solver_iterations = 24;                  // impulse sweeps per solve
    double restitution_speed_threshold = 0.1;    // below this, impacts are inelastic

    void validate() const;
    int substeps_per_frame() const;
};

/// One penetrating cube vertex.
struct ContactPoint {
    Vec3 point;    // world position of the vertex
    double depth;  // max(0, -point.z)
};

/// World-space positions of the eight cube vertices.
void cube_vertices(const RigidBodyState& state, double half_extent, Vec3 out[8]);

/// Every vertex whose world z lies below the penetration tolerance,
/// in vertex-index order. Empty when airborne.
std::vector<ContactPoint> detect_contacts(const RigidBodyState& state,
                                          const MaterialParams& material,
                                          double penetration_tolerance = 0.001);

/// Impulse response for a single contact point: normal impulse with
/// restitution (inelastic below the speed threshold), Coulomb friction
/// clamped at mu * j, then positional correction by depth * correction_factor.
/// Separating contacts are returned untouched.
RigidBodyState resolve_contact(const RigidBodyState& state, const ContactPoint& contact,
                               const MaterialParams& material,
                               const SimConfig& config = SimConfig{});

/// Advance one substep: gravity into velocity, impulse solve on the current
/// contact set, then position/orientation integration that splits the substep
/// at ground crossings so impacts are resolved at the surface.
RigidBodyState step(const RigidBodyState& state, const MaterialParams& material,
                    const SimConfig& config);

/// Per-frame states of one simulated run (frame 0 is the initial state).
/// Terminates at max_frames or once rest detection fires.
struct FrameSeries {
    std::vector<RigidBodyState> frames;
    double frame_rate = 24.0;
};

FrameSeries run_frames(const RigidBodyState& initial, const MaterialParams& material,
                       const SimConfig& config);

/// Kinetic + rotational + potential energy, with z = 0 as the reference plane.
double mechanical_energy(const RigidBodyState& state, const MaterialParams& material,
                         double gravity);

}  // namespace trajlab
