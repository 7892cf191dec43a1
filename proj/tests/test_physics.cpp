#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "trajlab/errors.hpp"
#include "trajlab/physics.hpp"
#include "trajlab/scenario.hpp"

using namespace trajlab;

namespace {

RigidBodyState make_resting_state(double half_extent) {
    RigidBodyState s;
    s.position = {0.0, 0.0, half_extent};
    return s;
}

/// Flat central drop: axis-aligned cube, center `height` above the resting pose.
RigidBodyState make_drop_state(double half_extent, double height) {
    RigidBodyState s;
    s.position = {0.0, 0.0, half_extent + height};
    return s;
}

MaterialParams make_material(double restitution, double mass = 1.0, double friction = 0.5) {
    MaterialParams m;
    m.mass = mass;
    m.restitution = restitution;
    m.friction_coeff = friction;
    m.half_extent = 0.1;
    return m;
}

/// Step until the first impact (vertical velocity sign flip), then keep
/// stepping and record the rebound apex. Returns {impact_time, apex_height}
/// with apex measured above the resting center height.
std::pair<double, double> drop_impact_and_apex(const RigidBodyState& initial,
                                               const MaterialParams& material,
                                               const SimConfig& config) {
    RigidBodyState s = initial;
    double t = 0.0;
    double prev_vz = 0.0;
    int max_steps = static_cast<int>(10.0 / config.dt);
    int k = 0;
    for (; k < max_steps; ++k) {
        RigidBodyState next = step(s, material, config);
        t += config.dt;
        if (prev_vz < -0.1 && next.linear_velocity.z >= 0.0) {
            s = next;
            break;
        }
        prev_vz = next.linear_velocity.z;
        s = next;
    }
    double apex = s.position.z;
    for (int j = 0; j < max_steps; ++j) {
        s = step(s, material, config);
        if (s.position.z > apex) apex = s.position.z;
        if (s.linear_velocity.z < -0.05 && s.position.z < apex - 0.01) break;
    }
    return {t, apex - material.half_extent};
}

bool states_bit_identical(const RigidBodyState& a, const RigidBodyState& b) {
    return std::memcmp(&a, &b, sizeof(RigidBodyState)) == 0;
}

}  // namespace

TEST_CASE("step: resting cube stays put (contact cancels the gravity kick)") {
    MaterialParams material = make_material(0.5);
    SimConfig config;
    RigidBodyState s0 = make_resting_state(material.half_extent);

    RigidBodyState s = s0;
    for (int i = 0; i < 100; ++i) {
        RigidBodyState next = step(s, material, config);
        CHECK(std::abs(next.position.x - s.position.x) < 1e-9);
        CHECK(std::abs(next.position.y - s.position.y) < 1e-9);
        CHECK(std::abs(next.position.z - s.position.z) < 1e-9);
        s = next;
    }
    CHECK(std::abs(s.position.z - s0.position.z) < 1e-9);
    CHECK(s.linear_velocity.norm() < 1e-6);
    CHECK(s.angular_velocity.norm() < 1e-6);
    CHECK(std::abs(s.orientation.w - 1.0) < 1e-12);
}

TEST_CASE("step: one-step free-fall arithmetic") {
    MaterialParams material = make_material(0.5);
    SimConfig config;
    RigidBodyState s;
    s.position = {0.0, 0.0, 10.0};

    RigidBodyState next = step(s, material, config);
    // Gravity lands in the velocity first; the position update follows the
    // exact ballistic arc: z + v dt + g dt^2 / 2 with v the new velocity.
    CHECK(next.linear_velocity.z == doctest::Approx(-0.0408750).epsilon(1e-9));
    CHECK(next.position.z == doctest::Approx(10.0 - 0.5 * 9.81 / (240.0 * 240.0)).epsilon(1e-12));
    CHECK(next.position.z == doctest::Approx(9.9999148438).epsilon(1e-9));
}

TEST_CASE("step: no torque without contact, orientation constant in free fall") {
    MaterialParams material = make_material(0.5);
    SimConfig config;
    RigidBodyState s;
    s.position = {0.0, 0.0, 50.0};
    s.orientation = Quat::from_euler_xyz(0.3, -1.1, 2.0);
    Quat q0 = s.orientation;

    for (int i = 0; i < 200; ++i) s = step(s, material, config);
    CHECK(s.orientation.w == q0.w);
    CHECK(s.orientation.x == q0.x);
    CHECK(s.orientation.y == q0.y);
    CHECK(s.orientation.z == q0.z);
    CHECK(s.angular_velocity.norm() == 0.0);
}

TEST_CASE("step: non-finite input is rejected with the offending field named") {
    MaterialParams material = make_material(0.5);
    SimConfig config;
    RigidBodyState s = make_resting_state(material.half_extent);
    s.linear_velocity.y = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_WITH_AS(step(s, material, config),
                         "non-finite state component: linear_velocity.y", SimulationError);
}

TEST_CASE("detect_contacts: resting pose has the four bottom vertices") {
    MaterialParams material = make_material(0.5);
    RigidBodyState s = make_resting_state(material.half_extent);
    auto contacts = detect_contacts(s, material);
    REQUIRE(contacts.size() == 4);
    for (const auto& c : contacts) {
        CHECK(c.depth == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(std::abs(c.point.z) < 1e-12);
    }
}

TEST_CASE("detect_contacts: airborne cube has none") {
    MaterialParams material = make_material(0.5);
    RigidBodyState s;
    s.position = {0.0, 0.0, 10.0 * material.half_extent};
    CHECK(detect_contacts(s, material).empty());
}

TEST_CASE("detect_contacts: 45-degree tilt reports the degenerate lowest-edge pair") {
    MaterialParams material = make_material(0.5);
    const double a = material.half_extent;
    RigidBodyState s;
    s.orientation = Quat::from_euler_xyz(M_PI / 4.0, 0.0, 0.0);
    s.position = {0.0, 0.0, a * std::sqrt(2.0) - 0.0005};

    auto contacts = detect_contacts(s, material);
    REQUIRE(contacts.size() == 2);
    for (const auto& c : contacts) {
        CHECK(c.depth == doctest::Approx(0.0005).epsilon(1e-9));
        CHECK(std::abs(std::abs(c.point.x) - a) < 1e-12);  // the edge runs along x
    }
}

TEST_CASE("resolve_contact: central impact scalar impulse") {
    // r x n = 0: contact directly below the center of mass.
    MaterialParams material = make_material(0.5, 1.0);
    RigidBodyState s = make_resting_state(material.half_extent);
    s.linear_velocity = {0.0, 0.0, -4.0};
    ContactPoint contact{{0.0, 0.0, 0.0}, 0.0};

    // j = -(1+e) v_n / (1/m) = 1.5 * 4 = 6 N s -> outgoing v_n = +2.
    RigidBodyState out = resolve_contact(s, contact, material);
    CHECK(out.linear_velocity.z == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(out.angular_velocity.norm() < 1e-12);

    MaterialParams inelastic = make_material(0.0, 1.0);
    out = resolve_contact(s, contact, inelastic);
    CHECK(out.linear_velocity.z == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("resolve_contact: separating contact is left untouched") {
    MaterialParams material = make_material(0.8);
    RigidBodyState s = make_resting_state(material.half_extent);
    s.linear_velocity = {0.0, 0.0, 1.5};
    ContactPoint contact{{0.0, 0.0, 0.0}, 0.0};
    RigidBodyState out = resolve_contact(s, contact, material);
    CHECK(states_bit_identical(out, s));
}

TEST_CASE("resolve_contact: friction caps at the impulse that stops sliding") {
    const double a = 0.1;
    RigidBodyState s = make_resting_state(a);
    s.linear_velocity = {1.0, 0.0, -0.5};
    ContactPoint contact{{0.0, 0.0, 0.0}, 0.0};

    for (double mu : {0.05, 0.2, 0.5, 1.0, 5.0, 50.0}) {
        MaterialParams material = make_material(0.0, 1.0, mu);
        RigidBodyState out = resolve_contact(s, contact, material);

        // Brute-force recomputation of the tangential contact velocity.
        Vec3 r = contact.point - out.position;
        Vec3 u = out.linear_velocity + out.angular_velocity.cross(r);
        Vec3 u0 = s.linear_velocity;  // initial tangential velocity, +x

        CHECK(u.x >= -1e-12);               // never reversed
        CHECK(u.x <= u0.x + 1e-12);         // never increased
        CHECK(std::abs(u.y) < 1e-12);
        if (mu >= 5.0) CHECK(std::abs(u.x) < 1e-12);  // fully stopped
    }
}

TEST_CASE("simulate: 1 m central drop with e = 0.5 matches the ballistic oracle") {
    MaterialParams material = make_material(0.5);
    SimConfig config;
    RigidBodyState initial = make_drop_state(material.half_extent, 1.0);

    auto [impact_time, apex] = drop_impact_and_apex(initial, material, config);
    const double expected_time = std::sqrt(2.0 * 1.0 / 9.81);  // 0.4515 s
    const double expected_apex = 0.25;                         // e^2 * h
    CHECK(std::abs(impact_time - expected_time) / expected_time < 0.02);
    CHECK(std::abs(apex - expected_apex) / expected_apex < 0.02);
}

TEST_CASE("simulate: inelastic flat drop settles at the rest height") {
    MaterialParams material = make_material(0.0);
    SimConfig config;
    RigidBodyState initial = make_drop_state(material.half_extent, 0.8);

    FrameSeries series = run_frames(initial, material, config);
    // Find the first frame at/below the rest height, then bound the wobble.
    std::size_t first_contact = 0;
    for (std::size_t i = 0; i < series.frames.size(); ++i) {
        if (series.frames[i].position.z <= material.half_extent + 1e-6) {
            first_contact = i;
            break;
        }
    }
    REQUIRE(first_contact > 0);
    for (std::size_t i = first_contact; i < series.frames.size(); ++i)
        CHECK(std::abs(series.frames[i].position.z - material.half_extent) <= 1e-3);
}

TEST_CASE("energy: per-frame mechanical energy is non-increasing") {
    SimConfig config;

    SUBCASE("randomized scenarios from both classes") {
        GeneratorConfig gen;
        for (int i = 0; i < 60; ++i) {
            ScenarioParams sc = sample_scenario(i % 2, 1000 + i, gen);
            FrameSeries series = run_frames(sc.initial_state(), sc.material, config);
            for (std::size_t k = 1; k < series.frames.size(); ++k) {
                double e0 = mechanical_energy(series.frames[k - 1], sc.material, config.gravity);
                double e1 = mechanical_energy(series.frames[k], sc.material, config.gravity);
                REQUIRE(e1 <= e0 + 1e-6);
            }
        }
    }

    SUBCASE("full restitution range incl. e = 1, flat and tumbling") {
        for (double e : {0.0, 0.25, 0.5, 0.75, 0.9, 1.0}) {
            for (bool tumbling : {false, true}) {
                MaterialParams material = make_material(e, 2.0);
                RigidBodyState initial = make_drop_state(material.half_extent, 1.2);
                if (tumbling) {
                    initial.orientation = Quat::from_euler_xyz(0.4, 0.9, 0.0);
                    initial.angular_velocity = {3.0, -2.0, 1.0};
                    initial.linear_velocity = {0.7, -0.4, 0.0};
                }
                FrameSeries series = run_frames(initial, material, config);
                for (std::size_t k = 1; k < series.frames.size(); ++k) {
                    double e0 = mechanical_energy(series.frames[k - 1], material, config.gravity);
                    double e1 = mechanical_energy(series.frames[k], material, config.gravity);
                    REQUIRE(e1 <= e0 + 1e-6);
                }
            }
        }
    }
}

TEST_CASE("restitution ordering: first-rebound apex is monotone in e") {
    SimConfig config;
    double prev_apex = -1.0;
    for (double e : {0.0, 0.25, 0.5, 0.75, 0.9}) {
        MaterialParams material = make_material(e);
        RigidBodyState initial = make_drop_state(material.half_extent, 1.0);
        auto [time, apex] = drop_impact_and_apex(initial, material, config);
        (void)time;
        CHECK(apex >= prev_apex - 1e-9);
        prev_apex = apex;
    }
}

TEST_CASE("ballistic segments: constant horizontal velocity, vertical accel -g") {
    SimConfig config;
    GeneratorConfig gen;
    ScenarioParams sc = sample_scenario(kLabelLight, 42, gen);
    MaterialParams material = sc.material;

    RigidBodyState s = sc.initial_state();
    int checked = 0;
    for (int k = 0; k < 2000; ++k) {
        RigidBodyState next = step(s, material, config);
        // Both endpoints well clear of the ground: no contact in between.
        auto clear = [&](const RigidBodyState& st) {
            Vec3 verts[8];
            cube_vertices(st, material.half_extent, verts);
            double low = verts[0].z;
            for (int i = 1; i < 8; ++i) low = std::min(low, verts[i].z);
            return low > 0.05;
        };
        if (clear(s) && clear(next)) {
            CHECK(std::abs(next.linear_velocity.x - s.linear_velocity.x) < 1e-9);
            CHECK(std::abs(next.linear_velocity.y - s.linear_velocity.y) < 1e-9);
            double accel = (next.linear_velocity.z - s.linear_velocity.z) / config.dt;
            CHECK(std::abs(accel + config.gravity) < 1e-6);
            ++checked;
        }
        s = next;
    }
    CHECK(checked > 50);
}

TEST_CASE("contacts never pull the body down") {
    MaterialParams material = make_material(0.6);
    SimConfig config;

    // Resting body: vertical velocity never goes meaningfully negative.
    RigidBodyState s = make_resting_state(material.half_extent);
    for (int i = 0; i < 200; ++i) {
        s = step(s, material, config);
        CHECK(s.linear_velocity.z > -1e-9);
    }

    // Body leaving the ground: the separating contact adds no impulse.
    RigidBodyState up = make_resting_state(material.half_extent);
    up.linear_velocity = {0.0, 0.0, 2.0};
    RigidBodyState next = step(up, material, config);
    CHECK(next.linear_velocity.z ==
          doctest::Approx(2.0 - config.gravity * config.dt).epsilon(1e-12));
}

TEST_CASE("simulate_trajectory: rest detection, caps, determinism") {
    SimConfig config;
    GeneratorConfig gen;

    SUBCASE("heavy cube comes to rest before the frame cap") {
        ScenarioParams sc = sample_scenario(kLabelHeavy, 7, gen);
        Trajectory t = simulate_trajectory(sc, config);
        CHECK(t.samples.size() >= 2);
        CHECK(t.samples.size() < static_cast<std::size_t>(config.max_frames));
        CHECK(t.label == kLabelHeavy);
        CHECK(t.frame_rate == config.frame_rate);
    }

    SUBCASE("sample count never exceeds max_frames") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            Trajectory t = simulate_trajectory(sample_scenario(kLabelLight, seed, gen), config);
            CHECK(t.samples.size() <= static_cast<std::size_t>(config.max_frames));
        }
    }

    SUBCASE("bit-identical reruns") {
        ScenarioParams sc = sample_scenario(kLabelLight, 99, gen);
        Trajectory a = simulate_trajectory(sc, config);
        Trajectory b = simulate_trajectory(sc, config);
        REQUIRE(a.samples.size() == b.samples.size());
        CHECK(std::memcmp(a.samples.data(), b.samples.data(),
                          a.samples.size() * sizeof(Vec3)) == 0);
    }

    SUBCASE("initial penetration is a setup error") {
        ScenarioParams sc = sample_scenario(kLabelHeavy, 3, gen);
        sc.initial_position.z = 0.0;  // center on the plane: vertices below
        sc.initial_euler = {0.0, 0.0, 0.0};
        CHECK_THROWS_AS(simulate_trajectory(sc, config), DataError);
    }

    SUBCASE("center of mass never ends below the tolerance plane") {
        for (std::uint64_t seed = 200; seed < 220; ++seed) {
            Trajectory t = simulate_trajectory(sample_scenario(seed % 2, seed, gen), config);
            for (const auto& p : t.samples) CHECK(p.z >= -0.001);
        }
    }
}

TEST_CASE("config validation") {
    SimConfig config;
    CHECK(config.substeps_per_frame() == 10);

    SimConfig bad = config;
    bad.dt = 1.0 / 250.0;  // does not divide 1/24
    CHECK_THROWS_AS(bad.validate(), DataError);

    MaterialParams m = make_material(0.5);
    m.restitution = 1.5;
    CHECK_THROWS_AS(m.validate(), DataError);
    m = make_material(0.5);
    m.mass = 0.0;
    CHECK_THROWS_AS(m.validate(), DataError);
}
