#include "trajlab/physics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "trajlab/errors.hpp"

namespace trajlab {

namespace {

constexpr double kUp[3] = {0.0, 0.0, 1.0};  // ground normal is world +z

void check_finite(const RigidBodyState& s) {
    auto bad = [](double v) { return !std::isfinite(v); };
    const struct { const char* name; double v; } fields[] = {
        {"position.x", s.position.x}, {"position.y", s.position.y}, {"position.z", s.position.z},
        {"orientation.w", s.orientation.w}, {"orientation.x", s.orientation.x},
        {"orientation.y", s.orientation.y}, {"orientation.z", s.orientation.z},
        {"linear_velocity.x", s.linear_velocity.x}, {"linear_velocity.y", s.linear_velocity.y},
        {"linear_velocity.z", s.linear_velocity.z},
        {"angular_velocity.x", s.angular_velocity.x}, {"angular_velocity.y", s.angular_velocity.y},
        {"angular_velocity.z", s.angular_velocity.z},
    };
    for (const auto& f : fields) {
        if (bad(f.v)) throw SimulationError(std::string("non-finite state component: ") + f.name);
    }
}

double lowest_vertex_z(const RigidBodyState& s, double half_extent) {
    Vec3 verts[8];
    cube_vertices(s, half_extent, verts);
    double z = verts[0].z;
    for (int i = 1; i < 8; ++i) z = std::min(z, verts[i].z);
    return z;
}

/// Lowest z over the masked vertex subset.
double lowest_masked_z(const RigidBodyState& s, double half_extent, const bool mask[8]) {
    Vec3 verts[8];
    cube_vertices(s, half_extent, verts);
    double z = 1e300;
    for (int i = 0; i < 8; ++i)
        if (mask[i]) z = std::min(z, verts[i].z);
    return z;
}

/// Pose advanced by t into a drift segment of total length t_total. The
/// velocity variable holds the end-of-segment value (gravity already applied
/// in full), so on free-flight segments the exact ballistic displacement is
/// v t + g (t_total t - t^2/2), which keeps flight energy exactly conserved.
/// Supported segments move linearly: the support impulse cancelled gravity.
/// Used both for committing motion and for crossing search so the committed
/// pose matches the searched one exactly.
RigidBodyState advanced(const RigidBodyState& s, double t, double t_total, double gravity,
                        bool ballistic) {
    RigidBodyState out = s;
    out.position += s.linear_velocity * t;
    if (ballistic) out.position.z += gravity * (t_total * t - 0.5 * t * t);
    out.orientation = s.orientation.integrated(s.angular_velocity, t);
    return out;
}

struct SolverContact {
    Vec3 r;                 // contact point minus center of mass
    double approach;        // pre-solve approach speed (>= 0)
    double normal_impulse;  // accumulated, >= 0
    Vec3 friction_impulse;  // accumulated tangential impulse
};

/// Sequential impulses with accumulation over the given contact set.
/// Restitution targets are taken from the pre-solve approach speeds; impacts
/// slower than the restitution threshold are treated as perfectly inelastic,
/// and the whole solve can be forced inelastic (support solve).
void solve_velocities(RigidBodyState& s, const std::vector<ContactPoint>& contacts,
                      const MaterialParams& material, const SimConfig& config,
                      bool allow_restitution = true) {
    const double inv_m = 1.0 / material.mass;
    const double inv_i = material.inv_inertia();
    const Vec3 n{kUp[0], kUp[1], kUp[2]};
    const Vec3 v_pre = s.linear_velocity;
    const Vec3 w_pre = s.angular_velocity;

    std::vector<SolverContact> cs(contacts.size());
    for (std::size_t k = 0; k < contacts.size(); ++k) {
        cs[k].r = contacts[k].point - s.position;
        Vec3 u = s.linear_velocity + s.angular_velocity.cross(cs[k].r);
        cs[k].approach = std::max(0.0, -u.dot(n));
        cs[k].normal_impulse = 0.0;
        cs[k].friction_impulse = Vec3{};
    }

    for (int it = 0; it < config.solver_iterations; ++it) {
        for (auto& c : cs) {
            // Normal impulse toward the restitution target.
            Vec3 u = s.linear_velocity + s.angular_velocity.cross(c.r);
            double un = u.dot(n);
            Vec3 rxn = c.r.cross(n);
            double k_normal = inv_m + n.dot((rxn * inv_i).cross(c.r));
            if (k_normal <= 0.0)
                throw SimulationError("contact solver: non-positive effective mass");
            double target = (allow_restitution && c.approach > config.restitution_speed_threshold)
                                ? material.restitution * c.approach
                                : 0.0;
            double dj = (target - un) / k_normal;
            double j_new = std::max(0.0, c.normal_impulse + dj);
            dj = j_new - c.normal_impulse;
            c.normal_impulse = j_new;
            s.linear_velocity += n * (dj * inv_m);
            s.angular_velocity += c.r.cross(n * dj) * inv_i;

            // Coulomb friction: accumulated tangential impulse clamped at mu*j.
            u = s.linear_velocity + s.angular_velocity.cross(c.r);
            Vec3 ut{u.x, u.y, 0.0};
            double ut_norm = ut.norm();
            if (ut_norm > 1e-12) {
                Vec3 t = ut / ut_norm;
                double k_tangent = inv_m + t.dot((c.r.cross(t) * inv_i).cross(c.r));
                Vec3 f_new = c.friction_impulse - t * (ut_norm / k_tangent);
                double f_max = material.friction_coeff * c.normal_impulse;
                double f_norm = f_new.norm();
                if (f_norm > f_max) f_new *= (f_max / (f_norm > 0.0 ? f_norm : 1.0));
                Vec3 df = f_new - c.friction_impulse;
                c.friction_impulse = f_new;
                s.linear_velocity += df * inv_m;
                s.angular_velocity += c.r.cross(df) * inv_i;
            }
        }
    }

    // Contacts are passive: Newton restitution at several coupled points can
    // overshoot the incoming kinetic energy, so scale the velocity change back
    // to energy parity when that happens. T(scale) - T0 = A scale^2 + B scale.
    Vec3 dv = s.linear_velocity - v_pre;
    Vec3 dw = s.angular_velocity - w_pre;
    double a = 0.5 * material.mass * dv.squared_norm() +
               0.5 * material.inertia() * dw.squared_norm();
    double b = material.mass * v_pre.dot(dv) + material.inertia() * w_pre.dot(dw);
    if (a > 0.0 && a + b > 0.0) {
        double scale = std::clamp(-b / a, 0.0, 1.0);
        s.linear_velocity = v_pre + dv * scale;
        s.angular_velocity = w_pre + dw * scale;
    }
}

}  // namespace

void MaterialParams::validate() const {
    if (!(mass > 0.0)) throw DataError("material: mass must be positive");
    if (!(restitution >= 0.0 && restitution <= 1.0))
        throw DataError("material: restitution must lie in [0, 1]");
    if (!(friction_coeff >= 0.0)) throw DataError("material: friction_coeff must be >= 0");
    if (!(half_extent > 0.0)) throw DataError("material: half_extent must be positive");
}

void SimConfig::validate() const {
    if (!(gravity >= 0.0)) throw DataError("sim config: gravity must be >= 0");
    if (!(dt > 0.0)) throw DataError("sim config: dt must be positive");
    if (!(frame_rate > 0.0)) throw DataError("sim config: frame_rate must be positive");
    if (max_frames < 1) throw DataError("sim config: max_frames must be >= 1");
    substeps_per_frame();  // throws when dt does not divide the frame interval
}

int SimConfig::substeps_per_frame() const {
    double exact = 1.0 / (frame_rate * dt);
    int n = static_cast<int>(std::lround(exact));
    if (n < 1 || std::abs(exact - n) > 1e-9)
        throw DataError("sim config: dt must divide 1/frame_rate exactly");
    return n;
}

void cube_vertices(const RigidBodyState& state, double half_extent, Vec3 out[8]) {
    int i = 0;
    for (int sx = -1; sx <= 1; sx += 2)
        for (int sy = -1; sy <= 1; sy += 2)
            for (int sz = -1; sz <= 1; sz += 2) {
                Vec3 local{half_extent * sx, half_extent * sy, half_extent * sz};
                out[i++] = state.position + state.orientation.rotate(local);
            }
}

std::vector<ContactPoint> detect_contacts(const RigidBodyState& state,
                                          const MaterialParams& material,
                                          double penetration_tolerance) {
    Vec3 verts[8];
    cube_vertices(state, material.half_extent, verts);
    std::vector<ContactPoint> contacts;
    for (int i = 0; i < 8; ++i) {
        if (verts[i].z < penetration_tolerance)
            contacts.push_back({verts[i], std::max(0.0, -verts[i].z)});
    }
    return contacts;
}

RigidBodyState resolve_contact(const RigidBodyState& state, const ContactPoint& contact,
                               const MaterialParams& material, const SimConfig& config) {
    RigidBodyState s = state;
    const Vec3 n{kUp[0], kUp[1], kUp[2]};
    const Vec3 r = contact.point - s.position;
    Vec3 u = s.linear_velocity + s.angular_velocity.cross(r);
    double un = u.dot(n);
    if (un > 0.0) return s;  // separating: leave untouched

    const double inv_m = 1.0 / material.mass;
    const double inv_i = material.inv_inertia();
    Vec3 rxn = r.cross(n);
    double k_normal = inv_m + n.dot((rxn * inv_i).cross(r));
    if (k_normal <= 0.0) throw SimulationError("resolve_contact: non-positive effective mass");

    double e = (-un > config.restitution_speed_threshold) ? material.restitution : 0.0;
    double j = std::max(0.0, -(1.0 + e) * un / k_normal);
    s.linear_velocity += n * (j * inv_m);
    s.angular_velocity += r.cross(n * j) * inv_i;

    u = s.linear_velocity + s.angular_velocity.cross(r);
    Vec3 ut{u.x, u.y, 0.0};
    double ut_norm = ut.norm();
    if (ut_norm > 1e-12) {
        Vec3 t = ut / ut_norm;
        double k_tangent = inv_m + t.dot((r.cross(t) * inv_i).cross(r));
        double j_stop = ut_norm / k_tangent;  // impulse that zeroes tangential velocity
        double jt = std::min(material.friction_coeff * j, j_stop);
        s.linear_velocity -= t * (jt * inv_m);
        s.angular_velocity -= r.cross(t * jt) * inv_i;
    }

    s.position.z += contact.depth * config.correction_factor;
    return s;
}

RigidBodyState step(const RigidBodyState& state, const MaterialParams& material,
                    const SimConfig& config) {
    check_finite(state);

    RigidBodyState s = state;

    // Contacts that already exist at the start of the substep. The impact
    // solve runs before gravity (its impulse time is t = 0, so restitution
    // must see the time-0 velocities); the support solve runs after gravity
    // and is always inelastic, which exactly cancels the gravity kick on a
    // resting body without touching the energy ledger.
    auto contacts = detect_contacts(s, material, config.penetration_tolerance);
    const bool supported = !contacts.empty();
    if (supported) solve_velocities(s, contacts, material, config);
    s.linear_velocity.z -= config.gravity * config.dt;
    if (supported) solve_velocities(s, contacts, material, config, /*allow_restitution=*/false);
    const bool ballistic = !supported;

    // Advance position/orientation, splitting the substep where a previously
    // above-ground vertex crosses the surface so the impact resolves there
    // instead of deep inside the plane.
    double t_rem = config.dt;
    for (int split = 0; split < 4 && t_rem > 0.0; ++split) {
        RigidBodyState full = advanced(s, t_rem, t_rem, config.gravity, ballistic);

        Vec3 v_start[8], v_full[8];
        cube_vertices(s, material.half_extent, v_start);
        cube_vertices(full, material.half_extent, v_full);
        bool mask[8];
        bool crossing = false;
        for (int i = 0; i < 8; ++i) {
            mask[i] = v_start[i].z >= 0.0;
            if (mask[i] && v_full[i].z < -config.penetration_tolerance) crossing = true;
        }
        if (!crossing) {
            s = full;
            break;
        }

        // Bisect for the earliest time a masked vertex reaches the surface.
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 40; ++it) {
            double mid = 0.5 * (lo + hi);
            if (lowest_masked_z(advanced(s, mid * t_rem, t_rem, config.gravity, ballistic),
                                material.half_extent, mask) >= 0.0)
                lo = mid;
            else
                hi = mid;
        }
        double t_event = lo * t_rem;
        RigidBodyState at_event = advanced(s, t_event, t_rem, config.gravity, ballistic);
        // Make the velocity time-consistent with the event instant; it is
        // restored for the remaining segment after the impulse solve.
        if (ballistic) at_event.linear_velocity.z += config.gravity * (t_rem - t_event);
        s = at_event;
        t_rem -= t_event;
        auto impact = detect_contacts(s, material, config.penetration_tolerance);
        if (!impact.empty()) solve_velocities(s, impact, material, config);
        if (ballistic) s.linear_velocity.z -= config.gravity * t_rem;
    }

    // Residual de-penetration safety net, rate-limited so it cannot outweigh
    // the integrator's own per-substep dissipation in the energy audit.
    double low = lowest_vertex_z(s, material.half_extent);
    if (low < -config.penetration_tolerance) {
        double lift = config.correction_factor * (-low - config.penetration_tolerance);
        s.position.z += std::min(lift, 2e-5);
    }

    check_finite(s);
    return s;
}

FrameSeries run_frames(const RigidBodyState& initial, const MaterialParams& material,
                       const SimConfig& config) {
    material.validate();
    config.validate();
    if (lowest_vertex_z(initial, material.half_extent) < -config.penetration_tolerance)
        throw DataError("simulation setup: initial pose penetrates the ground");

    FrameSeries series;
    series.frame_rate = config.frame_rate;
    series.frames.push_back(initial);

    const int substeps = config.substeps_per_frame();
    RigidBodyState s = initial;
    int rest_run = 0;
    for (int frame = 1; frame < config.max_frames; ++frame) {
        for (int k = 0; k < substeps; ++k) s = step(s, material, config);
        series.frames.push_back(s);
        bool at_rest = s.linear_velocity.norm() < config.rest_linear_speed &&
                       s.angular_velocity.norm() < config.rest_angular_speed;
        rest_run = at_rest ? rest_run + 1 : 0;
        if (rest_run >= config.rest_frames) break;
    }
    return series;
}

double mechanical_energy(const RigidBodyState& state, const MaterialParams& material,
                         double gravity) {
    double kinetic = 0.5 * material.mass * state.linear_velocity.squared_norm();
    double rotational = 0.5 * material.inertia() * state.angular_velocity.squared_norm();
    double potential = material.mass * gravity * state.position.z;
    return kinetic + rotational + potential;
}

}  // namespace trajlab
