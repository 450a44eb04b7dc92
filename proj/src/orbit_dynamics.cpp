#include "kepcol/orbit_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "kepcol/collision.hpp"

namespace kepcol::dynamics {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;

struct ContactConfig {
    double theta1 = 0.0;
    double theta2 = 0.0;
    bool tangent = false;
};

// contact configurations |x1(th1) - x2(th2)| = D on a theta1 grid with
// bracketed bisection in theta2, deduplicated on the torus
std::vector<ContactConfig> disk_contacts(const PairState& p, double D, double tol) {
    const OrbitElements o1 = p.orbit1(tol);
    const OrbitElements o2 = p.orbit2(tol);
    const int n1 = 512, n2 = 512;
    std::vector<Vec2> x2(n2);
    for (int k = 0; k < n2; ++k)
        x2[k] = kepler::state_at_anomaly(o2, 2.0 * kPi * k / n2, tol).position;

    std::vector<ContactConfig> out;
    auto push_dedup = [&out](double t1, double t2) {
        for (const ContactConfig& c : out) {
            const double d1 = std::abs(wrap_pi(c.theta1 - t1));
            const double d2 = std::abs(wrap_pi(c.theta2 - t2));
            if (std::hypot(d1, d2) < 1e-6) return;
        }
        out.push_back({t1, t2, false});
    };

    for (int i = 0; i < n1; ++i) {
        const double t1 = 2.0 * kPi * i / n1;
        const Vec2 x1 = kepler::state_at_anomaly(o1, t1, tol).position;
        auto g_cached = [&](int k) { return (x1 - x2[k]).norm() - D; };
        auto g = [&](double t2) {
            return (x1 - kepler::state_at_anomaly(o2, t2, tol).position).norm() - D;
        };
        double g_prev = g_cached(0);
        for (int k = 0; k < n2; ++k) {
            const int k_next = (k + 1) % n2;
            const double g_next = g_cached(k_next);
            if ((g_prev < 0.0) != (g_next < 0.0)) {
                double lo = 2.0 * kPi * k / n2;
                double hi = 2.0 * kPi * (k + 1) / n2;
                double g_lo = g_prev;
                for (int it = 0; it < 60; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double g_mid = g(mid);
                    if ((g_lo < 0.0) == (g_mid < 0.0)) {
                        lo = mid;
                        g_lo = g_mid;
                    } else {
                        hi = mid;
                    }
                }
                push_dedup(t1, wrap_2pi(0.5 * (lo + hi)));
            }
            g_prev = g_next;
        }
    }
    return out;
}

Vec2 sample_incoming_normal(const Vec2& w, const SimConfig& cfg, std::mt19937_64& rng) {
    const Vec2 head_on = (-w).normalized();
    double alpha = 0.0;
    if (cfg.impact_law == ImpactLaw::HalfCircleUniform) {
        alpha = (uniform01(rng) - 0.5) * kPi;
    } else {
        const double b = 2.0 * uniform01(rng) - 1.0;
        alpha = std::asin(b);
    }
    return head_on.rotated(alpha);
}

double residual_in_I_pi(const PairState& p) {
    const double lhs = -p.e1() * p.e2();
    const double rhs = 1.0 + p.L2() * p.L2() * p.E1() + p.L1() * p.L1() * p.E2();
    return rhs - lhs;  // >= 0 inside I_pi
}

void append_g17(std::string& s, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    s += buf;
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t base, long trial) {
    std::uint64_t z = base + 0x9E3779B97F4A7C15ULL *
                                 (static_cast<std::uint64_t>(trial) + 1ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

void validate(const SimConfig& cfg) {
    if (!(cfg.inv_L >= 0.0))
        throw std::invalid_argument("simulation requires L >= 0");
    if (!(cfg.epsilon >= 0.0 && cfg.epsilon <= 0.5))
        throw std::invalid_argument("epsilon must be in [0, 0.5]");
    if (cfg.mode == SimMode::Disks && !(cfg.disk_diameter > 0.0))
        throw std::invalid_argument("disks mode requires D > 0");
    if (cfg.n_steps < 0)
        throw std::invalid_argument("n_steps must be >= 0");
    const PairState p0 = initial_state(cfg);
    if (!regions::admissible(p0))
        throw AdmissibilityError("initial state outside the admissible region A");
}

PairState initial_state(const SimConfig& cfg) {
    return PairState(cfg.dL0, cfg.dE0, cfg.dOmega0, cfg.inv_E, cfg.inv_L, cfg.masses);
}

std::pair<PairState, CollisionEvent> step(const PairState& p, const SimConfig& cfg,
                                          std::mt19937_64& rng, long step_index) {
    const double tol = cfg.tol_class;
    CollisionEvent ev;
    ev.step = step_index;
    ev.pre1 = p.orbit1(tol);
    ev.pre2 = p.orbit2(tol);
    ev.pre_dL = p.dL;
    ev.pre_dE = p.dE;

    double theta1 = 0.0, theta2 = 0.0;
    bool common_point = (cfg.mode == SimMode::Points);
    if (cfg.mode == SimMode::Points) {
        std::vector<IntersectionSolution> sols;
        try {
            sols = geometry::intersection_anomalies(p);
        } catch (const DegenerateCoincidentError&) {
            // coincident orbits: any anomaly is a shared point
            const double t = uniform01(rng) * 2.0 * kPi;
            sols.push_back({t, wrap_2pi(t + p.dOmega), false});
        }
        // drop formal roots on a nonexistent hyperbolic branch
        std::erase_if(sols, [&](const IntersectionSolution& s) {
            return 1.0 + p.e1() * std::cos(s.theta1) <= tol ||
                   1.0 + p.e2() * std::cos(s.theta2) <= tol;
        });
        if (sols.empty())
            throw NoCollisionPossibleError("orbits do not intersect");
        size_t idx = 0;
        if (sols.size() > 1 && cfg.pick == PickRule::UniformChoice)
            idx = std::min(sols.size() - 1,
                           static_cast<size_t>(uniform01(rng) * sols.size()));
        theta1 = sols[idx].theta1;
        theta2 = sols[idx].theta2;
    } else {
        std::vector<ContactConfig> contacts = disk_contacts(p, cfg.disk_diameter, tol);
        // keep incoming configurations only
        std::vector<ContactConfig> incoming;
        for (const ContactConfig& c : contacts) {
            const PlanarState s1 = kepler::state_at_anomaly(ev.pre1, c.theta1, tol);
            const PlanarState s2 = kepler::state_at_anomaly(ev.pre2, c.theta2, tol);
            const Vec2 sep = s1.position - s2.position;
            if (sep.norm() <= 0.0) continue;
            const Vec2 n = sep.normalized();
            if ((s1.velocity - s2.velocity).dot(n) < 0.0) incoming.push_back(c);
        }
        if (incoming.empty())
            throw NoCollisionPossibleError("no incoming contact configuration");
        size_t idx = 0;
        if (incoming.size() > 1 && cfg.pick == PickRule::UniformChoice)
            idx = std::min(incoming.size() - 1,
                           static_cast<size_t>(uniform01(rng) * incoming.size()));
        theta1 = incoming[idx].theta1;
        theta2 = incoming[idx].theta2;
    }

    const PlanarState s1 = kepler::state_at_anomaly(ev.pre1, theta1, tol);
    const PlanarState s2 = kepler::state_at_anomaly(ev.pre2, theta2, tol);

    // Collision inputs. In points mode the two solved positions lie on a
    // common ray and may differ by the tangent-solution slop (up to
    // ~1e-9 L^2); both particles are placed at the mean radius and their
    // velocities rebuilt with transverse component L_i/r there, so the
    // impulse acts through one point and the cross products return the
    // stored momenta exactly.
    Vec2 x1 = s1.position, x2 = s2.position;
    Vec2 v1 = s1.velocity, v2 = s2.velocity;
    if (common_point) {
        const Vec2 xc = (s1.position + s2.position) * 0.5;
        const double r = xc.norm();
        const Vec2 u_r = xc / r;
        const Vec2 u_t{-u_r.y, u_r.x};
        // each orbit's own velocity at radius r: radial part from vis-viva,
        // transverse part L_i/r, so the state encodes (E_i, L_i) exactly
        auto radial_at = [r](double E, double L, double sign_from) {
            const double rad = 2.0 * (E + 1.0 / r) - (L * L) / (r * r);
            const double v = std::sqrt(std::max(0.0, rad));
            return sign_from < 0.0 ? -v : v;
        };
        v1 = u_r * radial_at(p.E1(), p.L1(), s1.velocity.dot(u_r)) +
             u_t * (p.L1() / r);
        v2 = u_r * radial_at(p.E2(), p.L2(), s2.velocity.dot(u_r)) +
             u_t * (p.L2() / r);
        x1 = x2 = xc;
    }
    const Vec2 w = v1 - v2;

    Vec2 n;
    if (cfg.mode == SimMode::Points) {
        if (w.norm() <= 1e-14)
            throw NoCollisionPossibleError("zero relative velocity at the shared point");
        n = sample_incoming_normal(w, cfg, rng);
    } else {
        n = (x1 - x2).normalized();
    }

    double eps = cfg.epsilon;
    if (cfg.eps_policy == EpsilonPolicy::UniformPerEvent) eps = 0.5 * uniform01(rng);

    const collision::ImpactConfig<Vec2> impact{n, eps};
    const auto outcome = collision::collide(v1, v2, p.masses, impact);

    // post-collision elements: energies via the kinetic-energy difference
    // (the potential term cancels per particle), momenta via the cross
    // product at the impulse point, periapsis angles from the geometry
    const double E1_out =
        p.E1() + 0.5 * (outcome.v1_out.norm2() - v1.norm2());
    const double E2_out =
        p.E2() + 0.5 * (outcome.v2_out.norm2() - v2.norm2());
    const double L1_out = x1.cross(outcome.v1_out);
    const double L2_out = x2.cross(outcome.v2_out);
    const double w1_out =
        kepler::elements_from_state({x1, outcome.v1_out}, tol).periapsis_angle;
    const double w2_out =
        kepler::elements_from_state({x2, outcome.v2_out}, tol).periapsis_angle;
    const OrbitElements o1(E1_out, L1_out, w1_out, tol);
    const OrbitElements o2(E2_out, L2_out, w2_out, tol);
    PairState next = PairState::from_elements(o1, o2, p.masses);
    if (cfg.resample_domega) next.dOmega = uniform01(rng) * 2.0 * kPi;

    ev.theta1 = theta1;
    ev.theta2 = theta2;
    ev.normal = n;
    ev.epsilon = eps;
    ev.post1 = o1;
    ev.post2 = o2;
    ev.dL = next.dL;
    ev.dE = next.dE;
    ev.dOmega = next.dOmega;
    ev.energy_loss = outcome.energy_loss;
    ev.class1 = kepler::classify(o1, tol);
    ev.class2 = kepler::classify(o2, tol);
    return {next, ev};
}

std::pair<Trajectory, InvarianceReport> run(const SimConfig& cfg) {
    validate(cfg);
    Trajectory traj;
    traj.config = cfg;
    InvarianceReport rep;
    rep.initial_inv_E = cfg.inv_E;
    rep.final_inv_E = cfg.inv_E;

    PairState p = initial_state(cfg);
    std::mt19937_64 rng(cfg.rng_seed);
    double prev_E = cfg.inv_E;

    for (long k = 0; k < cfg.n_steps; ++k) {
        CollisionEvent ev;
        try {
            auto [next, event] = step(p, cfg, rng, k);
            p = next;
            ev = event;
        } catch (const NoCollisionPossibleError&) {
            rep.absorbed_at_step = k;
            break;
        }
        traj.events.push_back(ev);
        ++rep.n_events;

        if (ev.class1 != ConicClass::Elliptic || ev.class2 != ConicClass::Elliptic) {
            rep.all_elliptic = false;
            if (!rep.first_escape_step) rep.first_escape_step = k;
        }
        rep.max_e1 = std::max(rep.max_e1, ev.post1.eccentricity(cfg.tol_class));
        rep.max_e2 = std::max(rep.max_e2, ev.post2.eccentricity(cfg.tol_class));
        rep.max_abs_L1 = std::max(rep.max_abs_L1, std::abs(ev.post1.ang_mom));
        rep.max_abs_L2 = std::max(rep.max_abs_L2, std::abs(ev.post2.ang_mom));
        rep.max_abs_dL = std::max(rep.max_abs_dL, std::abs(p.dL));

        rep.max_inv_E_increase = std::max(rep.max_inv_E_increase, p.inv_E - prev_E);
        prev_E = p.inv_E;
        rep.final_inv_E = p.inv_E;
        rep.max_inv_L_drift =
            std::max(rep.max_inv_L_drift, std::abs(p.inv_L - cfg.inv_L));

        // bound of |dL| at the current energy, when I_pi is nonvoid
        try {
            const RegionParams rpx(cfg.masses, p.inv_E, p.inv_L);
            const double bound = regions::delta_L_bound(rpx);
            rep.dL_bound_final = bound;
            if (std::abs(p.dL) > bound * (1.0 + 1e-9)) rep.dL_within_bound = false;
        } catch (const VoidRegionError&) {
            rep.dL_bound_final = std::numeric_limits<double>::quiet_NaN();
        }

        // slack sized to the tangent-solution positional tolerance
        const double slack =
            1e-9 * (1.0 + std::abs(p.inv_E) * p.inv_L * p.inv_L);
        const double res = residual_in_I_pi(p);
        if (cfg.mode == SimMode::Points) {
            if (res < -slack) ++rep.ipi_violations;
        } else {
            bool ok = res >= -slack;
            if (!ok) {
                try {
                    ok = geometry::dbar(p).value <= cfg.disk_diameter + 1e-9;
                } catch (const Error&) {
                    ok = false;
                }
            }
            if (!ok) ++rep.proximity_violations;
        }
    }
    return {traj, rep};
}

std::optional<Trajectory> escape_search(const SimConfig& cfg, long trials,
                                        int n_threads) {
    validate(cfg);
    n_threads = std::max(1, n_threads);
    std::optional<Trajectory> found;
    for (long base = 0; base < trials && !found; base += n_threads) {
        const long block = std::min<long>(n_threads, trials - base);
        std::vector<std::optional<Trajectory>> results(block);
        std::vector<std::thread> pool;
        for (long j = 0; j < block; ++j) {
            pool.emplace_back([&, j] {
                SimConfig c = cfg;
                c.rng_seed = trial_seed(cfg.rng_seed, base + j);
                auto [traj, rep] = run(c);
                if (rep.first_escape_step) results[j] = std::move(traj);
            });
        }
        for (auto& t : pool) t.join();
        for (long j = 0; j < block; ++j) {
            if (results[j]) {
                found = std::move(results[j]);
                break;
            }
        }
    }
    return found;
}

}  // namespace kepcol::dynamics

namespace kepcol {

std::string Trajectory::to_csv() const {
    std::string s;
    s.reserve(events.size() * 220 + 512);
    char head[512];
    std::snprintf(head, sizeof(head),
                  "# kepcol trajectory v1\n"
                  "# config: mu1=%.17g L=%.17g E=%.17g dL0=%.17g dE0=%.17g "
                  "dOmega0=%.17g eps=%.17g eps_policy=%s mode=%s D=%.17g "
                  "steps=%ld seed=%llu pick=%s impact_law=%s resample_domega=%d\n",
                  config.masses.mu1, config.inv_L, config.inv_E, config.dL0,
                  config.dE0, config.dOmega0, config.epsilon,
                  config.eps_policy == EpsilonPolicy::Fixed ? "fixed" : "uniform",
                  config.mode == SimMode::Points ? "points" : "disks",
                  config.disk_diameter, config.n_steps,
                  static_cast<unsigned long long>(config.rng_seed),
                  config.pick == PickRule::UniformChoice ? "uniform" : "first",
                  config.impact_law == ImpactLaw::HalfCircleUniform ? "half" : "disk",
                  config.resample_domega ? 1 : 0);
    s += head;
    s += "step,theta1,theta2,nx,ny,eps,E1,L1,e1,E2,L2,e2,dL,dE,dOmega,"
         "energy_loss,class1,class2\n";
    for (const CollisionEvent& ev : events) {
        s += std::to_string(ev.step);
        const double cols[] = {ev.theta1,
                               ev.theta2,
                               ev.normal.x,
                               ev.normal.y,
                               ev.epsilon,
                               ev.post1.energy,
                               ev.post1.ang_mom,
                               ev.post1.eccentricity(),
                               ev.post2.energy,
                               ev.post2.ang_mom,
                               ev.post2.eccentricity(),
                               ev.dL,
                               ev.dE,
                               ev.dOmega,
                               ev.energy_loss};
        for (double v : cols) {
            s += ',';
            dynamics::append_g17(s, v);
        }
        s += ',';
        s += to_string(ev.class1);
        s += ',';
        s += to_string(ev.class2);
        s += '\n';
    }
    return s;
}

std::string InvarianceReport::to_json(const SimConfig& cfg) const {
    nlohmann::json j;
    j["all_elliptic"] = all_elliptic;
    j["max_e1"] = max_e1;
    j["max_e2"] = max_e2;
    j["max_abs_L1"] = max_abs_L1;
    j["max_abs_L2"] = max_abs_L2;
    j["max_abs_dL"] = max_abs_dL;
    j["dL_bound_final"] = dL_bound_final;
    j["dL_within_bound"] = dL_within_bound;
    if (first_escape_step)
        j["first_escape_step"] = *first_escape_step;
    else
        j["first_escape_step"] = nullptr;
    if (absorbed_at_step)
        j["absorbed_at_step"] = *absorbed_at_step;
    else
        j["absorbed_at_step"] = nullptr;
    j["n_events"] = n_events;
    j["ipi_violations"] = ipi_violations;
    j["proximity_violations"] = proximity_violations;
    j["initial_inv_E"] = initial_inv_E;
    j["final_inv_E"] = final_inv_E;
    j["max_inv_E_increase"] = max_inv_E_increase;
    j["max_inv_L_drift"] = max_inv_L_drift;
    j["config"] = {
        {"mu1", cfg.masses.mu1},
        {"mu2", cfg.masses.mu2},
        {"E", cfg.inv_E},
        {"L", cfg.inv_L},
        {"el2", cfg.inv_E * cfg.inv_L * cfg.inv_L},
        {"dL0", cfg.dL0},
        {"dE0", cfg.dE0},
        {"dOmega0", cfg.dOmega0},
        {"epsilon", cfg.epsilon},
        {"eps_policy",
         cfg.eps_policy == EpsilonPolicy::Fixed ? "fixed" : "uniform"},
        {"mode", cfg.mode == SimMode::Points ? "points" : "disks"},
        {"D", cfg.disk_diameter},
        {"n_steps", cfg.n_steps},
        {"seed", cfg.rng_seed},
        {"pick", cfg.pick == PickRule::UniformChoice ? "uniform" : "first"},
        {"impact_law",
         cfg.impact_law == ImpactLaw::HalfCircleUniform ? "half" : "disk"},
        {"resample_domega", cfg.resample_domega},
    };
    return j.dump(2);
}

}  // namespace kepcol
