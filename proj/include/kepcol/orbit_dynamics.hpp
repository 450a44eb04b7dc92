#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "kepcol/regions.hpp"

namespace kepcol {

enum class EpsilonPolicy { Fixed, UniformPerEvent };
enum class SimMode { Points, Disks };
enum class PickRule { UniformChoice, AlwaysFirst };
enum class ImpactLaw { HalfCircleUniform, DiskLimit };

struct SimConfig {
    MassSplit masses = MassSplit::from_mu1(0.5);
    double inv_E = -0.445;
    double inv_L = 1.0;
    double dL0 = 0.0;
    double dE0 = 0.0;
    double dOmega0 = 3.1415926535897932384626433832795;
    EpsilonPolicy eps_policy = EpsilonPolicy::Fixed;
    double epsilon = 0.0;
    SimMode mode = SimMode::Points;
    double disk_diameter = 0.0;  // contact distance D (disks mode)
    long n_steps = 0;
    std::uint64_t rng_seed = 0;
    PickRule pick = PickRule::UniformChoice;
    ImpactLaw impact_law = ImpactLaw::HalfCircleUniform;
    bool resample_domega = false;
    double tol_class = kTolClass;
};

struct CollisionEvent {
    long step = 0;
    double theta1 = 0.0;
    double theta2 = 0.0;
    Vec2 normal;
    double epsilon = 0.0;
    OrbitElements pre1, pre2;
    OrbitElements post1, post2;
    double pre_dL = 0.0, pre_dE = 0.0;
    double dL = 0.0, dE = 0.0, dOmega = 0.0;
    double energy_loss = 0.0;
    ConicClass class1 = ConicClass::Elliptic;
    ConicClass class2 = ConicClass::Elliptic;
};

struct Trajectory {
    SimConfig config;
    std::vector<CollisionEvent> events;

    /// One row per event, columns:
    /// step,theta1,theta2,nx,ny,eps,E1,L1,e1,E2,L2,e2,dL,dE,dOmega,energy_loss,class1,class2
    /// (post-collision elements, floats printed with 17 significant digits).
    std::string to_csv() const;
};

struct InvarianceReport {
    bool all_elliptic = true;
    double max_e1 = 0.0;
    double max_e2 = 0.0;
    double max_abs_L1 = 0.0;
    double max_abs_L2 = 0.0;
    double max_abs_dL = 0.0;
    double dL_bound_final = 0.0;   // Eq-of-limits bound at the final energy
    bool dL_within_bound = true;   // per-event check against the current bound
    std::optional<long> first_escape_step;
    std::optional<long> absorbed_at_step;
    long n_events = 0;
    long ipi_violations = 0;       // points mode: post-event I_pi membership
    long proximity_violations = 0; // disks mode: post-event I_pi or dbar <= D
    double initial_inv_E = 0.0;
    double final_inv_E = 0.0;
    double max_inv_E_increase = 0.0;  // should be ~0 (monotonicity)
    double max_inv_L_drift = 0.0;

    std::string to_json(const SimConfig& cfg) const;
};

namespace dynamics {

/// Deterministic uniform double in [0, 1) from the top 53 bits.
inline double uniform01(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

/// Seed of an independent run: splitmix64 finalizer of base + trial.
std::uint64_t trial_seed(std::uint64_t base, long trial);

/// One event of the orbit dynamics: choose a collision configuration,
/// apply the collision operator, rebuild both orbits from the outgoing
/// states and recompute the conserved pair. Throws
/// NoCollisionPossibleError when no valid configuration exists.
std::pair<PairState, CollisionEvent> step(const PairState& p, const SimConfig& cfg,
                                          std::mt19937_64& rng, long step_index = 0);

void validate(const SimConfig& cfg);

PairState initial_state(const SimConfig& cfg);

std::pair<Trajectory, InvarianceReport> run(const SimConfig& cfg);

/// Up to `trials` independent seeded runs (streams derived from
/// cfg.rng_seed by trial_seed); returns the lowest-index trajectory that
/// contains a non-elliptic event, or nullopt.
std::optional<Trajectory> escape_search(const SimConfig& cfg, long trials,
                                        int n_threads = 1);

}  // namespace dynamics
}  // namespace kepcol
