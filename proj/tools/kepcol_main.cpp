// kepcol command line: thresholds, region/gap scans, seeded simulation
// campaigns and a quick self-check battery.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "kepcol/collision.hpp"
#include "kepcol/orbit_dynamics.hpp"
#include "kepcol/scan_io.hpp"
#include "kepcol/spatial3d.hpp"

using nlohmann::json;
using namespace kepcol;

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;

int env_threads() {
    if (const char* v = std::getenv("KC_THREADS")) {
        const int n = std::atoi(v);
        if (n > 0) return n;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

json sigma_json(double mu1) {
    const MassSplit m = MassSplit::from_mu1(mu1);
    const CriticalValues cv = regions::sigma(m);
    json j;
    j["mu1"] = m.mu1;
    j["mu2"] = m.mu2;
    j["sigma"] = cv.sigma;
    j["e_crit"] = cv.e_crit;
    j["L1_crit"] = cv.L1_crit;
    j["L2_crit"] = cv.L2_crit;
    // the orbit with L1 = L2 = L, E1 = E2 = E at the threshold
    const double e_mean = std::sqrt(1.0 + 2.0 * cv.sigma);
    j["mean_orbit_at_threshold"] = {
        {"eccentricity", e_mean},
        {"apoapsis_periapsis_ratio", (1.0 + e_mean) / (1.0 - e_mean)},
        {"semi_axis_ratio", 1.0 / std::sqrt(1.0 - e_mean * e_mean)},
    };
    return j;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + path);
    f << text;
    if (!f.good()) throw IoError("write failed: " + path);
}

// ---------------------------------------------------------------- verify ---

struct Verifier {
    int violations = 0;

    void check(bool ok, const std::string& name, const std::string& detail = "") {
        if (ok) {
            std::cout << "ok: " << name << '\n';
        } else {
            ++violations;
            std::cout << "VIOLATION: " << name;
            if (!detail.empty()) std::cout << " (" << detail << ")";
            std::cout << '\n';
        }
    }
};

// independent radial-difference intersection oracle on a uniform grid
bool grid_intersects(const PairState& p, int n) {
    const double e1 = p.e1(), e2 = p.e2();
    const double L1s = p.L1() * p.L1(), L2s = p.L2() * p.L2();
    auto gap = [&](double th1) {
        return L1s / (1.0 + e1 * std::cos(th1)) -
               L2s / (1.0 + e2 * std::cos(th1 + p.dOmega));
    };
    const double thresh = 1e-6 * p.inv_L * p.inv_L;
    double prev = gap(0.0);
    double min_abs = std::abs(prev);
    for (int k = 1; k <= n; ++k) {
        const double cur = gap(2.0 * kPi * k / n);
        if ((prev < 0.0) != (cur < 0.0)) return true;
        min_abs = std::min(min_abs, std::abs(cur));
        prev = cur;
    }
    return min_abs < thresh;
}

std::optional<PairState> sample_pair(std::mt19937_64& g) {
    auto u = [&](double a, double b) { return a + (b - a) * dynamics::uniform01(g); };
    const MassSplit m = MassSplit::from_mu1(u(0.05, 0.5));
    const double E = u(-0.7, -0.2);
    const RegionParams rp(m, E, 1.0);
    const GridWindow w = scan::default_window(rp);
    const PairState p = regions::pair_at(rp, u(w.dl_min, w.dl_max),
                                         u(w.de_min, w.de_max), u(0.0, 2.0 * kPi));
    if (!regions::admissible(p)) return std::nullopt;
    if (std::abs(p.L1()) < 0.2 || std::abs(p.L2()) < 0.2) return std::nullopt;
    if (p.e1() > 0.95 || p.e2() > 0.95) return std::nullopt;
    if (p.e1() < 1e-3 || p.e2() < 1e-3) return std::nullopt;
    return p;
}

int run_verify() {
    Verifier v;
    std::mt19937_64 g(20240813);
    auto u = [&](double a, double b) { return a + (b - a) * dynamics::uniform01(g); };

    // threshold identities
    {
        const CriticalValues cv = regions::sigma(MassSplit::from_mu1(0.5));
        v.check(std::abs(cv.sigma + 27.0 / 64.0) < 1e-12 &&
                    std::abs(cv.e_crit - 0.5) < 1e-12,
                "equal-mass threshold -27/64, e_crit 1/2");
        bool ok = true;
        for (int i = 0; i < 100 && ok; ++i) {
            const MassSplit m = MassSplit::from_mu1(u(0.01, 0.5));
            const CriticalValues c = regions::sigma(m);
            const double res =
                2.0 * m.mu2 * m.mu2 * c.e_crit * c.e_crit - m.mu1 * m.mu1 * (1.0 - c.e_crit);
            ok = std::abs(res) < 1e-12;
        }
        v.check(ok, "critical eccentricity solves 2*mu2^2*e^2 = mu1^2*(1-e)");
        const double s45 = regions::sigma(MassSplit::from_mu1(0.45)).sigma;
        v.check(s45 > -0.445 && s45 < -0.41, "sigma(0.45) bracketed");
    }

    // collision operator
    {
        bool ok = true;
        double worst = 0.0;
        for (int i = 0; i < 10000 && ok; ++i) {
            const MassSplit m = MassSplit::from_mu1(u(0.05, 0.5));
            const Vec2 v1{u(-2, 2), u(-2, 2)}, v2{u(-2, 2), u(-2, 2)};
            const Vec2 w = v1 - v2;
            if (w.norm() < 1e-6) continue;
            const Vec2 n = (-w).normalized().rotated(u(-1.5, 1.5));
            if (w.dot(n) >= 0) continue;
            const double eps = u(0.0, 0.5);
            const auto out = collision::collide(v1, v2, m, {n, eps});
            const Vec2 dp = (out.v1_out * m.mu1 + out.v2_out * m.mu2) -
                            (v1 * m.mu1 + v2 * m.mu2);
            const double t_in = m.mu1 * v1.norm2() / 2 + m.mu2 * v2.norm2() / 2;
            const double t_out =
                m.mu1 * out.v1_out.norm2() / 2 + m.mu2 * out.v2_out.norm2() / 2;
            const double loss = t_in - t_out;
            const double wn = w.dot(n);
            ok = dp.norm() <= 1e-14 * (v1.norm() + v2.norm() + 1.0) &&
                 std::abs((out.v1_out - out.v2_out).dot(n) / wn + (1 - 2 * eps)) < 1e-12 &&
                 std::abs(loss - out.energy_loss) < 1e-12 * (1.0 + std::abs(loss));
            worst = std::max(worst, dp.norm());
        }
        v.check(ok, "collision conservation, restitution and loss formula");
    }

    // geometry: predicate vs closed form vs grid
    {
        bool ok = true;
        int tested = 0;
        while (tested < 1000 && ok) {
            const auto p = sample_pair(g);
            if (!p) continue;
            const double L1s = p->L1() * p->L1(), L2s = p->L2() * p->L2();
            const double a = L1s * p->e2() * std::cos(p->dOmega) - L2s * p->e1();
            const double b = -L1s * p->e2() * std::sin(p->dOmega);
            const double c = L2s - L1s;
            const double r2 = a * a + b * b;
            if (std::abs(r2 - c * c) <= 1e-4 * (L1s + L2s) * (L1s + L2s)) continue;
            ++tested;
            const bool pred = geometry::intersects(*p);
            const bool solved = !geometry::intersection_anomalies(*p).empty();
            const bool grid = grid_intersects(*p, 4096);
            ok = (pred == solved) && (pred == grid);
        }
        v.check(ok, "intersection predicate / closed form / grid oracle agree");
    }

    // dbar derivative vs finite differences
    {
        bool ok = true;
        int tested = 0;
        while (tested < 300 && ok) {
            const auto p = sample_pair(g);
            if (!p) continue;
            PairState hi = *p, lo = *p;
            const double h =
                1e-5 * std::pow(std::min(p->e1(), p->e2()), 5.0 / 3.0);
            hi.dL += h;
            lo.dL -= h;
            if (!regions::admissible(hi) || !regions::admissible(lo)) continue;
            ++tested;
            try {
                const double fd =
                    (geometry::dbar(hi).value - geometry::dbar(lo).value) / (2 * h);
                const double an = geometry::dbar_partial_dL(*p);
                ok = std::abs(fd - an) <= 1e-6 * std::max(1.0, std::abs(an));
            } catch (const Error&) {
                --tested;
            }
        }
        v.check(ok, "dbar derivative matches finite differences");
    }

    // critical sizes
    {
        const double d1 = regions::critical_D_numeric(MassSplit::from_mu1(0.45), -0.445);
        const double d2 = regions::critical_D_numeric(MassSplit::from_mu1(0.45), -0.52);
        v.check(std::abs(d1 - 0.034) < 0.1 * 0.034 && std::abs(d2 - 0.25) < 0.1 * 0.25,
                "critical sizes 0.034 and 0.25 reproduced",
                "got " + std::to_string(d1) + ", " + std::to_string(d2));
    }

    // invariance Monte Carlo (short)
    {
        bool ok = true;
        for (double mu1 : {0.5, 0.45, 0.3}) {
            const double s = regions::sigma(MassSplit::from_mu1(mu1)).sigma;
            for (double eps : {0.0, 0.1}) {
                SimConfig cfg;
                cfg.masses = MassSplit::from_mu1(mu1);
                cfg.inv_E = 1.001 * s;
                cfg.inv_L = 1.0;
                cfg.epsilon = eps;
                cfg.n_steps = 2000;
                cfg.rng_seed = 777;
                const auto [traj, rep] = dynamics::run(cfg);
                ok = ok && rep.all_elliptic && rep.dL_within_bound &&
                     rep.ipi_violations == 0 && rep.max_inv_L_drift < 1e-10 &&
                     rep.max_inv_E_increase < 1e-12;
            }
        }
        v.check(ok, "invariant region holds in seeded short runs");
    }

    // 3D reduction
    {
        bool ok = true;
        for (int i = 0; i < 10000 && ok; ++i) {
            const MassSplit m = MassSplit::from_mu1(u(0.05, 0.5));
            const SpatialState s1{{u(0.5, 2), u(-1, 1), u(-1, 1)},
                                  {u(-1, 1), u(-1, 1), u(-0.5, 0.5)}};
            const SpatialState s2{{u(0.5, 2), u(-1, 1), u(-1, 1)},
                                  {u(-1, 1), u(-1, 1), u(-0.5, 0.5)}};
            try {
                const ReducedPair rp = spatial::reduce_to_planar(s1, s2, m);
                ok = rp.vec_L_norm <= rp.tilde_L * (1.0 + 1e-14);
            } catch (const Error&) {
            }
        }
        v.check(ok, "3D momentum mix triangle inequality");
    }

    std::cout << (v.violations == 0 ? "verify: all checks passed"
                                    : "verify: violations found")
              << '\n';
    return v.violations == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"kepcol: collisional dynamics of two bodies on co-focal "
                 "Keplerian orbits"};
    app.require_subcommand(1);

    // sigma
    double mu1 = 0.5;
    auto* cmd_sigma = app.add_subcommand("sigma", "critical threshold for a mass split");
    cmd_sigma->add_option("--mu1", mu1, "mass fraction of body 1 (<= 0.5)")->required();

    // scan
    double el2 = -0.445, L = 1.0, value_floor = 0.0, value_ceil = -1.0;
    int res = 800;
    std::string kind = "region", out_path = ".";
    auto* cmd_scan = app.add_subcommand("scan", "rasterize region classes or gap values");
    cmd_scan->add_option("--mu1", mu1)->required();
    cmd_scan->add_option("--el2", el2, "E*L^2")->required();
    cmd_scan->add_option("--L", L, "angular momentum scale (default 1)");
    cmd_scan->add_option("--kind", kind)->check(CLI::IsMember({"region", "dbar"}));
    cmd_scan->add_option("--res", res, "cells per axis (default 800)");
    cmd_scan->add_option("--out", out_path,
                         "output file (.csv/.pgm) or directory for both");
    cmd_scan->add_option("--floor", value_floor, "dbar black level (default 0)");
    cmd_scan->add_option("--ceil", value_ceil, "dbar white level (default L^2/10)");

    // simulate
    double eps = 0.0, disk_d = 0.0, dl0 = 0.0, de0 = 0.0, domega0 = kPi;
    long steps = 10000;
    std::uint64_t seed = 0;
    std::string mode = "points", out_base = "trajectory", impact_law = "half";
    bool eps_uniform = false, pick_first = false, resample = false;
    auto* cmd_sim = app.add_subcommand("simulate", "run the seeded collision event map");
    cmd_sim->add_option("--mu1", mu1)->required();
    cmd_sim->add_option("--el2", el2)->required();
    cmd_sim->add_option("--L", L);
    cmd_sim->add_option("--eps", eps, "inelasticity in [0, 0.5]");
    cmd_sim->add_flag("--eps-uniform", eps_uniform, "sample eps per event");
    cmd_sim->add_option("--steps", steps)->required();
    cmd_sim->add_option("--seed", seed)->required();
    cmd_sim->add_option("--mode", mode)->check(CLI::IsMember({"points", "disks"}));
    cmd_sim->add_option("--d", disk_d, "contact distance D (disks mode)");
    cmd_sim->add_option("--dl0", dl0, "initial dL");
    cmd_sim->add_option("--de0", de0, "initial dE");
    cmd_sim->add_option("--domega0", domega0, "initial dOmega (default pi)");
    cmd_sim->add_flag("--pick-first", pick_first, "always take the first intersection");
    cmd_sim->add_option("--impact-law", impact_law)->check(CLI::IsMember({"half", "disk"}));
    cmd_sim->add_flag("--resample-domega", resample, "redraw dOmega after each event");
    cmd_sim->add_option("--out", out_base, "output base path (default 'trajectory')");

    // escape-search
    long trials = 1000;
    auto* cmd_esc = app.add_subcommand("escape-search",
                                       "search seeds for a non-elliptic event");
    cmd_esc->add_option("--mu1", mu1)->required();
    cmd_esc->add_option("--el2", el2)->required();
    cmd_esc->add_option("--L", L);
    cmd_esc->add_option("--eps", eps);
    cmd_esc->add_option("--trials", trials);
    cmd_esc->add_option("--steps", steps);
    cmd_esc->add_option("--seed", seed)->required();
    cmd_esc->add_option("--out", out_base, "certificate base path (default 'escape')");

    // critical-d
    auto* cmd_cd = app.add_subcommand("critical-d", "critical contact distance");
    cmd_cd->add_option("--mu1", mu1)->required();
    cmd_cd->add_option("--el2", el2)->required();
    cmd_cd->add_option("--L", L);

    // verify
    auto* cmd_verify = app.add_subcommand("verify", "run the invariant self-checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(cmd_sigma)) {
            std::cout << sigma_json(mu1).dump(2) << '\n';
            return 0;
        }

        if (app.got_subcommand(cmd_scan)) {
            const double E = el2 / (L * L);
            const RegionParams rp(MassSplit::from_mu1(mu1), E, L);
            const GridWindow w = scan::default_window(rp);
            const int threads = env_threads();
            RegionGrid grid;
            if (kind == "region") {
                grid = scan::region_scan(rp, w, res, res, threads);
            } else {
                if (value_ceil < 0.0) value_ceil = L * L / 10.0;
                grid = scan::dbar_scan(rp, w, res, res, value_floor, value_ceil, threads);
            }
            namespace fs = std::filesystem;
            const ScanKind k = kind == "region" ? ScanKind::Region : ScanKind::Dbar;
            std::vector<std::string> written;
            if (out_path.size() > 4 && out_path.substr(out_path.size() - 4) == ".csv") {
                scan::write_grid_csv(grid, out_path);
                written.push_back(out_path);
            } else if (out_path.size() > 4 &&
                       out_path.substr(out_path.size() - 4) == ".pgm") {
                scan::write_grid_pgm(grid, out_path);
                written.push_back(out_path);
            } else {
                fs::create_directories(out_path);
                for (const char* ext : {"csv", "pgm"}) {
                    const fs::path p =
                        fs::path(out_path) / scan::default_filename(k, mu1, el2, ext);
                    scan::write_grid(grid, ext, p.string());
                    written.push_back(p.string());
                }
            }
            json j;
            j["written"] = written;
            j["config"] = {{"mu1", mu1}, {"el2", el2},   {"L", L},
                           {"kind", kind}, {"res", res}, {"threads", threads}};
            std::cout << j.dump(2) << '\n';
            return 0;
        }

        if (app.got_subcommand(cmd_sim)) {
            SimConfig cfg;
            cfg.masses = MassSplit::from_mu1(mu1);
            cfg.inv_E = el2 / (L * L);
            cfg.inv_L = L;
            cfg.dL0 = dl0;
            cfg.dE0 = de0;
            cfg.dOmega0 = domega0;
            cfg.epsilon = eps;
            cfg.eps_policy =
                eps_uniform ? EpsilonPolicy::UniformPerEvent : EpsilonPolicy::Fixed;
            cfg.mode = (mode == "disks") ? SimMode::Disks : SimMode::Points;
            cfg.disk_diameter = disk_d;
            cfg.n_steps = steps;
            cfg.rng_seed = seed;
            cfg.pick = pick_first ? PickRule::AlwaysFirst : PickRule::UniformChoice;
            cfg.impact_law = (impact_law == "disk") ? ImpactLaw::DiskLimit
                                                    : ImpactLaw::HalfCircleUniform;
            cfg.resample_domega = resample;
            const auto [traj, rep] = dynamics::run(cfg);
            write_text(out_base + ".csv", traj.to_csv());
            write_text(out_base + "_report.json", rep.to_json(cfg) + "\n");
            std::cout << rep.to_json(cfg) << '\n';
            return 0;
        }

        if (app.got_subcommand(cmd_esc)) {
            SimConfig cfg;
            cfg.masses = MassSplit::from_mu1(mu1);
            cfg.inv_E = el2 / (L * L);
            cfg.inv_L = L;
            cfg.epsilon = eps;
            cfg.n_steps = steps;
            cfg.rng_seed = seed;
            if (out_base == "trajectory") out_base = "escape";
            const auto found =
                dynamics::escape_search(cfg, trials, env_threads());
            json j;
            j["trials"] = trials;
            j["steps_per_trial"] = steps;
            j["found"] = found.has_value();
            if (found) {
                j["seed_of_certificate"] = found->config.rng_seed;
                write_text(out_base + "_certificate.csv", found->to_csv());
                j["certificate"] = out_base + "_certificate.csv";
            }
            std::cout << j.dump(2) << '\n';
            return 0;
        }

        if (app.got_subcommand(cmd_cd)) {
            const MassSplit m = MassSplit::from_mu1(mu1);
            const double d_rel = regions::critical_D_numeric(m, el2);
            json j;
            j["mu1"] = mu1;
            j["el2"] = el2;
            j["L"] = L;
            j["critical_D_per_L2"] = d_rel;
            j["critical_D"] = d_rel * L * L;
            if (mu1 == 0.5 && el2 < -27.0 / 64.0) {
                // invert e -> gamma: gamma = (1 - e^2)/(1 - 2e), D = 2 L^2/gamma
                double lo = 1e-12, hi = 0.5 - 1e-12;
                for (int it = 0; it < 200; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double val =
                        -(1 - mid * mid) * (1 + mid) * (1 + mid) / (16 * mid * mid);
                    (val < el2 ? lo : hi) = mid;
                }
                const double e = 0.5 * (lo + hi);
                const double gamma = (1.0 - e * e) / (1.0 - 2.0 * e);
                j["critical_D_closed_form_per_L2"] = 2.0 / gamma;
                j["critical_D_closed_form"] = 2.0 * L * L / gamma;
            }
            std::cout << j.dump(2) << '\n';
            return 0;
        }

        if (app.got_subcommand(cmd_verify)) return run_verify();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
