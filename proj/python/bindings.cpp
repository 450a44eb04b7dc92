#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kepcol/collision.hpp"
#include "kepcol/orbit_dynamics.hpp"
#include "kepcol/scan_io.hpp"
#include "kepcol/spatial3d.hpp"

namespace py = pybind11;
using namespace kepcol;

namespace {

Vec2 to_vec2(const std::pair<double, double>& p) { return {p.first, p.second}; }
std::pair<double, double> from_vec2(const Vec2& v) { return {v.x, v.y}; }
Vec3 to_vec3(const std::tuple<double, double, double>& p) {
    return {std::get<0>(p), std::get<1>(p), std::get<2>(p)};
}

}  // namespace

PYBIND11_MODULE(_kepcol, m) {
    m.doc() = "Collisional dynamics of two bodies on co-focal Keplerian orbits";

    py::register_exception<AdmissibilityError>(m, "AdmissibilityError");
    py::register_exception<NotIncomingError>(m, "NotIncomingError");
    py::register_exception<NoCollisionPossibleError>(m, "NoCollisionPossibleError");
    py::register_exception<DegenerateCoincidentError>(m, "DegenerateCoincidentError");
    py::register_exception<VoidRegionError>(m, "VoidRegionError");
    py::register_exception<MassOrderError>(m, "MassOrderError");
    py::register_exception<GammaRangeError>(m, "GammaRangeError");

    py::class_<MassSplit>(m, "MassSplit")
        .def(py::init<double, double>(), py::arg("mu1"), py::arg("mu2"))
        .def_static("from_mu1", &MassSplit::from_mu1, py::arg("mu1"))
        .def_readonly("mu1", &MassSplit::mu1)
        .def_readonly("mu2", &MassSplit::mu2);

    py::enum_<ConicClass>(m, "ConicClass")
        .value("Elliptic", ConicClass::Elliptic)
        .value("Parabolic", ConicClass::Parabolic)
        .value("Hyperbolic", ConicClass::Hyperbolic)
        .value("Degenerate", ConicClass::Degenerate);

    py::class_<OrbitElements>(m, "OrbitElements")
        .def(py::init<double, double, double, double>(), py::arg("energy"),
             py::arg("ang_mom"), py::arg("periapsis_angle") = 0.0,
             py::arg("tol") = kTolClass)
        .def_readwrite("energy", &OrbitElements::energy)
        .def_readwrite("ang_mom", &OrbitElements::ang_mom)
        .def_readwrite("periapsis_angle", &OrbitElements::periapsis_angle)
        .def("eccentricity", &OrbitElements::eccentricity, py::arg("tol") = kTolClass);

    m.def("eccentricity", &kepler::eccentricity, py::arg("energy"), py::arg("ang_mom"),
          py::arg("tol") = kTolClass);
    m.def("scaled_el2", &kepler::scaled_el2, py::arg("energy"), py::arg("ang_mom"),
          py::arg("grav_param"));
    m.def(
        "state_at_anomaly",
        [](const OrbitElements& o, double theta) {
            const PlanarState s = kepler::state_at_anomaly(o, theta);
            return std::make_pair(from_vec2(s.position), from_vec2(s.velocity));
        },
        py::arg("orbit"), py::arg("theta"));
    m.def(
        "elements_from_state",
        [](std::pair<double, double> x, std::pair<double, double> v) {
            return kepler::elements_from_state({to_vec2(x), to_vec2(v)});
        },
        py::arg("position"), py::arg("velocity"));
    m.def(
        "classify",
        [](const OrbitElements& o, double tol) { return kepler::classify(o, tol); },
        py::arg("orbit"), py::arg("tol") = kTolClass);

    m.def(
        "collide",
        [](std::pair<double, double> v1, std::pair<double, double> v2,
           const MassSplit& masses, std::pair<double, double> normal, double eps) {
            const auto out = collision::collide(to_vec2(v1), to_vec2(v2), masses,
                                                {to_vec2(normal), eps});
            return py::make_tuple(from_vec2(out.v1_out), from_vec2(out.v2_out),
                                  out.energy_loss);
        },
        py::arg("v1"), py::arg("v2"), py::arg("masses"), py::arg("normal"),
        py::arg("epsilon"));
    m.def(
        "post_collision_relative_velocity",
        [](std::pair<double, double> w, std::pair<double, double> normal, double eps) {
            return from_vec2(collision::post_collision_relative_velocity(
                to_vec2(w), {to_vec2(normal), eps}));
        },
        py::arg("w"), py::arg("normal"), py::arg("epsilon"));
    m.def(
        "single_collision_safe_bound",
        [](std::pair<double, double> x1, std::pair<double, double> x2,
           std::pair<double, double> v, const MassSplit& masses) {
            return collision::single_collision_safe_bound(to_vec2(x1), to_vec2(x2),
                                                          to_vec2(v), masses);
        },
        py::arg("x1"), py::arg("x2"), py::arg("v_com"), py::arg("masses"));

    py::class_<PairState>(m, "PairState")
        .def(py::init<double, double, double, double, double, MassSplit>(),
             py::arg("dL"), py::arg("dE"), py::arg("dOmega"), py::arg("E"),
             py::arg("L"), py::arg("masses"))
        .def_readwrite("dL", &PairState::dL)
        .def_readwrite("dE", &PairState::dE)
        .def_readwrite("dOmega", &PairState::dOmega)
        .def_readonly("inv_E", &PairState::inv_E)
        .def_readonly("inv_L", &PairState::inv_L)
        .def("L1", &PairState::L1)
        .def("L2", &PairState::L2)
        .def("E1", &PairState::E1)
        .def("E2", &PairState::E2)
        .def("e1", &PairState::e1, py::arg("tol") = kTolClass)
        .def("e2", &PairState::e2, py::arg("tol") = kTolClass);

    py::class_<IntersectionSolution>(m, "IntersectionSolution")
        .def_readonly("theta1", &IntersectionSolution::theta1)
        .def_readonly("theta2", &IntersectionSolution::theta2)
        .def_readonly("tangent", &IntersectionSolution::tangent);

    m.def("intersects", &geometry::intersects, py::arg("pair"));
    m.def("intersection_anomalies", &geometry::intersection_anomalies, py::arg("pair"));
    m.def(
        "dbar",
        [](const PairState& p) {
            const auto r = geometry::dbar(p);
            return py::make_tuple(r.value, r.inner_orbit);
        },
        py::arg("pair"));
    m.def("dbar_partial_dL", &geometry::dbar_partial_dL, py::arg("pair"),
          py::arg("tol") = kTolClass);

    py::class_<RegionParams>(m, "RegionParams")
        .def(py::init<MassSplit, double, double>(), py::arg("masses"), py::arg("E"),
             py::arg("L"))
        .def_readonly("inv_E", &RegionParams::inv_E)
        .def_readonly("inv_L", &RegionParams::inv_L)
        .def("el2", &RegionParams::el2);

    py::class_<CriticalValues>(m, "CriticalValues")
        .def_readonly("sigma", &CriticalValues::sigma)
        .def_readonly("e_crit", &CriticalValues::e_crit)
        .def_readonly("L1_crit", &CriticalValues::L1_crit)
        .def_readonly("L2_crit", &CriticalValues::L2_crit);

    m.def("admissible", &regions::admissible, py::arg("pair"));
    m.def("in_I_eta", &regions::in_I_eta, py::arg("pair"), py::arg("eta"));
    m.def("pair_at", &regions::pair_at, py::arg("params"), py::arg("dL"), py::arg("dE"),
          py::arg("dOmega") = 3.1415926535897932384626433832795);
    m.def("i_pi_boundary", &regions::i_pi_boundary, py::arg("dL"), py::arg("params"));
    m.def("delta_L_bound", &regions::delta_L_bound, py::arg("params"));
    m.def("sigma", [](double mu1) { return regions::sigma(MassSplit::from_mu1(mu1)); },
          py::arg("mu1"));
    m.def("sigma_of", &regions::sigma, py::arg("masses"));
    m.def("critical_EL2_equal_mass", &regions::critical_EL2_equal_mass,
          py::arg("gamma"));
    m.def(
        "critical_D_numeric",
        [](double mu1, double el2) {
            return regions::critical_D_numeric(MassSplit::from_mu1(mu1), el2);
        },
        py::arg("mu1"), py::arg("el2"));
    m.def("max_E1_over_Ipi", &regions::max_E1_over_Ipi, py::arg("params"));
    m.def("potential_margin", &regions::potential_margin, py::arg("params"),
          py::arg("U"), py::arg("total_mass"), py::arg("D"));

    py::enum_<EpsilonPolicy>(m, "EpsilonPolicy")
        .value("Fixed", EpsilonPolicy::Fixed)
        .value("UniformPerEvent", EpsilonPolicy::UniformPerEvent);
    py::enum_<SimMode>(m, "SimMode")
        .value("Points", SimMode::Points)
        .value("Disks", SimMode::Disks);

    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init<>())
        .def_readwrite("masses", &SimConfig::masses)
        .def_readwrite("inv_E", &SimConfig::inv_E)
        .def_readwrite("inv_L", &SimConfig::inv_L)
        .def_readwrite("dL0", &SimConfig::dL0)
        .def_readwrite("dE0", &SimConfig::dE0)
        .def_readwrite("dOmega0", &SimConfig::dOmega0)
        .def_readwrite("eps_policy", &SimConfig::eps_policy)
        .def_readwrite("epsilon", &SimConfig::epsilon)
        .def_readwrite("mode", &SimConfig::mode)
        .def_readwrite("disk_diameter", &SimConfig::disk_diameter)
        .def_readwrite("n_steps", &SimConfig::n_steps)
        .def_readwrite("rng_seed", &SimConfig::rng_seed)
        .def_readwrite("resample_domega", &SimConfig::resample_domega);

    py::class_<InvarianceReport>(m, "InvarianceReport")
        .def_readonly("all_elliptic", &InvarianceReport::all_elliptic)
        .def_readonly("max_e1", &InvarianceReport::max_e1)
        .def_readonly("max_e2", &InvarianceReport::max_e2)
        .def_readonly("max_abs_L1", &InvarianceReport::max_abs_L1)
        .def_readonly("max_abs_L2", &InvarianceReport::max_abs_L2)
        .def_readonly("max_abs_dL", &InvarianceReport::max_abs_dL)
        .def_readonly("dL_within_bound", &InvarianceReport::dL_within_bound)
        .def_readonly("n_events", &InvarianceReport::n_events)
        .def_readonly("ipi_violations", &InvarianceReport::ipi_violations)
        .def_readonly("first_escape_step", &InvarianceReport::first_escape_step)
        .def_readonly("absorbed_at_step", &InvarianceReport::absorbed_at_step)
        .def_readonly("final_inv_E", &InvarianceReport::final_inv_E);

    py::class_<Trajectory>(m, "Trajectory")
        .def("to_csv", &Trajectory::to_csv)
        .def("n_events", [](const Trajectory& t) { return t.events.size(); });

    m.def(
        "run",
        [](const SimConfig& cfg) {
            auto [traj, rep] = dynamics::run(cfg);
            return py::make_tuple(std::move(traj), rep);
        },
        py::arg("config"));
    m.def("escape_search", &dynamics::escape_search, py::arg("config"),
          py::arg("trials"), py::arg("n_threads") = 1);

    py::class_<ReducedPair>(m, "ReducedPair")
        .def_readonly("orbit1", &ReducedPair::orbit1)
        .def_readonly("orbit2", &ReducedPair::orbit2)
        .def_readonly("tilde_L", &ReducedPair::tilde_L)
        .def_readonly("tilde_E", &ReducedPair::tilde_E)
        .def_readonly("vec_L_norm", &ReducedPair::vec_L_norm);

    m.def(
        "reduce_to_planar",
        [](std::tuple<double, double, double> x1, std::tuple<double, double, double> v1,
           std::tuple<double, double, double> x2, std::tuple<double, double, double> v2,
           const MassSplit& masses) {
            return spatial::reduce_to_planar({to_vec3(x1), to_vec3(v1)},
                                             {to_vec3(x2), to_vec3(v2)}, masses);
        },
        py::arg("x1"), py::arg("v1"), py::arg("x2"), py::arg("v2"), py::arg("masses"));
    m.def(
        "invariant_check_3d",
        [](std::tuple<double, double, double> x1, std::tuple<double, double, double> v1,
           std::tuple<double, double, double> x2, std::tuple<double, double, double> v2,
           const MassSplit& masses, double U, double total_mass, double D) {
            return spatial::invariant_check_3d({to_vec3(x1), to_vec3(v1)},
                                               {to_vec3(x2), to_vec3(v2)}, masses, U,
                                               total_mass, D);
        },
        py::arg("x1"), py::arg("v1"), py::arg("x2"), py::arg("v2"), py::arg("masses"),
        py::arg("U") = 0.0, py::arg("total_mass") = 1.0, py::arg("D") = 0.0);

    py::enum_<ScanKind>(m, "ScanKind")
        .value("Region", ScanKind::Region)
        .value("Dbar", ScanKind::Dbar);

    py::class_<GridWindow>(m, "GridWindow")
        .def(py::init<>())
        .def_readwrite("dl_min", &GridWindow::dl_min)
        .def_readwrite("dl_max", &GridWindow::dl_max)
        .def_readwrite("de_min", &GridWindow::de_min)
        .def_readwrite("de_max", &GridWindow::de_max);

    py::class_<RegionGrid>(m, "RegionGrid")
        .def_readonly("nx", &RegionGrid::nx)
        .def_readonly("ny", &RegionGrid::ny)
        .def_readonly("mu1", &RegionGrid::mu1)
        .def_readonly("cells", &RegionGrid::cells)
        .def("at", [](const RegionGrid& g, int i, int j) { return g.at(i, j); })
        .def("cell_dl", &RegionGrid::cell_dl)
        .def("cell_de", &RegionGrid::cell_de);

    m.def("default_window", &scan::default_window, py::arg("params"));
    m.def("region_scan", &scan::region_scan, py::arg("params"), py::arg("window"),
          py::arg("nx"), py::arg("ny"), py::arg("n_threads") = 0);
    m.def("dbar_scan", &scan::dbar_scan, py::arg("params"), py::arg("window"),
          py::arg("nx"), py::arg("ny"), py::arg("value_floor"), py::arg("value_ceil"),
          py::arg("n_threads") = 0);
    m.def("write_grid", &scan::write_grid, py::arg("grid"), py::arg("format"),
          py::arg("path"));
    m.def("read_grid_csv", &scan::read_grid_csv, py::arg("path"));
    m.def("count_A_components", &scan::count_A_components, py::arg("grid"));
    m.def("min_gap_on_line", &scan::min_gap_on_line, py::arg("grid"), py::arg("de_line"));

    m.attr("__version__") = "0.1.0";
}
