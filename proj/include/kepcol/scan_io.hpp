#pragma once

#include <string>
#include <vector>

#include "kepcol/regions.hpp"

namespace kepcol {

enum class ScanKind { Region, Dbar };

/// Fixed 6-symbol classification alphabet for region scans.
enum class CellClass : int {
    OutsideA = 0,          // no orbit pair exists
    EllipticNonMember = 1, // in A, both elliptic, not in I_pi
    IPi = 2,               // in I_pi but not I_{pi/2}
    IPiHalf = 3,           // in I_{pi/2}
    Hyperbolic1 = 4,       // in A, E1 >= 0, not in I_pi
    Hyperbolic2 = 5,       // in A, E2 >= 0, not in I_pi
};

struct GridWindow {
    double dl_min = 0.0, dl_max = 0.0;
    double de_min = 0.0, de_max = 0.0;
};

/// Rectangular (dL, dE) raster. Cells are row-major with j = 0 the
/// minimum-dE row; region scans store the class code, dbar scans store
/// the raw gap value (NaN outside the gap function's domain).
struct RegionGrid {
    ScanKind kind = ScanKind::Region;
    int nx = 0, ny = 0;
    GridWindow window;
    double mu1 = 0.0;
    double inv_E = 0.0;
    double inv_L = 0.0;
    double value_floor = 0.0;  // dbar rendering range (PGM only)
    double value_ceil = 0.0;
    std::vector<double> cells;

    double cell_dl(int i) const;
    double cell_de(int j) const;
    double at(int i, int j) const { return cells[static_cast<size_t>(j) * nx + i]; }
    double& at(int i, int j) { return cells[static_cast<size_t>(j) * nx + i]; }
    double el2() const { return inv_E * inv_L * inv_L; }
};

namespace scan {

/// Default window: dL spans the prograde strip (-L/mu2, L/mu1) widened by
/// 10%, dE spans the both-elliptic strip (E/mu1, -E/mu2) widened by 50%.
GridWindow default_window(const RegionParams& rp);

RegionGrid region_scan(const RegionParams& rp, const GridWindow& w, int nx, int ny,
                       int n_threads = 0);

RegionGrid dbar_scan(const RegionParams& rp, const GridWindow& w, int nx, int ny,
                     double value_floor, double value_ceil, int n_threads = 0);

void write_grid(const RegionGrid& g, const std::string& format, const std::string& path);
void write_grid_csv(const RegionGrid& g, const std::string& path);
void write_grid_pgm(const RegionGrid& g, const std::string& path);
RegionGrid read_grid_csv(const std::string& path);

/// Conventional file name `<kind>_mu<mu1>_EL2<value>.<ext>`.
std::string default_filename(ScanKind kind, double mu1, double el2,
                             const std::string& ext);

/// Number of 4-connected components of the cells belonging to A
/// (region scans: every class except OutsideA).
int count_A_components(const RegionGrid& g);

/// Cells classified as I_pi members (IPi or IPiHalf) whose center lies in
/// E1 >= 0 or E2 >= 0.
int count_ipi_cells_in_hyperbolic_halfplane(const RegionGrid& g);

/// Minimum of the dbar values linearly interpolated onto the horizontal
/// line dE = de_line (NaN when no column has finite bracketing cells).
double min_gap_on_line(const RegionGrid& g, double de_line);

}  // namespace scan
}  // namespace kepcol
