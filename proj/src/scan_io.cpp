#include "kepcol/scan_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <thread>

namespace kepcol {

double RegionGrid::cell_dl(int i) const {
    return window.dl_min + (window.dl_max - window.dl_min) * (i + 0.5) / nx;
}

double RegionGrid::cell_de(int j) const {
    return window.de_min + (window.de_max - window.de_min) * (j + 0.5) / ny;
}

namespace scan {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void for_each_row(int ny, int n_threads, const std::function<void(int)>& body) {
    if (n_threads <= 0)
        n_threads = static_cast<int>(std::thread::hardware_concurrency());
    n_threads = std::max(1, std::min(n_threads, ny));
    if (n_threads == 1) {
        for (int j = 0; j < ny; ++j) body(j);
        return;
    }
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) {
        pool.emplace_back([&, t] {
            for (int j = t; j < ny; j += n_threads) body(j);
        });
    }
    for (auto& th : pool) th.join();
}

CellClass classify_cell(const RegionParams& rp, double dl, double de) {
    const PairState p = regions::pair_at(rp, dl, de);
    if (!regions::admissible(p)) return CellClass::OutsideA;
    // formal membership first: the intersection sets extend across the
    // critical lines (orbit i hyperbolic for Ei >= 0)
    const double lhs_half = 1.0 + p.L2() * p.L2() * p.E1() + p.L1() * p.L1() * p.E2();
    if (lhs_half >= 0.0) return CellClass::IPiHalf;
    if (p.e1() * p.e2() >= -lhs_half) return CellClass::IPi;
    if (p.E1() >= 0.0) return CellClass::Hyperbolic1;
    if (p.E2() >= 0.0) return CellClass::Hyperbolic2;
    return CellClass::EllipticNonMember;
}

std::string format_g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

}  // namespace

GridWindow default_window(const RegionParams& rp) {
    const double L = rp.inv_L;
    const double E = rp.inv_E;
    const MassSplit& m = rp.masses;
    // prograde strip: L1 > 0 for dL > -L/mu2, L2 > 0 for dL < L/mu1
    const double dl_lo = -L / m.mu2, dl_hi = L / m.mu1;
    const double dl_c = 0.5 * (dl_lo + dl_hi), dl_h = 0.5 * (dl_hi - dl_lo);
    // both-elliptic strip: dE in (E/mu1, -E/mu2)
    const double de_lo = E / m.mu1, de_hi = -E / m.mu2;
    const double de_c = 0.5 * (de_lo + de_hi), de_h = 0.5 * (de_hi - de_lo);
    GridWindow w;
    w.dl_min = dl_c - 1.1 * dl_h;
    w.dl_max = dl_c + 1.1 * dl_h;
    w.de_min = de_c - 1.5 * de_h;
    w.de_max = de_c + 1.5 * de_h;
    return w;
}

RegionGrid region_scan(const RegionParams& rp, const GridWindow& w, int nx, int ny,
                       int n_threads) {
    if (nx < 2 || ny < 2)
        throw std::invalid_argument("scan resolution must be >= 2 per axis");
    RegionGrid g;
    g.kind = ScanKind::Region;
    g.nx = nx;
    g.ny = ny;
    g.window = w;
    g.mu1 = rp.masses.mu1;
    g.inv_E = rp.inv_E;
    g.inv_L = rp.inv_L;
    g.cells.assign(static_cast<size_t>(nx) * ny, 0.0);
    for_each_row(ny, n_threads, [&](int j) {
        const double de = g.cell_de(j);
        for (int i = 0; i < nx; ++i)
            g.at(i, j) = static_cast<double>(classify_cell(rp, g.cell_dl(i), de));
    });
    return g;
}

RegionGrid dbar_scan(const RegionParams& rp, const GridWindow& w, int nx, int ny,
                     double value_floor, double value_ceil, int n_threads) {
    if (nx < 2 || ny < 2)
        throw std::invalid_argument("scan resolution must be >= 2 per axis");
    RegionGrid g;
    g.kind = ScanKind::Dbar;
    g.nx = nx;
    g.ny = ny;
    g.window = w;
    g.mu1 = rp.masses.mu1;
    g.inv_E = rp.inv_E;
    g.inv_L = rp.inv_L;
    g.value_floor = value_floor;
    g.value_ceil = value_ceil;
    g.cells.assign(static_cast<size_t>(nx) * ny, kNaN);
    for_each_row(ny, n_threads, [&](int j) {
        const double de = g.cell_de(j);
        for (int i = 0; i < nx; ++i) {
            try {
                const PairState p = regions::pair_at(rp, g.cell_dl(i), de);
                g.at(i, j) = geometry::dbar(p).value;
            } catch (const Error&) {
                g.at(i, j) = kNaN;  // outside the gap function's domain
            }
        }
    });
    return g;
}

void write_grid(const RegionGrid& g, const std::string& format,
                const std::string& path) {
    if (format == "csv") {
        write_grid_csv(g, path);
    } else if (format == "pgm") {
        write_grid_pgm(g, path);
    } else {
        throw std::invalid_argument("unknown grid format: " + format);
    }
}

void write_grid_csv(const RegionGrid& g, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + path);
    f << "# kepcol grid v1\n";
    f << "# tool=kepcol 0.1.0\n";
    f << "# kind=" << (g.kind == ScanKind::Region ? "region" : "dbar") << "\n";
    f << "# mu1=" << format_g17(g.mu1) << "\n";
    f << "# E=" << format_g17(g.inv_E) << "\n";
    f << "# L=" << format_g17(g.inv_L) << "\n";
    f << "# el2=" << format_g17(g.el2()) << "\n";
    f << "# nx=" << g.nx << "\n# ny=" << g.ny << "\n";
    f << "# dl_min=" << format_g17(g.window.dl_min) << "\n";
    f << "# dl_max=" << format_g17(g.window.dl_max) << "\n";
    f << "# de_min=" << format_g17(g.window.de_min) << "\n";
    f << "# de_max=" << format_g17(g.window.de_max) << "\n";
    f << "# value_floor=" << format_g17(g.value_floor) << "\n";
    f << "# value_ceil=" << format_g17(g.value_ceil) << "\n";
    f << "x,y,value\n";
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            f << format_g17(g.cell_dl(i)) << ',' << format_g17(g.cell_de(j)) << ','
              << format_g17(g.at(i, j)) << '\n';
    if (!f.good()) throw IoError("write failed: " + path);
}

RegionGrid read_grid_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open for reading: " + path);
    RegionGrid g;
    std::string line;
    auto meta = [&](const std::string& l, const char* key) -> const char* {
        const std::string tag = std::string("# ") + key + "=";
        if (l.rfind(tag, 0) == 0) return l.c_str() + tag.size();
        return nullptr;
    };
    std::vector<double> values;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (const char* v = meta(line, "kind"))
                g.kind = (std::strcmp(v, "region") == 0) ? ScanKind::Region
                                                         : ScanKind::Dbar;
            else if (const char* v2 = meta(line, "mu1")) g.mu1 = std::strtod(v2, nullptr);
            else if (const char* v3 = meta(line, "E")) g.inv_E = std::strtod(v3, nullptr);
            else if (const char* v4 = meta(line, "L")) g.inv_L = std::strtod(v4, nullptr);
            else if (const char* v5 = meta(line, "nx")) g.nx = std::atoi(v5);
            else if (const char* v6 = meta(line, "ny")) g.ny = std::atoi(v6);
            else if (const char* v7 = meta(line, "dl_min")) g.window.dl_min = std::strtod(v7, nullptr);
            else if (const char* v8 = meta(line, "dl_max")) g.window.dl_max = std::strtod(v8, nullptr);
            else if (const char* v9 = meta(line, "de_min")) g.window.de_min = std::strtod(v9, nullptr);
            else if (const char* va = meta(line, "de_max")) g.window.de_max = std::strtod(va, nullptr);
            else if (const char* vb = meta(line, "value_floor")) g.value_floor = std::strtod(vb, nullptr);
            else if (const char* vc = meta(line, "value_ceil")) g.value_ceil = std::strtod(vc, nullptr);
            continue;
        }
        if (line.rfind("x,y,", 0) == 0) continue;
        const char* s = line.c_str();
        char* end = nullptr;
        std::strtod(s, &end);  // x
        if (end && *end == ',') s = end + 1;
        std::strtod(s, &end);  // y
        if (end && *end == ',') s = end + 1;
        values.push_back(std::strtod(s, nullptr));
    }
    if (g.nx < 1 || g.ny < 1 ||
        values.size() != static_cast<size_t>(g.nx) * g.ny)
        throw IoError("malformed grid csv: " + path);
    g.cells = std::move(values);
    return g;
}

void write_grid_pgm(const RegionGrid& g, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + path);
    f << "P5\n";
    f << "# kepcol 0.1.0, kind=" << (g.kind == ScanKind::Region ? "region" : "dbar")
      << " mu1=" << format_num(g.mu1) << " el2=" << format_num(g.el2()) << "\n";
    if (g.kind == ScanKind::Region) {
        f << "# class->gray: outsideA=255 elliptic=220 Ipi=120 IpiHalf=40 "
             "hyp1=180 hyp2=80\n";
    } else {
        f << "# linear map: value<=" << format_num(g.value_floor)
          << " -> black, value>=" << format_num(g.value_ceil)
          << " -> white, undefined -> white\n";
    }
    f << "# rows top to bottom = dE max to min\n";
    f << g.nx << ' ' << g.ny << "\n255\n";
    static const unsigned char lut[6] = {255, 220, 120, 40, 180, 80};
    std::vector<unsigned char> row(static_cast<size_t>(g.nx));
    for (int j = g.ny - 1; j >= 0; --j) {
        for (int i = 0; i < g.nx; ++i) {
            const double v = g.at(i, j);
            unsigned char gray = 255;
            if (g.kind == ScanKind::Region) {
                const int c = static_cast<int>(v);
                gray = (c >= 0 && c < 6) ? lut[c] : 255;
            } else if (std::isfinite(v)) {
                const double t = (v - g.value_floor) /
                                 (g.value_ceil - g.value_floor);
                gray = static_cast<unsigned char>(
                    std::lround(255.0 * std::clamp(t, 0.0, 1.0)));
            }
            row[i] = gray;
        }
        f.write(reinterpret_cast<const char*>(row.data()), g.nx);
    }
    if (!f.good()) throw IoError("write failed: " + path);
}

std::string default_filename(ScanKind kind, double mu1, double el2,
                             const std::string& ext) {
    std::string s = (kind == ScanKind::Region) ? "region" : "dbar";
    s += "_mu" + format_num(mu1) + "_EL2" + format_num(el2) + "." + ext;
    return s;
}

int count_A_components(const RegionGrid& g) {
    std::vector<char> seen(g.cells.size(), 0);
    auto in_A = [&](int i, int j) {
        return static_cast<int>(g.at(i, j)) != static_cast<int>(CellClass::OutsideA);
    };
    int components = 0;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const size_t id = static_cast<size_t>(j) * g.nx + i;
            if (seen[id] || !in_A(i, j)) continue;
            ++components;
            std::queue<std::pair<int, int>> q;
            q.push({i, j});
            seen[id] = 1;
            while (!q.empty()) {
                auto [ci, cj] = q.front();
                q.pop();
                const int di[4] = {1, -1, 0, 0};
                const int dj[4] = {0, 0, 1, -1};
                for (int k = 0; k < 4; ++k) {
                    const int ni = ci + di[k], nj = cj + dj[k];
                    if (ni < 0 || nj < 0 || ni >= g.nx || nj >= g.ny) continue;
                    const size_t nid = static_cast<size_t>(nj) * g.nx + ni;
                    if (!seen[nid] && in_A(ni, nj)) {
                        seen[nid] = 1;
                        q.push({ni, nj});
                    }
                }
            }
        }
    }
    return components;
}

int count_ipi_cells_in_hyperbolic_halfplane(const RegionGrid& g) {
    const MassSplit m = MassSplit::from_mu1(g.mu1);
    int count = 0;
    for (int j = 0; j < g.ny; ++j) {
        const double de = g.cell_de(j);
        const double E1 = g.inv_E + m.mu2 * de;
        const double E2 = g.inv_E - m.mu1 * de;
        if (E1 < 0.0 && E2 < 0.0) continue;
        for (int i = 0; i < g.nx; ++i) {
            const int c = static_cast<int>(g.at(i, j));
            if (c == static_cast<int>(CellClass::IPi) ||
                c == static_cast<int>(CellClass::IPiHalf))
                ++count;
        }
    }
    return count;
}

double min_gap_on_line(const RegionGrid& g, double de_line) {
    const double de0 = g.cell_de(0);
    const double step = (g.window.de_max - g.window.de_min) / g.ny;
    const double tj = (de_line - de0) / step;
    const int j0 = static_cast<int>(std::floor(tj));
    const int j1 = j0 + 1;
    if (j0 < 0 || j1 >= g.ny) return kNaN;
    const double frac = tj - j0;
    double best = kNaN;
    for (int i = 0; i < g.nx; ++i) {
        const double a = g.at(i, j0), b = g.at(i, j1);
        if (!std::isfinite(a) || !std::isfinite(b)) continue;
        const double v = a + (b - a) * frac;
        if (!std::isfinite(best) || v < best) best = v;
    }
    return best;
}

}  // namespace scan
}  // namespace kepcol
