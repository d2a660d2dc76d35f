// End-to-end acceptance suite: one PASS/FAIL line per criterion.
// Usage: acceptance_tests <path-to-cli> [criterion numbers...]

#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracscat/postprocess.hpp"
#include "fracscat/singular.hpp"

using namespace fracscat;
using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

std::string g_cli;
std::string g_dir;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string strf(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

struct Check {
    bool ok = true;
    std::string notes;
    void req(bool cond, const std::string& msg) {
        if (!cond) {
            ok = false;
            notes += (notes.empty() ? "" : "; ") + msg;
        }
    }
};

std::shared_ptr<const IfsAttractor> geometry(const std::string& name) {
    if (name == "fudgeflake") return std::make_shared<const IfsAttractor>(make_fudgeflake());
    if (name == "gosper") return std::make_shared<const IfsAttractor>(make_gosper());
    return std::make_shared<const IfsAttractor>(make_koch_snowflake());
}

const std::vector<std::string> kGeometries = {"fudgeflake", "gosper", "koch"};

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double mx = 0, my = 0, num = 0, den = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= x.size();
    my /= x.size();
    for (std::size_t i = 0; i < x.size(); ++i) {
        num += (x[i] - mx) * (y[i] - my);
        den += (x[i] - mx) * (x[i] - mx);
    }
    return num / den;
}

double log_fit_slope(const std::vector<double>& h, const std::vector<double>& e) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < h.size(); ++i) {
        lx.push_back(std::log(h[i]));
        ly.push_back(std::log(e[i]));
    }
    return ls_slope(lx, ly);
}

int run_cli(const std::string& args, const std::string& log_name) {
    std::string cmd = g_cli + " " + args + " > " + g_dir + "/" + log_name + " 2>&1";
    int rc = std::system(cmd.c_str());
    return rc == -1 ? -1 : WEXITSTATUS(rc);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_meta(const std::string& base) { return json::parse(read_file(base + ".meta.json")); }

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    std::vector<std::vector<std::string>> rows;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

// ---- criteria 4/5/10 share the four convergence ladders ------------------

struct Ladder {
    std::string base;
    double seconds = 0.0;
    json meta;
};

std::map<std::string, Ladder> g_ladders;

std::string ladder_args(const std::string& geo, int alpha, const std::string& base) {
    return "converge --geometry " + geo + " --k 5 --m_re 1 --alpha " + std::to_string(alpha) +
           " --levels 2 3 4 5 --reference_level 7 --output " + base;
}

const Ladder& ladder(const std::string& geo, int alpha) {
    std::string key = geo + ":" + std::to_string(alpha);
    auto it = g_ladders.find(key);
    if (it != g_ladders.end()) return it->second;
    Ladder l;
    l.base = g_dir + "/ladder_" + geo + "_a" + std::to_string(alpha);
    auto t0 = Clock::now();
    int rc = run_cli(ladder_args(geo, alpha, l.base), "ladder_" + key + ".log");
    l.seconds = seconds_since(t0);
    if (rc != 0) throw std::runtime_error("converge ladder " + key + " exited " + std::to_string(rc));
    l.meta = read_meta(l.base);
    return g_ladders.emplace(key, std::move(l)).first->second;
}

// ---- criterion implementations -------------------------------------------

Check c1_geometry_exactness() {
    Check c;
    auto t0 = Clock::now();
    const double rt3 = std::sqrt(3.0);
    const double measures[3] = {rt3 / 2.0, 3.0 * rt3 / 2.0, 2.0 * rt3 / 5.0};
    const double h0_koch = 2.0 / rt3;
    const double brad_unit = (1.0 + 1.0 / rt3) / 2.0;
    for (int gi = 0; gi < 3; ++gi) {
        auto ifs = geometry(kGeometries[gi]);
        c.req(std::abs(ifs->measure() - measures[gi]) <= 1e-10,
              strf("%s measure %.12f != %.12f", kGeometries[gi].c_str(), ifs->measure(),
                   measures[gi]));
        c.req(ifs->barycentre().norm() <= 1e-10,
              strf("%s barycentre off origin by %.2e", kGeometries[gi].c_str(),
                   ifs->barycentre().norm()));
        double brad = ifs->bounding_radius();
        if (gi == 0)
            c.req(std::abs(brad - brad_unit) <= 1e-10, strf("fudgeflake radius %.12f", brad));
        else if (gi == 1)
            c.req(std::abs(brad - 1.052) <= 5e-4, strf("gosper radius %.12f", brad));
        else
            c.req(std::abs(brad - brad_unit * h0_koch) <= 1e-10, strf("koch radius %.12f", brad));
        auto seq = mesh_level_sequence(*ifs, 6);
        for (int l = 1; l <= 6; ++l) {
            long expect;
            if (gi == 0) {
                expect = 1;
                for (int i = 0; i < l; ++i) expect *= 3;
            } else if (gi == 1) {
                expect = 1;
                for (int i = 0; i < l; ++i) expect *= 7;
            } else {
                long p3 = 1, p2 = 1;
                for (int i = 0; i < l + 2; ++i) p3 *= 3;
                for (int i = 0; i < l + 2; ++i) p2 *= 2;
                if (l % 2 == 1) p2 = -p2; // (-2)^(l+2)
                expect = (p3 - p2) / 5;
            }
            LhMesh mesh = build_lh_mesh(ifs, seq[l]);
            c.req(mesh.size() == expect, strf("%s level %d count %d != %ld",
                                              kGeometries[gi].c_str(), l, mesh.size(), expect));
        }
    }
    double dt = seconds_since(t0);
    c.req(dt < 1.0, strf("runtime %.2fs >= 1s", dt));
    return c;
}

Check c2_quadrature_orders() {
    Check c;
    auto t0 = Clock::now();
    auto koch = geometry("koch");

    Similarity cell = koch->maps()[0];
    double area = cell.rho * cell.rho * koch->measure();
    Vec2 bc = cell(koch->barycentre());
    auto affine = [](const Vec2& x) { return 0.7 + 1.3 * x.x - 2.1 * x.y; };
    double exact = area * affine(bc);
    for (double hq : {0.3, 0.1, 0.03}) {
        double v = apply_rule(single_rule(*koch, cell, hq), affine);
        c.req(std::abs(v - exact) / std::abs(exact) <= 1e-12,
              strf("affine rel err %.2e at h=%.2f", std::abs(v - exact) / std::abs(exact), hq));
    }

    Similarity id{1.0, identity2(), Vec2{0.0, 0.0}};
    auto f = [](const Vec2& x) { return std::exp(x.x); };
    auto seq = mesh_level_sequence(*koch, 9);
    double ref = apply_rule(single_rule(*koch, id, seq[9]), f);
    std::vector<double> hs, es;
    for (int l = 2; l <= 6; ++l) {
        QuadRule r = single_rule(*koch, id, seq[l]);
        hs.push_back(r.h_q);
        es.push_back(std::abs(apply_rule(r, f) - ref));
    }
    double slope = log_fit_slope(hs, es);
    c.req(std::abs(slope - 2.0) <= 0.1, strf("exp(x1) EOC %.3f outside 2 +- 0.1", slope));

    Similarity ca = koch->word_map({0, 0}), cb = koch->word_map({3, 3});
    c.req(pair_hull_distance(*koch, {ca, cb}) > 0.0, "chosen pair is not separated");
    auto kern = [&](const Vec2& x, const Vec2& y) { return phi(5.0, x, y); };
    double cd = ca.rho * koch->diam();
    double lr = 1.0 / std::sqrt(3.0);
    Cplx pref = double_rule_value(*koch, ca, cb, cd * std::pow(lr, 7) * 1.001, kern);
    hs.clear();
    es.clear();
    for (int m = 0; m <= 4; ++m) {
        double w = cd * std::pow(lr, m) * 1.001;
        QuadRule ra = single_rule(*koch, ca, w);
        Cplx v = apply_double_rule(ra, single_rule(*koch, cb, w), kern);
        hs.push_back(ra.h_q);
        es.push_back(std::abs(v - pref));
    }
    slope = log_fit_slope(hs, es);
    c.req(std::abs(slope - 2.0) <= 0.2, strf("double-rule EOC %.3f outside 2 +- 0.2", slope));

    double dt = seconds_since(t0);
    c.req(dt < 30.0, strf("runtime %.1fs >= 30s", dt));
    return c;
}

Check c3_canonical_system() {
    Check c;
    auto t0 = Clock::now();
    const int expected_ns[3] = {2, 2, 3};
    for (int gi = 0; gi < 3; ++gi) {
        auto ifs = geometry(kGeometries[gi]);
        CanonicalSystem sys = CanonicalSystem::derive(ifs);
        c.req(sys.num_classes() == expected_ns[gi],
              strf("%s n_s=%d != %d", kGeometries[gi].c_str(), sys.num_classes(),
                   expected_ns[gi]));
        double hs = ifs->diam() / 16.0;
        const auto& a = sys.solve(hs);
        const auto& b = sys.solve(hs / 4.0);
        for (std::size_t i = 0; i < a.size(); ++i)
            c.req(std::abs(a[i] - b[i]) <= 5e-4 * std::abs(b[i]),
                  strf("%s s~_%zu unstable: %.8f vs %.8f", kGeometries[gi].c_str(), i, a[i], b[i]));
    }

    auto sq = std::make_shared<const IfsAttractor>(make_unit_square());
    CanonicalSystem sqsys = CanonicalSystem::derive(sq);
    Similarity id{1.0, identity2(), Vec2{0.0, 0.0}};
    CellPair self{id, id};
    double can = sqsys.log_integral(self, sq->diam() / 64.0);
    double bf = brute_force_log_integral(*sq, self, 5);
    c.req(std::abs(can - bf) <= 1e-4,
          strf("square self-integral %.8f vs oracle %.8f", can, bf));

    Vec2 v1{0.0, 0.0}, v2{1.0, 0.0}, v3{0.5, std::sqrt(3.0) / 2.0};
    auto tri = std::make_shared<const IfsAttractor>(make_triangle(v1, v2, v3));
    auto tri2 = std::make_shared<const IfsAttractor>(make_triangle(v1 * 2.0, v2 * 2.0, v3 * 2.0));
    CanonicalSystem s1 = CanonicalSystem::derive(tri);
    CanonicalSystem s2 = CanonicalSystem::derive(tri2);
    double hs = tri->diam() / 32.0;
    double I1 = s1.log_integral(self, hs);
    double I2 = s2.log_integral(self, 2.0 * hs);
    double mu = tri->measure();
    c.req(std::abs(I2 - 16.0 * (I1 + std::log(2.0) * mu * mu)) <= 1e-8,
          strf("self covariance residual %.2e",
               std::abs(I2 - 16.0 * (I1 + std::log(2.0) * mu * mu))));
    CellPair e1{tri->maps()[0], tri->maps()[1]};
    CellPair e2{tri2->maps()[0], tri2->maps()[1]};
    double J1 = s1.log_integral(e1, hs);
    double J2 = s2.log_integral(e2, 2.0 * hs);
    double ma = tri->maps()[0].rho * tri->maps()[0].rho * mu;
    c.req(std::abs(J2 - 16.0 * (J1 + std::log(2.0) * ma * ma)) <= 1e-8,
          strf("edge covariance residual %.2e",
               std::abs(J2 - 16.0 * (J1 + std::log(2.0) * ma * ma))));

    double dt = seconds_since(t0);
    c.req(dt < 120.0, strf("runtime %.1fs >= 120s", dt));
    return c;
}

Check c4_solution_convergence() {
    Check c;
    for (const char* geo : {"fudgeflake", "koch"}) {
        const Ladder& l = ladder(geo, 1);
        double slope = l.meta.at("l2_slope").get<double>();
        c.req(std::abs(slope - 1.0) <= 0.2, strf("%s L2 EOC %.3f outside 1 +- 0.2", geo, slope));
        c.req(l.seconds < 600.0, strf("%s ladder %.0fs >= 600s", geo, l.seconds));
    }
    return c;
}

Check c5_superconvergence() {
    Check c;
    double total = 0.0;
    for (const char* geo : {"fudgeflake", "koch"}) {
        const Ladder& l = ladder(geo, 2);
        double fs = l.meta.at("far_slope").get<double>();
        double ss = l.meta.at("scattered_slope").get<double>();
        c.req(std::abs(fs - 2.0) <= 0.3, strf("%s far-field EOC %.3f outside 2 +- 0.3", geo, fs));
        c.req(std::abs(ss - 2.0) <= 0.3,
              strf("%s scattered-field EOC %.3f outside 2 +- 0.3", geo, ss));
        total += l.seconds;
    }
    c.req(total < 900.0, strf("runtime %.0fs >= 900s", total));
    return c;
}

// matrix-free kappa_2 via power iterations; uses A^T = A (complex symmetric)
double kappa_matfree(const LatticeOperator& op) {
    int n = op.size();
    auto solve = [&](const Eigen::VectorXcd& b) {
        return gmres([&](const Eigen::VectorXcd& x) { return op.apply(x); }, b, 1e-10, 2000, 50)
            .coefficients;
    };
    Eigen::VectorXcd z(n);
    for (int i = 0; i < n; ++i) z(i) = Cplx(1.0 + 0.01 * std::sin(i), 0.01 * std::cos(i));
    z.normalize();
    double smax = 0.0;
    for (int it = 0; it < 40; ++it) {
        Eigen::VectorXcd w = op.apply(z);
        z = op.apply(w.conjugate()).conjugate(); // A^H (A z)
        smax = std::sqrt(z.norm());
        z.normalize();
    }
    for (int i = 0; i < n; ++i) z(i) = Cplx(1.0 + 0.01 * std::cos(i), 0.01 * std::sin(i));
    z.normalize();
    double smin = 0.0;
    for (int it = 0; it < 15; ++it) {
        Eigen::VectorXcd w = solve(z.conjugate()).conjugate(); // A^-H z
        z = solve(w);                                          // A^-1 w
        smin = 1.0 / std::sqrt(z.norm());
        z.normalize();
    }
    return smax / smin;
}

Check c6_conditioning() {
    Check c;
    WaveParams wp;
    wp.k = 2.0;
    wp.m = Cplx(1.0, 0.0);
    for (const auto& name : kGeometries) {
        auto ifs = geometry(name);
        CanonicalSystem sys = CanonicalSystem::derive(ifs);
        double kmin = 1e300, kmax = 0.0;
        std::string seen;
        for (int l = 1; l <= 5; ++l) {
            LhMesh mesh = build_lh_mesh(ifs, mesh_level_sequence(*ifs, l)[l]);
            InteractionSplit split = classify_pairs(mesh);
            QuadPolicy pol = QuadPolicy::make(1, mesh.h(), ifs->diam());
            double kap;
            if (mesh.size() <= 1000) {
                GalerkinSystem gal = assemble_system(mesh, split, wp, pol, sys);
                kap = condition_estimate(gal.A);
            } else {
                LatticeOperator op(mesh, split, wp, pol, sys);
                kap = kappa_matfree(op);
            }
            kmin = std::min(kmin, kap);
            kmax = std::max(kmax, kap);
            seen += strf(" %.3f", kap);
        }
        c.req(kmax / kmin < 2.0,
              strf("%s kappa drift %.3f >= 2 (values%s)", name.c_str(), kmax / kmin, seen.c_str()));
    }
    return c;
}

Check c7_lattice_matvec() {
    Check c;
    WaveParams wp;
    wp.k = 5.0;
    wp.m = Cplx(1.0, 0.0);
    std::mt19937 rng(20260824);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (const auto& name : kGeometries) {
        auto ifs = geometry(name);
        CanonicalSystem sys = CanonicalSystem::derive(ifs);
        for (int l = 1; l <= 4; ++l) {
            LhMesh mesh = build_lh_mesh(ifs, mesh_level_sequence(*ifs, l)[l]);
            InteractionSplit split = classify_pairs(mesh);
            QuadPolicy pol = QuadPolicy::make(1, mesh.h(), ifs->diam());
            GalerkinSystem gal = assemble_system(mesh, split, wp, pol, sys);
            LatticeOperator op(mesh, split, wp, pol, sys);
            for (int trial = 0; trial < 3; ++trial) {
                Eigen::VectorXcd x(mesh.size());
                for (int i = 0; i < mesh.size(); ++i) x(i) = Cplx(uni(rng), uni(rng));
                Eigen::VectorXcd yd = gal.A * x;
                double rel = (op.apply(x) - yd).norm() / yd.norm();
                c.req(rel <= 1e-12,
                      strf("%s level %d rel diff %.2e > 1e-12", name.c_str(), l, rel));
            }
        }
    }

    auto koch = geometry("koch");
    CanonicalSystem sys = CanonicalSystem::derive(koch);
    LhMesh mesh = build_lh_mesh(koch, mesh_level_sequence(*koch, 6)[6]);
    InteractionSplit split = classify_pairs(mesh);
    QuadPolicy pol = QuadPolicy::make(1, mesh.h(), koch->diam());
    GalerkinSystem gal = assemble_system(mesh, split, wp, pol, sys);
    LatticeOperator op(mesh, split, wp, pol, sys);
    Eigen::VectorXcd x(mesh.size()), yd(mesh.size()), yl;
    for (int i = 0; i < mesh.size(); ++i) x(i) = Cplx(uni(rng), uni(rng));
    yd.noalias() = gal.A * x;
    yl = op.apply(x); // warm-up
    int reps = 100;
    auto t1 = Clock::now();
    for (int r = 0; r < reps; ++r) yd.noalias() = gal.A * x;
    auto t2 = Clock::now();
    for (int r = 0; r < reps; ++r) yl = op.apply(x);
    auto t3 = Clock::now();
    double td = std::chrono::duration<double>(t2 - t1).count() / reps;
    double tl = std::chrono::duration<double>(t3 - t2).count() / reps;
    c.req(td / tl > 3.0, strf("koch level-6 speedup %.2fx (dense %.3fms, lattice %.3fms) <= 3x",
                              td / tl, 1e3 * td, 1e3 * tl));
    return c;
}

Check c8_prefractal_baseline() {
    Check c;
    auto t0 = Clock::now();
    std::string base = g_dir + "/prefractal";
    int rc = run_cli("compare-prefractal --geometry koch --k 5 --m_re 1 --levels 1 2 3 4 5"
                     " --prefractal_levels 1 2 3 --reference_level 7 --output " + base,
                     "prefractal.log");
    c.req(rc == 0, strf("compare-prefractal exited %d", rc));
    if (rc != 0) return c;
    json meta = read_meta(base);
    double cs = meta.at("conforming_slope").get<double>();
    double ps = meta.at("prefractal_slope").get<double>();
    c.req(cs <= -0.85, strf("conforming slope %.3f > -0.85", cs));
    c.req(std::abs(ps + 0.369) <= 0.10, strf("prefractal slope %.3f outside -0.369 +- 0.10", ps));

    std::vector<double> cN, cE, pN, pE;
    for (const auto& row : read_csv(base + ".csv")) {
        if (row.size() != 4 || row[0] == "method") continue;
        if (row[0] == "conforming") {
            cN.push_back(std::stod(row[2]));
            cE.push_back(std::stod(row[3]));
        } else {
            pN.push_back(std::stod(row[2]));
            pE.push_back(std::stod(row[3]));
        }
    }
    // conforming error curve (log-log interpolated in N) strictly below the
    // prefractal points at comparable N >= 100
    auto conf_at = [&](double N) {
        double lx = std::log(N);
        std::size_t i = 0;
        while (i + 2 < cN.size() && std::log(cN[i + 1]) < lx) ++i;
        double x0 = std::log(cN[i]), x1 = std::log(cN[i + 1]);
        double y0 = std::log(cE[i]), y1 = std::log(cE[i + 1]);
        return std::exp(y0 + (y1 - y0) * (lx - x0) / (x1 - x0));
    };
    bool any = false;
    for (std::size_t j = 0; j < pN.size(); ++j) {
        if (pN[j] < 100.0) continue;
        any = true;
        double ce = conf_at(pN[j]);
        c.req(ce < pE[j], strf("conforming err %.3e not below prefractal err %.3e at N=%.0f", ce,
                               pE[j], pN[j]));
    }
    c.req(any, "no prefractal point with N >= 100");
    double dt = seconds_since(t0);
    c.req(dt < 1200.0, strf("runtime %.0fs >= 1200s", dt));
    return c;
}

Check c9_field_smoke() {
    Check c;
    std::string base = g_dir + "/field";
    int nx = 25, ny = 17;
    int rc = run_cli(strf("field --geometry koch --k 15 --m_re 1 --level 5 --grid_x0 -1.2"
                          " --grid_x1 1.2 --grid_y0 -1.2 --grid_y1 1.2 --grid_nx %d --grid_ny %d"
                          " --output %s", nx, ny, base.c_str()),
                     "field.log");
    c.req(rc == 0, strf("field exited %d", rc));
    if (rc != 0) return c;
    auto rows = read_csv(base + ".csv");
    c.req(static_cast<int>(rows.size()) == nx * ny + 1,
          strf("raster has %zu rows, expected %d", rows.size(), nx * ny + 1));
    std::vector<double> amp;
    double amax = 0.0;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        double a = std::stod(rows[r][4]);
        c.req(rows[r][5] == "1", strf("sample %zu not evaluated", r - 1));
        c.req(std::isfinite(a), strf("sample %zu not finite", r - 1));
        amp.push_back(a);
        amax = std::max(amax, a);
    }
    double asym = 0.0;
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix)
            asym = std::max(asym, std::abs(amp[iy * nx + ix] - amp[iy * nx + (nx - 1 - ix)]));
    c.req(asym / amax <= 1e-8, strf("mirror asymmetry %.2e > 1e-8", asym / amax));
    return c;
}

Check c10_determinism() {
    Check c;
    for (const char* geo : {"fudgeflake", "koch"}) {
        for (int alpha : {1, 2}) {
            const Ladder& first = ladder(geo, alpha);
            std::string rebase = first.base + "_rerun";
            int rc = run_cli(ladder_args(geo, alpha, rebase),
                             strf("rerun_%s_a%d.log", geo, alpha));
            c.req(rc == 0, strf("%s alpha=%d rerun exited %d", geo, alpha, rc));
            if (rc != 0) continue;
            std::string a = read_file(first.base + ".csv");
            std::string b = read_file(rebase + ".csv");
            c.req(!a.empty() && a == b, strf("%s alpha=%d CSVs differ between runs", geo, alpha));
        }
    }
    return c;
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: %s <path-to-cli> [criterion numbers...]\n", argv[0]);
        return 2;
    }
    g_cli = argv[1];
    char tmpl[] = "/tmp/fracscat-accept-XXXXXX";
    if (!mkdtemp(tmpl)) {
        std::fprintf(stderr, "cannot create work directory\n");
        return 2;
    }
    g_dir = tmpl;

    std::set<int> wanted;
    for (int i = 2; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
    if (wanted.empty())
        for (int i = 1; i <= 10; ++i) wanted.insert(i);

    struct Entry {
        int num;
        const char* name;
        Check (*fn)();
    };
    const Entry entries[] = {
        {1, "geometry exactness", c1_geometry_exactness},
        {2, "quadrature orders", c2_quadrature_orders},
        {3, "canonical singular system", c3_canonical_system},
        {4, "solution convergence", c4_solution_convergence},
        {5, "superconvergence", c5_superconvergence},
        {6, "conditioning", c6_conditioning},
        {7, "lattice matvec", c7_lattice_matvec},
        {8, "prefractal baseline", c8_prefractal_baseline},
        {9, "field smoke", c9_field_smoke},
        {10, "determinism", c10_determinism},
    };

    bool all_ok = true;
    for (const Entry& e : entries) {
        if (!wanted.count(e.num)) continue;
        auto t0 = Clock::now();
        Check c;
        try {
            c = e.fn();
        } catch (const std::exception& ex) {
            c.ok = false;
            c.notes = std::string("exception: ") + ex.what();
        }
        all_ok = all_ok && c.ok;
        std::printf("criterion %2d (%s): %s  [%.1fs]%s%s\n", e.num, e.name,
                    c.ok ? "PASS" : "FAIL", seconds_since(t0), c.notes.empty() ? "" : " -- ",
                    c.notes.c_str());
        std::fflush(stdout);
    }
    return all_ok ? 0 : 1;
}
