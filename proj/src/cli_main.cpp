// Configuration-driven experiment runner: JSON config + mirrored CLI flags,
// CSV artefacts with JSON metadata sidecars. Exit codes: 0 ok, 2 bad config,
// 3 numeric failure.
#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fracscat/postprocess.hpp"
#include "fracscat/prefractal.hpp"

using nlohmann::json;
using namespace fracscat;

namespace {

json default_config() {
    return json{
        {"geometry", "fudgeflake"},
        {"h0", 2.0 / 1.7320508075688772935},
        {"k", 5.0},
        {"m_re", 1.0},
        {"m_im", 0.0},
        {"incident", "plane"},
        {"dir_x", 0.0},
        {"dir_y", 1.0},
        {"src_x", 0.0},
        {"src_y", 0.0},
        {"level", 3},
        {"h", 0.0},
        {"alpha", 1},
        {"solver", "dense"},
        {"tol", 1e-10},
        {"max_iter", 1000},
        {"restart", 50},
        {"cond", false},
        {"reference_level", -1},
        {"levels", json::array({2, 3, 4})},
        {"prefractal_levels", json::array({1, 2})},
        {"angles", 360},
        {"grid_x0", -2.0},
        {"grid_y0", -2.0},
        {"grid_x1", 2.0},
        {"grid_y1", 2.0},
        {"grid_nx", 40},
        {"grid_ny", 40},
        {"circle_points", 16},
        {"h_s", 0.0},
        {"threads", 0},
        {"output", "out"},
    };
}

int level_cap(const std::string& name) {
    if (name == "fudgeflake") return 12;
    if (name == "gosper") return 7;
    if (name == "koch") return 11;
    throw std::invalid_argument("unknown geometry '" + name + "'");
}

std::shared_ptr<const IfsAttractor> build_geometry(const json& cfg) {
    std::string name = cfg.at("geometry");
    level_cap(name); // name check
    if (name == "fudgeflake") return std::make_shared<const IfsAttractor>(make_fudgeflake());
    if (name == "gosper") return std::make_shared<const IfsAttractor>(make_gosper());
    return std::make_shared<const IfsAttractor>(make_koch_snowflake(cfg.at("h0").get<double>()));
}

WaveParams wave_from(const json& cfg) {
    WaveParams wp;
    wp.k = cfg.at("k").get<double>();
    wp.m = Cplx(cfg.at("m_re").get<double>(), cfg.at("m_im").get<double>());
    std::string inc = cfg.at("incident");
    if (inc == "plane") {
        wp.incident = WaveParams::Incident::PlaneWave;
        Vec2 d{cfg.at("dir_x").get<double>(), cfg.at("dir_y").get<double>()};
        if (d.norm() == 0.0) throw std::invalid_argument("incident direction must be nonzero");
        wp.direction = d * (1.0 / d.norm());
    } else if (inc == "point") {
        wp.incident = WaveParams::Incident::PointSource;
        wp.source = Vec2{cfg.at("src_x").get<double>(), cfg.at("src_y").get<double>()};
    } else if (inc == "constant") {
        wp.incident = WaveParams::Incident::Constant;
    } else {
        throw std::invalid_argument("unknown incident field '" + inc + "'");
    }
    wp.validate();
    return wp;
}

void check_level(const json& cfg, int level) {
    int cap = level_cap(cfg.at("geometry"));
    if (level < 0 || level > cap)
        throw std::invalid_argument("level " + std::to_string(level) + " outside [0, " +
                                    std::to_string(cap) + "] for " +
                                    cfg.at("geometry").get<std::string>());
}

double mesh_width(const json& cfg, const IfsAttractor& ifs, int level) {
    double h = cfg.at("h").get<double>();
    if (h > 0.0) return h;
    check_level(cfg, level);
    return mesh_level_sequence(ifs, level)[level];
}

struct Run {
    std::shared_ptr<const IfsAttractor> ifs;
    LhMesh mesh;
    InteractionSplit split;
    QuadPolicy pol;
    GalerkinSystem gal;
    SolveReport rep;
};

SolveReport run_solver(const json& cfg, const LhMesh& mesh, const InteractionSplit& split,
                       const CanonicalSystem& sys, const GalerkinSystem& gal) {
    std::string solver = cfg.at("solver");
    double tol = cfg.at("tol").get<double>();
    int max_iter = cfg.at("max_iter").get<int>();
    int restart = cfg.at("restart").get<int>();
    bool cond = cfg.at("cond").get<bool>();
    if (solver == "dense") return solve_dense(gal, cond);

    SolveReport rep;
    if (solver == "gmres") {
        rep = gmres([&](const Eigen::VectorXcd& x) { return (gal.A * x).eval(); }, gal.g, tol,
                    max_iter, restart);
    } else if (solver == "gmres-fft") {
        LatticeOperator op(mesh, split, gal.params, gal.policy, sys);
        rep = gmres([&](const Eigen::VectorXcd& x) { return op.apply(x); }, gal.g, tol, max_iter,
                    restart);
        rep.method = "gmres-fft";
    } else {
        throw std::invalid_argument("unknown solver '" + solver + "'");
    }
    if (cond) rep.cond_estimate = condition_estimate(gal.A);
    return rep;
}

Run make_run(const json& cfg, std::shared_ptr<const IfsAttractor> ifs, const CanonicalSystem& sys,
             int level) {
    LhMesh mesh = build_lh_mesh(ifs, mesh_width(cfg, *ifs, level));
    InteractionSplit split = classify_pairs(mesh);
    QuadPolicy pol = QuadPolicy::make(cfg.at("alpha").get<int>(), mesh.h(), ifs->diam());
    GalerkinSystem gal = assemble_system(mesh, split, wave_from(cfg), pol, sys);
    SolveReport rep = run_solver(cfg, mesh, split, sys, gal);
    return {std::move(ifs), std::move(mesh), std::move(split), pol, std::move(gal),
            std::move(rep)};
}

// ---- output plumbing ---------------------------------------------------

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct Csv {
    std::ofstream out;
    explicit Csv(const std::string& path) : out(path) {
        if (!out) throw std::runtime_error("cannot open output file " + path);
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out << ',';
            out << cells[i];
        }
        out << '\n';
    }
};

int resolve_threads(const json& cfg) {
    int t = cfg.at("threads").get<int>();
    if (t <= 0) {
        const char* env = std::getenv("FRACSCAT_THREADS");
        if (env) t = std::atoi(env);
    }
    if (t > 0) Eigen::setNbThreads(t);
    return Eigen::nbThreads();
}

void write_meta(const std::string& base, const std::string& command, const json& cfg, int threads,
                json extra) {
    extra["command"] = command;
    extra["config"] = cfg;
    extra["threads"] = threads;
    std::ofstream out(base + ".meta.json");
    if (!out) throw std::runtime_error("cannot open metadata file " + base + ".meta.json");
    out << extra.dump(2) << '\n';
}

json report_json(const SolveReport& rep, bool cond) {
    json j{{"method", rep.method},
           {"iterations", rep.iterations},
           {"residual_norm", rep.residual_norm}};
    if (cond) j["cond_estimate"] = rep.cond_estimate;
    return j;
}

std::vector<Vec2> circle_points(const IfsAttractor& ifs, int n) {
    std::vector<Vec2> pts;
    double r = ifs.diam();
    for (int i = 0; i < n; ++i) {
        double t = 2.0 * 3.141592653589793238462643383279502884 * i / n;
        pts.push_back(
            Vec2{ifs.barycentre().x + r * std::cos(t), ifs.barycentre().y + r * std::sin(t)});
    }
    return pts;
}

std::vector<double> angle_grid(int n) {
    std::vector<double> a;
    for (int i = 0; i < n; ++i)
        a.push_back(2.0 * 3.141592653589793238462643383279502884 * i / n);
    return a;
}

// ---- subcommands -------------------------------------------------------

void cmd_mesh(const json& cfg, int threads) {
    auto ifs = build_geometry(cfg);
    LhMesh mesh = build_lh_mesh(ifs, mesh_width(cfg, *ifs, cfg.at("level").get<int>()));
    std::string base = cfg.at("output");
    Csv csv(base + ".csv");
    csv.row({"index", "word", "node_x", "node_y", "rho", "area", "diam"});
    for (int i = 0; i < mesh.size(); ++i) {
        const MeshElement& el = mesh.elements()[i];
        std::string word;
        for (std::uint8_t d : el.word) word += static_cast<char>('0' + d);
        if (word.empty()) word = "-";
        csv.row({std::to_string(i), word, fmt(el.node.x), fmt(el.node.y), fmt(el.rho),
                 fmt(el.area), fmt(el.diam)});
    }
    write_meta(base, "mesh", cfg, threads,
               {{"elements", mesh.size()}, {"h", mesh.h()}, {"outputs", {base + ".csv"}}});
}

void cmd_solve(const json& cfg, int threads) {
    auto ifs = build_geometry(cfg);
    CanonicalSystem sys = CanonicalSystem::derive(ifs);
    Run run = make_run(cfg, ifs, sys, cfg.at("level").get<int>());
    std::string base = cfg.at("output");
    Csv csv(base + ".csv");
    csv.row({"index", "c_re", "c_im", "g_re", "g_im", "basis_norm"});
    for (int i = 0; i < run.mesh.size(); ++i)
        csv.row({std::to_string(i), fmt(run.rep.coefficients(i).real()),
                 fmt(run.rep.coefficients(i).imag()), fmt(run.gal.g(i).real()),
                 fmt(run.gal.g(i).imag()), fmt(run.gal.basis_norm[i])});
    write_meta(base, "solve", cfg, threads,
               {{"elements", run.mesh.size()},
                {"h", run.mesh.h()},
                {"report", report_json(run.rep, cfg.at("cond").get<bool>())},
                {"outputs", {base + ".csv"}}});
}

void cmd_field(const json& cfg, int threads) {
    auto ifs = build_geometry(cfg);
    CanonicalSystem sys = CanonicalSystem::derive(ifs);
    Run run = make_run(cfg, ifs, sys, cfg.at("level").get<int>());
    FieldGrid grid = field_grid(run.rep.coefficients, run.mesh, run.gal.params, run.pol,
                                Vec2{cfg.at("grid_x0").get<double>(), cfg.at("grid_y0").get<double>()},
                                Vec2{cfg.at("grid_x1").get<double>(), cfg.at("grid_y1").get<double>()},
                                cfg.at("grid_nx").get<int>(), cfg.at("grid_ny").get<int>());
    std::string base = cfg.at("output");
    Csv csv(base + ".csv");
    csv.row({"x", "y", "total_re", "total_im", "total_abs", "ok"});
    int bad = 0;
    for (const FieldSample& s : grid.samples) {
        if (!s.ok) ++bad;
        csv.row({fmt(s.point.x), fmt(s.point.y), fmt(s.value.real()), fmt(s.value.imag()),
                 fmt(std::abs(s.value)), s.ok ? "1" : "0"});
    }
    write_meta(base, "field", cfg, threads,
               {{"samples", grid.samples.size()},
                {"failed_samples", bad},
                {"report", report_json(run.rep, false)},
                {"outputs", {base + ".csv"}}});
}

void cmd_farfield(const json& cfg, int threads) {
    auto ifs = build_geometry(cfg);
    CanonicalSystem sys = CanonicalSystem::derive(ifs);
    Run run = make_run(cfg, ifs, sys, cfg.at("level").get<int>());
    FarFieldCurve curve = far_field(run.rep.coefficients, run.mesh, run.gal.params, run.pol,
                                    angle_grid(cfg.at("angles").get<int>()));
    std::string base = cfg.at("output");
    Csv csv(base + ".csv");
    csv.row({"theta", "re", "im", "abs"});
    for (std::size_t i = 0; i < curve.angles.size(); ++i)
        csv.row({fmt(curve.angles[i]), fmt(curve.values[i].real()), fmt(curve.values[i].imag()),
                 fmt(std::abs(curve.values[i]))});
    write_meta(base, "farfield", cfg, threads,
               {{"report", report_json(run.rep, false)}, {"outputs", {base + ".csv"}}});
}

double max_abs_diff(const std::vector<Cplx>& a, const std::vector<Cplx>& b) {
    double e = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
    return e;
}

void cmd_converge(const json& cfg, int threads) {
    auto ifs = build_geometry(cfg);
    std::vector<int> levels = cfg.at("levels").get<std::vector<int>>();
    int ref_level = cfg.at("reference_level").get<int>();
    if (levels.empty()) throw std::invalid_argument("converge: empty level list");
    for (int l : levels) check_level(cfg, l);
    int lmax = *std::max_element(levels.begin(), levels.end());
    if (ref_level <= lmax)
        throw std::invalid_argument("converge: reference_level must exceed the study levels");
    check_level(cfg, ref_level);

    std::string base = cfg.at("output");
    CanonicalSystem sys = CanonicalSystem::derive(ifs);
    std::vector<double> angles = angle_grid(cfg.at("angles").get<int>());
    std::vector<Vec2> circle = circle_points(*ifs, cfg.at("circle_points").get<int>());

    std::unique_ptr<Run> ref;
    std::vector<Cplx> ref_far, ref_scat;
    try {
        ref = std::make_unique<Run>(make_run(cfg, ifs, sys, ref_level));
        ref_far = far_field(ref->rep.coefficients, ref->mesh, ref->gal.params, ref->pol, angles)
                      .values;
        for (const FieldSample& s :
             scattered_field(ref->rep.coefficients, ref->mesh, ref->gal.params, ref->pol, circle))
            ref_scat.push_back(s.value);
    } catch (const std::exception& e) {
        Csv csv(base + ".csv");
        csv.row({"level", "h", "N", "l2_err", "l2_eoc", "far_err", "far_eoc", "scat_err",
                 "scat_eoc"});
        write_meta(base, "converge", cfg, threads,
                   {{"incomplete", true},
                    {"error", e.what()},
                    {"outputs", {base + ".csv"}}});
        throw std::runtime_error(std::string("converge: reference solve failed: ") + e.what());
    }

    Csv csv(base + ".csv");
    csv.row({"level", "h", "N", "l2_err", "l2_eoc", "far_err", "far_eoc", "scat_err", "scat_eoc"});
    std::vector<double> hs, l2s, fars, scats;
    auto eoc_cell = [&](const std::vector<double>& err) -> std::string {
        std::size_t n = err.size();
        if (n < 2 || err[n - 1] <= 0.0 || err[n - 2] <= 0.0) return "";
        return fmt(std::log(err[n - 2] / err[n - 1]) / std::log(hs[n - 2] / hs[n - 1]));
    };
    for (int l : levels) {
        Run run = make_run(cfg, ifs, sys, l);
        auto parent = nested_restriction(run.mesh, ref->mesh);
        double l2 = l2_error_nested(run.rep.coefficients, run.mesh, ref->rep.coefficients,
                                    ref->mesh, parent);
        auto far = far_field(run.rep.coefficients, run.mesh, run.gal.params, run.pol, angles);
        double fe = max_abs_diff(far.values, ref_far);
        std::vector<Cplx> scat;
        for (const FieldSample& s :
             scattered_field(run.rep.coefficients, run.mesh, run.gal.params, run.pol, circle))
            scat.push_back(s.value);
        double se = max_abs_diff(scat, ref_scat);
        hs.push_back(run.mesh.h());
        l2s.push_back(l2);
        fars.push_back(fe);
        scats.push_back(se);
        csv.row({std::to_string(l), fmt(run.mesh.h()), std::to_string(run.mesh.size()), fmt(l2),
                 eoc_cell(l2s), fmt(fe), eoc_cell(fars), fmt(se), eoc_cell(scats)});
    }
    auto safe_slope = [&](const std::vector<double>& err) -> json {
        try {
            return eoc_slope(hs, err);
        } catch (const std::exception&) {
            return nullptr;
        }
    };
    write_meta(base, "converge", cfg, threads,
               {{"incomplete", false},
                {"reference_level", ref_level},
                {"reference_elements", ref->mesh.size()},
                {"l2_slope", safe_slope(l2s)},
                {"far_slope", safe_slope(fars)},
                {"scattered_slope", safe_slope(scats)},
                {"outputs", {base + ".csv"}}});
}

void cmd_compare_prefractal(const json& cfg, int threads) {
    if (cfg.at("geometry") != "koch")
        throw std::invalid_argument("compare-prefractal: Koch geometry only");
    auto ifs = build_geometry(cfg);
    std::vector<int> levels = cfg.at("levels").get<std::vector<int>>();
    std::vector<int> plevels = cfg.at("prefractal_levels").get<std::vector<int>>();
    int ref_level = cfg.at("reference_level").get<int>();
    if (levels.empty() || plevels.empty())
        throw std::invalid_argument("compare-prefractal: empty level list");
    for (int l : levels) check_level(cfg, l);
    int lmax = *std::max_element(levels.begin(), levels.end());
    if (ref_level <= lmax)
        throw std::invalid_argument("compare-prefractal: reference_level must exceed the study levels");
    check_level(cfg, ref_level);

    CanonicalSystem sys = CanonicalSystem::derive(ifs);
    std::vector<Vec2> circle = circle_points(*ifs, cfg.at("circle_points").get<int>());
    WaveParams wp = wave_from(cfg);

    Run ref = make_run(cfg, ifs, sys, ref_level);
    std::vector<Cplx> ref_scat;
    double scale = 0.0;
    for (const FieldSample& s :
         scattered_field(ref.rep.coefficients, ref.mesh, ref.gal.params, ref.pol, circle)) {
        ref_scat.push_back(s.value);
        scale = std::max(scale, std::abs(s.value));
    }
    if (scale == 0.0) scale = 1.0;

    std::string base = cfg.at("output");
    Csv csv(base + ".csv");
    csv.row({"method", "level", "N", "err"});
    std::vector<double> cN, cE, pN, pE;
    for (int l : levels) {
        Run run = make_run(cfg, ifs, sys, l);
        std::vector<Cplx> scat;
        for (const FieldSample& s :
             scattered_field(run.rep.coefficients, run.mesh, run.gal.params, run.pol, circle))
            scat.push_back(s.value);
        double e = max_abs_diff(scat, ref_scat) / scale;
        cN.push_back(run.mesh.size());
        cE.push_back(e);
        csv.row({"conforming", std::to_string(l), std::to_string(run.mesh.size()), fmt(e)});
    }
    for (int j : plevels) {
        PrefractalMesh pm = build_prefractal_mesh(j, cfg.at("h0").get<double>());
        CanonicalSystem psys = derive_prefractal_canonical(pm);
        GalerkinSystem gal = assemble_prefractal(pm, wp, psys);
        SolveReport rep = solve_dense(gal);
        std::vector<Cplx> scat;
        for (const Vec2& p : circle) {
            Functional f;
            f.kind = Functional::Kind::ScatteredField;
            f.x0 = p;
            Eigen::VectorXcd jv = prefractal_functional(pm, wp, gal.policy.h_J, f);
            scat.push_back((rep.coefficients.array() * jv.array()).sum());
        }
        double e = max_abs_diff(scat, ref_scat) / scale;
        pN.push_back(pm.split.n);
        pE.push_back(e);
        csv.row({"prefractal", std::to_string(j), std::to_string(pm.split.n), fmt(e)});
    }
    auto logslope = [](const std::vector<double>& N, const std::vector<double>& E) -> json {
        std::vector<double> x, y;
        for (std::size_t i = 0; i < N.size(); ++i)
            if (E[i] > 0.0) {
                x.push_back(std::log(N[i]));
                y.push_back(std::log(E[i]));
            }
        if (x.size() < 2) return nullptr;
        return ls_slope(x, y);
    };
    write_meta(base, "compare-prefractal", cfg, threads,
               {{"reference_level", ref_level},
                {"reference_elements", ref.mesh.size()},
                {"conforming_slope", logslope(cN, cE)},
                {"prefractal_slope", logslope(pN, pE)},
                {"outputs", {base + ".csv"}}});
}

void cmd_canonical_dump(const json& cfg, int threads) {
    auto ifs = build_geometry(cfg);
    CanonicalSystem sys = CanonicalSystem::derive(ifs);
    double h_s = cfg.at("h_s").get<double>();
    if (h_s <= 0.0) h_s = ifs->diam();
    std::string base = cfg.at("output");
    std::ofstream out(base + ".json");
    if (!out) throw std::runtime_error("cannot open output file " + base + ".json");
    out << sys.dump_json(h_s) << '\n';
    write_meta(base, "canonical-dump", cfg, threads,
               {{"classes", sys.num_classes()},
                {"h_s", h_s},
                {"outputs", {base + ".json"}}});
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"acoustic scattering by self-similar penetrable fractals"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "print help"); // frees --h for the mesh width

    std::string config_path;
    std::string geometry, incident, solver, output;
    double h0 = 0, k = 0, m_re = 0, m_im = 0, dir_x = 0, dir_y = 0, src_x = 0, src_y = 0;
    double h = 0, tol = 0, grid_x0 = 0, grid_y0 = 0, grid_x1 = 0, grid_y1 = 0, h_s = 0;
    int level = 0, alpha = 0, max_iter = 0, restart = 0, reference_level = 0, angles = 0;
    int grid_nx = 0, grid_ny = 0, circle_pts = 0, threads = 0;
    bool cond = false;
    std::vector<int> levels, prefractal_levels;

    struct Override {
        std::string key;
        std::function<json()> get;
        std::vector<CLI::Option*> opts;
    };
    std::vector<Override> overrides;
    std::vector<CLI::App*> subs;
    for (const char* name : {"mesh", "solve", "field", "farfield", "converge",
                             "compare-prefractal", "canonical-dump"}) {
        CLI::App* s = app.add_subcommand(name);
        s->set_help_flag("--help", "print help");
        subs.push_back(s);
    }

    auto add = [&](const std::string& key, auto& var, const std::string& desc) {
        Override ov{key, [&var]() { return json(var); }, {}};
        for (CLI::App* s : subs) ov.opts.push_back(s->add_option("--" + key, var, desc));
        overrides.push_back(std::move(ov));
    };
    for (CLI::App* s : subs)
        s->add_option("--config", config_path, "JSON config file; flags override its keys");

    add("geometry", geometry, "fudgeflake | gosper | koch");
    add("h0", h0, "Koch diameter parameter");
    add("k", k, "wavenumber");
    add("m_re", m_re, "contrast, real part");
    add("m_im", m_im, "contrast, imaginary part (>= 0)");
    add("incident", incident, "plane | point | constant");
    add("dir_x", dir_x, "plane-wave direction x");
    add("dir_y", dir_y, "plane-wave direction y");
    add("src_x", src_x, "point-source x");
    add("src_y", src_y, "point-source y");
    add("level", level, "mesh level");
    add("h", h, "mesh width (overrides level if > 0)");
    add("alpha", alpha, "quadrature schedule, 1 or 2");
    add("solver", solver, "dense | gmres | gmres-fft");
    add("tol", tol, "iterative solver tolerance");
    add("max_iter", max_iter, "iterative solver iteration cap");
    add("restart", restart, "GMRES restart length");
    add("cond", cond, "estimate the condition number");
    add("reference_level", reference_level, "reference level for convergence studies");
    add("levels", levels, "study levels (convergence / comparison)");
    add("prefractal_levels", prefractal_levels, "prefractal study levels");
    add("angles", angles, "number of far-field angles");
    add("grid_x0", grid_x0, "field raster lower x");
    add("grid_y0", grid_y0, "field raster lower y");
    add("grid_x1", grid_x1, "field raster upper x");
    add("grid_y1", grid_y1, "field raster upper y");
    add("grid_nx", grid_nx, "field raster points in x");
    add("grid_ny", grid_ny, "field raster points in y");
    add("circle_points", circle_pts, "scattered-field sample count on the circle");
    add("h_s", h_s, "canonical quadrature width (canonical-dump)");
    add("threads", threads, "thread count (0: FRACSCAT_THREADS or library default)");
    add("output", output, "output path prefix");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    CLI::App* sub = app.get_subcommands().front();
    json cfg = default_config();
    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw std::invalid_argument("cannot read config file " + config_path);
            json file = json::parse(in);
            for (const auto& [key, value] : file.items()) {
                if (!cfg.contains(key))
                    throw std::invalid_argument("unknown config key '" + key + "'");
                cfg[key] = value;
            }
        }
        std::size_t sub_index =
            std::find(subs.begin(), subs.end(), sub) - subs.begin();
        for (const Override& ov : overrides)
            if (ov.opts[sub_index]->count() > 0) cfg[ov.key] = ov.get();

        int nthreads = resolve_threads(cfg);
        std::string name = sub->get_name();
        if (name == "mesh") cmd_mesh(cfg, nthreads);
        else if (name == "solve") cmd_solve(cfg, nthreads);
        else if (name == "field") cmd_field(cfg, nthreads);
        else if (name == "farfield") cmd_farfield(cfg, nthreads);
        else if (name == "converge") cmd_converge(cfg, nthreads);
        else if (name == "compare-prefractal") cmd_compare_prefractal(cfg, nthreads);
        else cmd_canonical_dump(cfg, nthreads);
    } catch (const json::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numeric failure: %s\n", e.what());
        return 3;
    }
    return 0;
}
