#include <doctest.h>

#include <cmath>
#include <memory>

#include "fracscat/postprocess.hpp"
#include "fracscat/prefractal.hpp"
#include "fracscat/solve.hpp"

using namespace fracscat;

namespace {

// closed-form log potential of a polygon: P(x) = int_T log|x-y| dy, via the
// divergence theorem with F = r((log r)/2 - 1/4)
double log_potential(const Vec2& x, const std::vector<Vec2>& poly) {
    double acc = 0.0;
    std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        Vec2 a = poly[j] - x, b = poly[i] - x;
        Vec2 d = b - a;
        double len = d.norm();
        if (len < 1e-15) continue;
        Vec2 u = d * (1.0 / len);
        double t0 = a.dot(u), t1 = b.dot(u);
        double dd = a.cross(u); // r.n with outward normal (u.y, -u.x)
        auto F = [&](double t) {
            double v = 0.5 * t * std::log(dd * dd + t * t) - t;
            if (std::abs(dd) > 1e-15) v += dd * std::atan(t / dd);
            return v;
        };
        acc += dd * (0.5 * (F(t1) - F(t0)) - 0.25 * (t1 - t0));
    }
    return acc;
}

// composite centroid rule over the unit triangle split into n^2 cells
double triangle_self_log_oracle(int n) {
    std::vector<Vec2> tri{{0.0, 0.0}, {1.0, 0.0}, {0.5, 0.8660254037844386468}};
    Vec2 e1 = tri[1] * (1.0 / n), e2 = tri[2] * (1.0 / n);
    double cell = 0.4330127018922193234 / (static_cast<double>(n) * n);
    double s = 0.0;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n - r; ++c) {
            Vec2 a = static_cast<double>(c) * e1 + static_cast<double>(r) * e2;
            s += log_potential(a + (e1 + e2) * (1.0 / 3.0), tri) * cell;
            if (c < n - r - 1)
                s += log_potential(a + (e1 + e2) * (2.0 / 3.0), tri) * cell;
        }
    return s;
}

} // namespace

TEST_CASE("prefractal: element counts match the closed form") {
    long expect[] = {1, 12, 120, 1128, 10344, 93864, 847848};
    for (int j = 0; j <= 6; ++j) CHECK(prefractal_count(j) == expect[j]);

    for (int j = 0; j <= 4; ++j) {
        PrefractalMesh pm = build_prefractal_mesh(j);
        CHECK(static_cast<long>(pm.elements.size()) == expect[j]);
        CHECK(pm.split.n == static_cast<int>(pm.elements.size()));
    }

    PrefractalMesh pm = build_prefractal_mesh(2);
    double tri_area = 0.4330127018922193234 * pm.side * pm.side;
    for (const MeshElement& el : pm.elements) {
        CHECK(el.map.rho == doctest::Approx(pm.side).epsilon(1e-14));
        CHECK(el.area == doctest::Approx(tri_area).epsilon(1e-14));
        CHECK(el.diam == doctest::Approx(pm.side).epsilon(1e-14));
    }
    CHECK_THROWS(build_prefractal_mesh(-1));
}

TEST_CASE("prefractal: covered area grows to the attractor with gap ratio 4/9") {
    double measure = make_koch_snowflake().measure();
    std::vector<double> gap;
    double prev = 0.0;
    for (int j = 0; j <= 5; ++j) {
        PrefractalMesh pm = build_prefractal_mesh(j);
        double a = pm.area();
        CHECK(a > prev);
        CHECK(a < measure);
        prev = a;
        gap.push_back(measure - a);
    }
    for (int j = 2; j <= 4; ++j)
        CHECK(gap[j + 1] / gap[j] == doctest::Approx(4.0 / 9.0).epsilon(0.05));
}

TEST_CASE("prefractal: canonical classes cover every touching geometry") {
    PrefractalMesh pm = build_prefractal_mesh(2);
    CanonicalSystem sys = derive_prefractal_canonical(pm);
    CHECK(sys.num_classes() >= 3);
    bool has_self = false, has_edge = false;
    for (const std::string& k : sys.class_kind()) {
        if (k == "self") has_self = true;
        if (k == "edge") has_edge = true;
    }
    CHECK(has_self);
    CHECK(has_edge);

    double inv = 1.0 / pm.side;
    for (const auto& [i, j] : pm.split.singular) {
        Similarity norm{inv, identity2(), Vec2{0.0, 0.0} - pm.elements[i].map.t * inv};
        CellPair p{norm * pm.elements[i].map, norm * pm.elements[j].map};
        CHECK_NOTHROW(sys.match(p));
    }
}

TEST_CASE("prefractal: triangle self-integral matches the closed-form potential oracle") {
    // Richardson in the outer rule; the Laplacian of the potential is constant
    // inside, so the h^2 term dominates cleanly
    double o1 = triangle_self_log_oracle(128);
    double o2 = triangle_self_log_oracle(256);
    double oracle = (4.0 * o2 - o1) / 3.0;

    PrefractalMesh pm = build_prefractal_mesh(1);
    CanonicalSystem sys = derive_prefractal_canonical(pm);
    Similarity id{1.0, identity2(), {0.0, 0.0}};
    double got = sys.log_integral(CellPair{id, id}, 1.0 / 32.0);
    CHECK(got == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("prefractal: zero contrast gives the identity system") {
    PrefractalMesh pm = build_prefractal_mesh(1);
    CanonicalSystem sys = derive_prefractal_canonical(pm);
    WaveParams wp;
    wp.k = 2.0;
    wp.m = Cplx(0.0, 0.0);
    GalerkinSystem gal = assemble_prefractal(pm, wp, sys);
    CHECK((gal.A - Eigen::MatrixXcd::Identity(12, 12)).cwiseAbs().maxCoeff() == 0.0);
    for (int i = 0; i < 12; ++i)
        CHECK(std::abs(gal.g(i)) <= std::sqrt(pm.elements[i].area) + 1e-12);
}

TEST_CASE("prefractal: scattered field approaches the conforming solution") {
    WaveParams wp;
    wp.k = 5.0;
    wp.m = Cplx(1.0, 0.0);
    wp.direction = Vec2{0.0, 1.0};

    auto ifs = std::make_shared<const IfsAttractor>(make_koch_snowflake());
    double h0 = ifs->diam();
    std::vector<Vec2> pts;
    for (int i = 0; i < 8; ++i) {
        double t = 2.0 * M_PI * i / 8;
        pts.push_back(Vec2{ifs->barycentre().x + h0 * std::cos(t),
                           ifs->barycentre().y + h0 * std::sin(t)});
    }

    CanonicalSystem csys = CanonicalSystem::derive(ifs);
    LhMesh mesh = build_lh_mesh(ifs, mesh_level_sequence(*ifs, 6)[6]);
    InteractionSplit split = classify_pairs(mesh);
    QuadPolicy pol = QuadPolicy::make(1, mesh.h(), h0);
    GalerkinSystem gal = assemble_system(mesh, split, wp, pol, csys);
    SolveReport rep = solve_dense(gal);
    auto ref = scattered_field(rep.coefficients, mesh, wp, pol, pts);
    double scale = 0.0;
    for (const FieldSample& s : ref) scale = std::max(scale, std::abs(s.value));

    auto prefractal_err = [&](int j) {
        PrefractalMesh pm = build_prefractal_mesh(j);
        CanonicalSystem sys = derive_prefractal_canonical(pm);
        GalerkinSystem pg = assemble_prefractal(pm, wp, sys);
        SolveReport prep = solve_dense(pg);
        double e = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            Functional f;
            f.kind = Functional::Kind::ScatteredField;
            f.x0 = pts[i];
            Eigen::VectorXcd jv = prefractal_functional(pm, wp, pg.policy.h_J, f);
            Cplx u = (prep.coefficients.array() * jv.array()).sum();
            e = std::max(e, std::abs(u - ref[i].value));
        }
        return e / scale;
    };

    double e1 = prefractal_err(1);
    double e2 = prefractal_err(2);
    CHECK(e2 < e1);
    CHECK(e2 < 0.15);
}
