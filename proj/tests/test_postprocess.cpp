#include <doctest.h>

#include <cmath>
#include <memory>

#include "fracscat/postprocess.hpp"

using namespace fracscat;

namespace {

struct Setup {
    std::shared_ptr<const IfsAttractor> ifs;
    LhMesh mesh;
    InteractionSplit split;
    CanonicalSystem sys;
    WaveParams wp;
    QuadPolicy pol;
    GalerkinSystem gal;
    SolveReport rep;
};

Setup solve_level(IfsAttractor a, int level, double k, Cplx m,
                  Vec2 dir = Vec2{0.0, 1.0}) {
    auto ifs = std::make_shared<const IfsAttractor>(std::move(a));
    LhMesh mesh = build_lh_mesh(ifs, mesh_level_sequence(*ifs, level)[level]);
    InteractionSplit split = classify_pairs(mesh);
    CanonicalSystem sys = CanonicalSystem::derive(ifs);
    WaveParams wp;
    wp.k = k;
    wp.m = m;
    wp.direction = dir;
    QuadPolicy pol = QuadPolicy::make(1, mesh.h(), ifs->diam());
    GalerkinSystem gal = assemble_system(mesh, split, wp, pol, sys);
    SolveReport rep = solve_dense(gal);
    return {ifs,           std::move(mesh), std::move(split), std::move(sys),
            wp,            pol,             std::move(gal),   std::move(rep)};
}

std::vector<Vec2> circle_points(const Vec2& centre, double radius, int n) {
    std::vector<Vec2> pts;
    for (int i = 0; i < n; ++i) {
        double t = 2.0 * M_PI * i / n;
        pts.push_back(Vec2{centre.x + radius * std::cos(t), centre.y + radius * std::sin(t)});
    }
    return pts;
}

} // namespace

TEST_CASE("postprocess: zero contrast scatters nothing") {
    Setup s = solve_level(make_fudgeflake(), 2, 2.0, Cplx(0.0, 0.0));
    auto pts = circle_points(s.ifs->barycentre(), s.ifs->diam(), 8);
    for (const FieldSample& f : scattered_field(s.rep.coefficients, s.mesh, s.wp, s.pol, pts))
        CHECK(std::abs(f.value) == 0.0);

    FarFieldCurve c = far_field(s.rep.coefficients, s.mesh, s.wp, s.pol, {0.0, 1.0, 2.0});
    for (Cplx v : c.values) CHECK(std::abs(v) == 0.0);

    FieldGrid g = field_grid(s.rep.coefficients, s.mesh, s.wp, s.pol, Vec2{-2.0, -2.0},
                             Vec2{2.0, 2.0}, 5, 4);
    REQUIRE(g.samples.size() == 20);
    for (const FieldSample& f : g.samples) {
        CHECK(f.ok);
        CHECK(std::abs(f.value - incident_field(s.wp, f.point)) < 1e-14);
    }

    auto u1 = iterated_galerkin(s.rep.coefficients, s.mesh, s.wp, s.pol);
    for (int i = 0; i < s.mesh.size(); ++i)
        CHECK(std::abs(u1[i] - incident_field(s.wp, s.mesh.elements()[i].node)) < 1e-14);
}

TEST_CASE("postprocess: linearity and total-field consistency") {
    Setup s = solve_level(make_gosper(), 2, 3.0, Cplx(0.8, 0.1));
    auto pts = circle_points(s.ifs->barycentre(), 1.5 * s.ifs->diam(), 6);

    auto us1 = scattered_field(s.rep.coefficients, s.mesh, s.wp, s.pol, pts);
    auto us2 = scattered_field(2.0 * s.rep.coefficients, s.mesh, s.wp, s.pol, pts);
    auto ut = total_field(s.rep.coefficients, s.mesh, s.wp, s.pol, pts);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        CHECK(std::abs(us2[i].value - 2.0 * us1[i].value) < 1e-13 * std::abs(us1[i].value));
        CHECK(std::abs(ut[i].value - us1[i].value - incident_field(s.wp, pts[i])) < 1e-12);
        CHECK(ut[i].kind == FieldSample::Kind::Total);
    }

    FarFieldCurve one = far_field(s.rep.coefficients, s.mesh, s.wp, s.pol, {0.0, 2.0 * M_PI});
    CHECK(std::abs(one.values[0] - one.values[1]) < 1e-14);
}

TEST_CASE("postprocess: nested L2 error") {
    auto ifs = std::make_shared<const IfsAttractor>(make_fudgeflake());
    auto hs = mesh_level_sequence(*ifs, 3);
    LhMesh coarse = build_lh_mesh(ifs, hs[1]);
    LhMesh fine = build_lh_mesh(ifs, hs[3]);
    auto parent = nested_restriction(coarse, fine);

    auto norms = [](const LhMesh& m) {
        Eigen::VectorXcd v(m.size());
        for (int i = 0; i < m.size(); ++i) v(i) = std::sqrt(m.elements()[i].area);
        return v;
    };
    Eigen::VectorXcd ones_c = norms(coarse), ones_f = norms(fine);

    auto self = nested_restriction(coarse, coarse);
    CHECK(l2_error_nested(ones_c, coarse, ones_c, coarse, self) == 0.0);

    // physical 1 vs physical 0 across all of Omega
    double err = l2_error_nested(ones_c, coarse, Eigen::VectorXcd::Zero(fine.size()), fine, parent);
    CHECK(err == doctest::Approx(std::sqrt(ifs->measure())).epsilon(1e-12));

    // fine indicator of a single element
    Eigen::VectorXcd ind = Eigen::VectorXcd::Zero(fine.size());
    ind(5) = std::sqrt(fine.elements()[5].area);
    double e2 = l2_error_nested(Eigen::VectorXcd::Zero(coarse.size()), coarse, ind, fine, parent);
    CHECK(e2 == doctest::Approx(std::sqrt(fine.elements()[5].area)).epsilon(1e-12));

    CHECK_THROWS(l2_error_nested(ones_c, coarse, ones_f, fine, self));
}

TEST_CASE("postprocess: iterated solution equals incident plus scattered") {
    Setup s = solve_level(make_fudgeflake(), 2, 2.0, Cplx(0.5, 0.0));
    auto u1 = iterated_galerkin(s.rep.coefficients, s.mesh, s.wp, s.pol);
    std::vector<Vec2> nodes;
    for (const MeshElement& el : s.mesh.elements()) nodes.push_back(el.node);
    // nodes lie inside the hull, so scattered_field refines h_J by one level
    // on its own, matching iterated_galerkin's width
    auto us = scattered_field(s.rep.coefficients, s.mesh, s.wp, s.pol, nodes);
    for (int i = 0; i < s.mesh.size(); ++i) {
        Cplx expect = incident_field(s.wp, nodes[i]) + us[i].value;
        CHECK(std::abs(u1[i] - expect) < 1e-10);
    }
}

TEST_CASE("postprocess: far-field magnitude inherits the scatterer symmetry") {
    Setup s = solve_level(make_koch_snowflake(), 3, 5.0, Cplx(1.0, 0.0), Vec2{0.0, 1.0});
    std::vector<double> th, th_m;
    for (int i = 0; i < 16; ++i) {
        double t = 0.1 + i * 0.35;
        th.push_back(t);
        th_m.push_back(M_PI - t);
    }
    FarFieldCurve a = far_field(s.rep.coefficients, s.mesh, s.wp, s.pol, th);
    FarFieldCurve b = far_field(s.rep.coefficients, s.mesh, s.wp, s.pol, th_m);
    for (std::size_t i = 0; i < th.size(); ++i)
        CHECK(std::abs(std::abs(a.values[i]) - std::abs(b.values[i])) < 1e-8);
}

TEST_CASE("postprocess: scattered field on a far circle converges at second order") {
    Setup ref = solve_level(make_fudgeflake(), 6, 2.0, Cplx(1.0, 0.0));
    auto pts = circle_points(ref.ifs->barycentre(), ref.ifs->diam(), 8);
    auto uref = scattered_field(ref.rep.coefficients, ref.mesh, ref.wp, ref.pol, pts);

    std::vector<double> hs, errs;
    for (int l = 2; l <= 4; ++l) {
        Setup s = solve_level(make_fudgeflake(), l, 2.0, Cplx(1.0, 0.0));
        auto us = scattered_field(s.rep.coefficients, s.mesh, s.wp, s.pol, pts);
        double e = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i)
            e = std::max(e, std::abs(us[i].value - uref[i].value));
        hs.push_back(s.mesh.h());
        errs.push_back(e);
    }
    CHECK(eoc_slope(hs, errs) == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("postprocess: iterated solution converges faster than the raw one") {
    Setup ref = solve_level(make_fudgeflake(), 6, 2.0, Cplx(1.0, 0.0));
    std::vector<double> hs, err_u, err_u1;
    for (int l = 2; l <= 4; ++l) {
        Setup s = solve_level(make_fudgeflake(), l, 2.0, Cplx(1.0, 0.0));
        auto parent = nested_restriction(s.mesh, ref.mesh);
        err_u.push_back(l2_error_nested(s.rep.coefficients, s.mesh, ref.rep.coefficients,
                                        ref.mesh, parent));

        auto u1 = iterated_galerkin(s.rep.coefficients, s.mesh, s.wp, s.pol);
        std::vector<Vec2> nodes;
        for (const MeshElement& el : s.mesh.elements()) nodes.push_back(el.node);
        QuadPolicy fine = ref.pol;
        fine.h_J = ref.pol.h_J * level_ratio(*ref.ifs);
        auto ut = total_field(ref.rep.coefficients, ref.mesh, ref.wp, fine, nodes);
        double acc = 0.0;
        for (int i = 0; i < s.mesh.size(); ++i)
            acc += std::norm(u1[i] - ut[i].value) * s.mesh.elements()[i].area;
        err_u1.push_back(std::sqrt(acc));
        hs.push_back(s.mesh.h());
    }
    double eoc_u = eoc_slope(hs, err_u);
    double eoc_u1 = eoc_slope(hs, err_u1);
    CHECK(eoc_u1 > eoc_u + 0.4);
}

TEST_CASE("postprocess: slope helpers") {
    std::vector<double> x{0.0, 1.0, 2.0, 3.0};
    std::vector<double> y{1.0, 4.0, 7.0, 10.0};
    CHECK(ls_slope(x, y) == doctest::Approx(3.0).epsilon(1e-14));

    std::vector<double> h{0.5, 0.25, 0.125, 0.0625};
    std::vector<double> err;
    for (double v : h) err.push_back(3.0 * v * v);
    CHECK(eoc_slope(h, err) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK_THROWS(eoc_slope(h, {1.0}));
    CHECK_THROWS(ls_slope({1.0}, {2.0}));
}
