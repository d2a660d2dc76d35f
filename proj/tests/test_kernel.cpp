#include <doctest.h>

#include <cmath>
#include <random>

#include "fracscat/bessel.hpp"
#include "fracscat/kernel.hpp"

using namespace fracscat;

namespace {
struct Ref {
    double z, j0, y0, j1, y1;
};
// high-precision references, straddling the series/asymptotic branch points
const Ref kRefs[] = {
    {0.001, 0.999999750000015625, -4.471416611375923269, 4.9999993750000260417e-4, -636.62216723113942807},
    {0.1, 0.99750156206604003228, -1.5342386513503668441, 0.049937526036241997556, -6.4589510947020269877},
    {1.0, 0.76519768655796655145, 0.088256964215676957983, 0.44005058574493351596, -0.78121282130028871655},
    {2.0, 0.22389077914123566805, 0.5103756726497451196, 0.5767248077568733872, -0.10703243154093754689},
    {3.9, -0.40182601488763990503, 0.023375908198718927603, -0.027244039620779926253, 0.40782001952653789649},
    {4.1, -0.38866967983585368303, -0.05609462660634461865, -0.10327325774733870179, 0.38459403481891653837},
    {5.0, -0.17759677131433830435, -0.30851762524903378007, -0.32757913759146522204, 0.1478631433912268448},
    {7.9, 0.19436184484127831756, 0.20652094814437570403, 0.21917939992175114408, -0.1817210772805732092},
    {8.1, 0.14751745404437758233, 0.23809132870223485593, 0.24760776698159291818, -0.13314879595249583572},
    {20.0, 0.16702466434058315473, 0.062640596809383831162, 0.066833124175850045579, -0.16551161436252129586},
    {100.0, 0.019985850304223122424, -0.077244313365083152254, -0.077145352014112158033, -0.020372312002759793305},
    {500.0, -0.034100556880731998265, 0.0105067087398313741, 0.010472613470372292844, 0.034111080629137135895},
    {1000.0, 0.024786686152420174561, 0.0047159179776228133998, 0.0047283119070895239176, -0.024784331292351778915},
};
} // namespace

TEST_CASE("bessel values against frozen references") {
    for (const Ref& r : kRefs) {
        double scale0 = std::max(std::abs(r.j0), std::abs(r.y0));
        double scale1 = std::max(std::abs(r.j1), std::abs(r.y1));
        CHECK(std::abs(bessel_j0(r.z) - r.j0) < 1e-12 * scale0);
        CHECK(std::abs(bessel_y0(r.z) - r.y0) < 1e-12 * scale0);
        CHECK(std::abs(bessel_j1(r.z) - r.j1) < 1e-12 * scale1);
        CHECK(std::abs(bessel_y1(r.z) - r.y1) < 1e-12 * scale1);
    }
}

TEST_CASE("hankel1_0 relative accuracy") {
    for (const Ref& r : kRefs) {
        Cplx h = hankel1_0(r.z);
        Cplx ref(r.j0, r.y0);
        CHECK(std::abs(h - ref) <= 1e-12 * std::abs(ref));
    }
    CHECK_THROWS(hankel1_0(0.0));
    CHECK_THROWS(hankel1_0(-1.0));
}

TEST_CASE("wronskian J1 Y0 - J0 Y1 = 2/(pi z)") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> U(1e-3, 1000.0);
    for (int i = 0; i < 2000; ++i) {
        double z = U(rng);
        double w = bessel_j1(z) * bessel_y0(z) - bessel_j0(z) * bessel_y1(z);
        double ref = 2.0 / (M_PI * z);
        CHECK(std::abs(w - ref) < 1e-10 * std::max(1.0, std::abs(ref)));
    }
}

TEST_CASE("kernel split Phi = c2 Phi0 + Phi*") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    for (double k : {0.5, 1.0, 5.0, 20.0}) {
        for (int i = 0; i < 2500; ++i) {
            Vec2 x{U(rng), U(rng)}, y{U(rng), U(rng)};
            if (dist(x, y) < 1e-6) continue;
            Cplx lhs = phi(k, x, y);
            Cplx rhs = kC2 * phi0(x, y) + phi_star(k, x, y);
            CHECK(std::abs(lhs - rhs) < 1e-13 * std::max(1.0, std::abs(lhs)));
        }
    }
}

TEST_CASE("phi_star diagonal limit and continuity") {
    Vec2 x{0.3, -0.1};
    Cplx d1 = phi_star(1.0, x, x);
    CHECK(d1.real() == doctest::Approx(0.018451073777171806).epsilon(1e-12));
    CHECK(d1.imag() == doctest::Approx(0.25).epsilon(1e-14));
    Cplx d5 = phi_star(5.0, x, x);
    CHECK(d5.real() == doctest::Approx(-0.23769892558621627).epsilon(1e-12));

    // frozen off-diagonal values
    Cplx v = phi_star(1.0, {0.0, 0.0}, {0.3, 0.0});
    CHECK(v.real() == doctest::Approx(0.010200171294445885).epsilon(1e-12));
    CHECK(v.imag() == doctest::Approx(0.24440656163457402).epsilon(1e-12));

    // approach along a shrinking offset stays close to the diagonal value
    for (double k : {1.0, 5.0}) {
        Cplx diag = phi_star(k, x, x);
        Cplx near = phi_star(k, x, x + Vec2{1e-7, 0.0});
        CHECK(std::abs(near - diag) < 1e-5);
    }
}

TEST_CASE("phi_star gradient bound near the diagonal") {
    // |grad Phi*| stays below 10 k in a neighbourhood of the diagonal
    for (double k : {1.0, 2.0, 8.0}) {
        Vec2 x{0.1, 0.4};
        for (double r : {1e-3, 1e-2, 0.05, 0.2}) {
            double eps = 1e-6;
            auto f = [&](const Vec2& y) { return phi_star(k, x, y); };
            Vec2 y{x.x + r, x.y};
            Cplx gx = (f({y.x + eps, y.y}) - f({y.x - eps, y.y})) / (2.0 * eps);
            Cplx gy = (f({y.x, y.y + eps}) - f({y.x, y.y - eps})) / (2.0 * eps);
            double g = std::sqrt(std::norm(gx) + std::norm(gy));
            CHECK(g <= 10.0 * k);
        }
    }
}

TEST_CASE("incident fields") {
    WaveParams wp;
    wp.k = 2.0;
    wp.incident = WaveParams::Incident::PlaneWave;
    wp.direction = {0.0, 1.0};
    wp.validate();
    Vec2 x{0.7, 0.3};
    Cplx u = incident_field(wp, x);
    CHECK(std::abs(u) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(u.real() == doctest::Approx(std::cos(2.0 * 0.3)).epsilon(1e-14));

    wp.incident = WaveParams::Incident::PointSource;
    wp.source = {5.0, 0.0};
    CHECK(incident_field(wp, x) == phi(wp.k, x, wp.source));

    WaveParams bad = wp;
    bad.k = -1.0;
    CHECK_THROWS(bad.validate());
    bad = wp;
    bad.m = Cplx(1.0, -0.1);
    CHECK_THROWS(bad.validate());
    bad = wp;
    bad.incident = WaveParams::Incident::PlaneWave;
    bad.direction = {1.0, 1.0};
    CHECK_THROWS(bad.validate());
}
