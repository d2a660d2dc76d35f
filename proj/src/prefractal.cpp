#include "fracscat/prefractal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace fracscat {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kSqrt3 = 1.7320508075688772935;

// Koch boundary at the given substitution level; starts from the inscribed
// triangle of circumradius s0/sqrt(3), counter-clockwise. For a CCW polygon
// the outward bump is to the right of the travel direction.
std::vector<Vec2> koch_polygon(int level, double s0) {
    double r = s0 / kSqrt3;
    std::vector<Vec2> poly{
        {-0.5 * s0, 0.5 * r},
        {0.0, -r},
        {0.5 * s0, 0.5 * r},
    };
    for (int l = 0; l < level; ++l) {
        std::vector<Vec2> next;
        next.reserve(4 * poly.size());
        for (std::size_t i = 0; i < poly.size(); ++i) {
            Vec2 a = poly[i];
            Vec2 b = poly[(i + 1) % poly.size()];
            Vec2 d = b - a;
            next.push_back(a);
            next.push_back(a + d * (1.0 / 3.0));
            next.push_back((a + b) * 0.5 + Vec2{d.y, -d.x} * (kSqrt3 / 6.0));
            next.push_back(a + d * (2.0 / 3.0));
        }
        poly = std::move(next);
    }
    return poly;
}

// even-odd rule; triangle centroids never share a y with a polygon vertex
// (centroid heights sit at thirds of the lattice row spacing)
bool point_in_polygon(const Vec2& p, const std::vector<Vec2>& poly) {
    bool in = false;
    std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            double xi = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (p.x < xi) in = !in;
        }
    }
    return in;
}

double shoelace_area(const std::vector<Vec2>& poly) {
    double s = 0.0;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++)
        s += poly[j].cross(poly[i]);
    return 0.5 * s;
}

} // namespace

double PrefractalMesh::area() const {
    double a = 0.0;
    for (const MeshElement& el : elements) a += el.area;
    return a;
}

long prefractal_count(int j) {
    long p9 = 1, p4 = 1;
    for (int i = 0; i < j; ++i) {
        p9 *= 9;
        p4 *= 4;
    }
    return (8 * p9 - 3 * p4) / 5;
}

PrefractalMesh build_prefractal_mesh(int j, double h0) {
    if (j < 0) throw std::invalid_argument("build_prefractal_mesh: level must be >= 0");
    PrefractalMesh pm;
    pm.level = j;
    pm.h0 = h0;
    double s0 = 0.5 * kSqrt3 * h0;
    pm.side = std::pow(3.0, -j) * s0;
    pm.polygon = koch_polygon(j, s0);
    pm.ref = std::make_shared<const IfsAttractor>(
        make_triangle({0.0, 0.0}, {1.0, 0.0}, {0.5, 0.5 * kSqrt3}));

    double ht = pm.side;
    Vec2 O{-0.5 * s0, s0 * kSqrt3 / 6.0}; // top-left vertex of the base triangle
    Vec2 e1{ht, 0.0};
    Vec2 e2{0.5 * ht, 0.5 * kSqrt3 * ht};

    double i_lo = 0, i_hi = 0, j_lo = 0, j_hi = 0;
    for (const Vec2& v : pm.polygon) {
        double jr = (v.y - O.y) / e2.y;
        double ir = (v.x - O.x - jr * e2.x) / e1.x;
        i_lo = std::min(i_lo, ir);
        i_hi = std::max(i_hi, ir);
        j_lo = std::min(j_lo, jr);
        j_hi = std::max(j_hi, jr);
    }

    Vec2 bary{0.5, kSqrt3 / 6.0};
    double tri_area = pm.ref->measure() * ht * ht;
    std::map<std::pair<long, long>, std::vector<int>> at_vertex;
    auto add = [&](const Similarity& map, std::array<std::pair<long, long>, 3> vs) {
        MeshElement el;
        el.map = map;
        el.node = map(bary);
        el.rho = ht;
        el.area = tri_area;
        el.diam = ht;
        int idx = static_cast<int>(pm.elements.size());
        pm.elements.push_back(std::move(el));
        for (const auto& v : vs) at_vertex[v].push_back(idx);
    };

    for (long jj = static_cast<long>(std::floor(j_lo)) - 1;
         jj <= static_cast<long>(std::ceil(j_hi)); ++jj) {
        for (long i = static_cast<long>(std::floor(i_lo)) - 1;
             i <= static_cast<long>(std::ceil(i_hi)); ++i) {
            Vec2 base = O + static_cast<double>(i) * e1 + static_cast<double>(jj) * e2;
            Vec2 cu = base + Vec2{0.5 * ht, ht * kSqrt3 / 6.0};
            if (point_in_polygon(cu, pm.polygon))
                add({ht, identity2(), base}, {{{i, jj}, {i + 1, jj}, {i, jj + 1}}});
            Vec2 cd = base + e1 + e2 - Vec2{0.5 * ht, ht * kSqrt3 / 6.0};
            if (point_in_polygon(cd, pm.polygon))
                add({ht, rotation(kPi), base + e1 + e2},
                    {{{i + 1, jj}, {i + 1, jj + 1}, {i, jj + 1}}});
        }
    }

    double tiled = static_cast<double>(pm.elements.size()) * tri_area;
    if (std::abs(tiled - shoelace_area(pm.polygon)) > 1e-9 * std::max(1.0, tiled))
        throw std::runtime_error("build_prefractal_mesh: tiling does not cover the polygon");

    pm.split.n = static_cast<int>(pm.elements.size());
    std::set<std::pair<int, int>> pairs;
    for (const auto& [v, ids] : at_vertex)
        for (std::size_t a = 0; a < ids.size(); ++a)
            for (std::size_t b = a + 1; b < ids.size(); ++b)
                pairs.insert({std::min(ids[a], ids[b]), std::max(ids[a], ids[b])});
    pm.split.singular.assign(pairs.begin(), pairs.end());
    pm.split.finalize();
    return pm;
}

CanonicalSystem derive_prefractal_canonical(const PrefractalMesh& pm) {
    std::vector<CellPair> seeds;
    double inv = 1.0 / pm.side;
    for (const auto& [i, j] : pm.split.singular) {
        // rescale to unit-triangle coordinates so class cells stay O(1)
        Similarity norm{inv, identity2(), Vec2{0.0, 0.0} - pm.elements[i].map.t * inv};
        CellPair p{norm * pm.elements[i].map, norm * pm.elements[j].map};
        bool known = false;
        Similarity T;
        for (const CellPair& q : seeds)
            if (pair_congruence(*pm.ref, p, q, T)) {
                known = true;
                break;
            }
        if (!known) seeds.push_back(p);
    }
    return CanonicalSystem::derive(pm.ref, std::move(seeds));
}

GalerkinSystem assemble_prefractal(const PrefractalMesh& pm, const WaveParams& wp,
                                   const CanonicalSystem& sys) {
    QuadPolicy pol = QuadPolicy::make(1, pm.side, 1.0);
    pol.h_s = 0.25; // canonical width in reference-triangle units
    GalerkinSystem out;
    out.params = wp;
    out.policy = pol;
    out.A = assemble_matrix(*pm.ref, pm.elements, pm.split, wp, pol, sys);
    out.g = assemble_rhs(*pm.ref, pm.elements, wp, pol);
    out.basis_norm.reserve(pm.elements.size());
    for (const MeshElement& el : pm.elements) out.basis_norm.push_back(std::sqrt(el.area));
    return out;
}

Eigen::VectorXcd prefractal_functional(const PrefractalMesh& pm, const WaveParams& wp, double h_J,
                                       const Functional& f) {
    return assemble_functional(*pm.ref, pm.elements, wp, h_J, f);
}

} // namespace fracscat
