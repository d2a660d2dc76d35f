#include "fracscat/assembly.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace fracscat {

QuadPolicy QuadPolicy::make(int alpha, double h, double h0) {
    QuadPolicy p;
    p.alpha = alpha;
    if (alpha == 1) {
        p.h_r = h;
        p.h_s = h0;
    } else if (alpha == 2) {
        p.h_r = std::pow(h, 1.5);
        p.h_s = std::sqrt(h);
    } else {
        throw std::invalid_argument("QuadPolicy: alpha must be 1 or 2");
    }
    p.h_star = h;
    p.h_g = h;
    p.h_J = h;
    return p;
}

namespace {

// quantised relative placement of a cell pair; congruent same-scale pairs
// share entries, which also keeps assembly deterministic
struct PairKey {
    std::int64_t v[8];
    bool touching;
    bool operator==(const PairKey& o) const {
        if (touching != o.touching) return false;
        for (int i = 0; i < 8; ++i)
            if (v[i] != o.v[i]) return false;
        return true;
    }
};
struct PairKeyHash {
    std::size_t operator()(const PairKey& k) const {
        std::size_t h = 1469598103934665603ull ^ (k.touching ? 0x9e3779b9ull : 0);
        for (int i = 0; i < 8; ++i) {
            h ^= static_cast<std::size_t>(k.v[i]);
            h *= 1099511628211ull;
        }
        return h;
    }
};

PairKey make_key(const MeshElement& ei, const MeshElement& ej, bool touching) {
    Similarity rel = ei.map.inverse() * ej.map;
    double q = 1e-9;
    PairKey k{};
    k.touching = touching;
    k.v[0] = llround(rel.rho / q);
    k.v[1] = llround(rel.Q.a / q);
    k.v[2] = llround(rel.Q.b / q);
    k.v[3] = llround(rel.Q.c / q);
    k.v[4] = llround(rel.Q.d / q);
    k.v[5] = llround(rel.t.x / q);
    k.v[6] = llround(rel.t.y / q);
    // the relative map alone loses the absolute scale; pairs at different
    // levels can share it on mixed-size meshes
    k.v[7] = llround(ei.map.rho / q);
    return k;
}

} // namespace

Cplx interaction_entry(const IfsAttractor& ref, const MeshElement& ei, const MeshElement& ej,
                       bool touching, const WaveParams& wp, const QuadPolicy& pol,
                       const CanonicalSystem* sys) {
    double ni = std::sqrt(ei.area);
    double nj = std::sqrt(ej.area);
    Cplx mk2 = wp.m * wp.k * wp.k;
    if (!touching) {
        auto g = [&](const Vec2& x, const Vec2& y) { return phi(wp.k, x, y); };
        Cplx q = double_rule_value(ref, ei.map, ej.map, pol.h_r, g);
        return -mk2 * q / (ni * nj);
    }
    if (!sys) throw std::invalid_argument("interaction_entry: touching pair needs a canonical system");
    double g0 = sys->log_integral(CellPair{ei.map, ej.map}, pol.h_s) / (ni * nj);
    auto gs = [&](const Vec2& x, const Vec2& y) { return phi_star(wp.k, x, y); };
    Cplx gstar = double_rule_value(ref, ei.map, ej.map, pol.h_star, gs) / (ni * nj);
    return -mk2 * (kC2 * g0 + gstar);
}

Eigen::MatrixXcd assemble_matrix(const IfsAttractor& ref, const std::vector<MeshElement>& els,
                                 const InteractionSplit& split, const WaveParams& wp,
                                 const QuadPolicy& pol, const CanonicalSystem& sys) {
    wp.validate();
    int n = static_cast<int>(els.size());
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(n, n);
    if (wp.m == Cplx(0.0, 0.0)) return A;

    std::unordered_map<PairKey, Cplx, PairKeyHash> cache;
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            bool touching = split.touching(i, j);
            PairKey key = make_key(els[i], els[j], touching);
            auto it = cache.find(key);
            Cplx e;
            if (it != cache.end()) {
                e = it->second;
            } else {
                e = interaction_entry(ref, els[i], els[j], touching, wp, pol, &sys);
                cache.emplace(key, e);
            }
            A(i, j) += e;
            if (j != i) A(j, i) += e;
        }
    }
    return A;
}

Eigen::MatrixXcd assemble_matrix(const LhMesh& mesh, const InteractionSplit& split,
                                 const WaveParams& wp, const QuadPolicy& pol,
                                 const CanonicalSystem& sys) {
    return assemble_matrix(mesh.ifs(), mesh.elements(), split, wp, pol, sys);
}

Eigen::VectorXcd assemble_rhs(const IfsAttractor& ref, const std::vector<MeshElement>& els,
                              const WaveParams& wp, const QuadPolicy& pol) {
    wp.validate();
    Eigen::VectorXcd g(els.size());
    auto u = [&](const Vec2& x) { return incident_field(wp, x); };
    for (std::size_t i = 0; i < els.size(); ++i) {
        QuadRule r = single_rule(ref, els[i].map, pol.h_g);
        g(i) = apply_rule(r, u) / std::sqrt(els[i].area);
    }
    return g;
}

Eigen::VectorXcd assemble_rhs(const LhMesh& mesh, const WaveParams& wp, const QuadPolicy& pol) {
    if (wp.incident == WaveParams::Incident::PointSource &&
        point_in_convex_polygon(wp.source, mesh.ifs().hull()))
        throw std::invalid_argument("assemble_rhs: point source lies on the scatterer");
    return assemble_rhs(mesh.ifs(), mesh.elements(), wp, pol);
}

Eigen::VectorXcd assemble_functional(const IfsAttractor& ifs, const std::vector<MeshElement>& els,
                                     const WaveParams& wp, double h_J, const Functional& f) {
    wp.validate();
    int n = static_cast<int>(els.size());
    Eigen::VectorXcd j(n);
    double k = wp.k;
    Cplx mk = wp.m;

    if (f.kind == Functional::Kind::FarField) {
        Vec2 xhat{std::cos(f.theta), std::sin(f.theta)};
        Cplx c = far_field_constant() * std::pow(k, 1.5) * mk;
        auto density = [&](const Vec2& y) {
            double phase = -k * xhat.dot(y);
            return c * Cplx(std::cos(phase), std::sin(phase));
        };
        for (int i = 0; i < n; ++i) {
            QuadRule r = single_rule(ifs, els[i].map, h_J);
            j(i) = apply_rule(r, density) / std::sqrt(els[i].area);
        }
        return j;
    }

    auto density = [&](const Vec2& y) {
        double r = dist(f.x0, y);
        if (r < 1e-12)
            throw std::runtime_error(
                "assemble_functional: evaluation point collides with a quadrature node; refine h_J");
        return k * k * mk * phi(k, f.x0, y);
    };
    for (int i = 0; i < n; ++i) {
        QuadRule r = single_rule(ifs, els[i].map, h_J);
        j(i) = apply_rule(r, density) / std::sqrt(els[i].area);
    }
    return j;
}

Eigen::VectorXcd assemble_functional(const LhMesh& mesh, const WaveParams& wp, double h_J,
                                     const Functional& f) {
    return assemble_functional(mesh.ifs(), mesh.elements(), wp, h_J, f);
}

GalerkinSystem assemble_system(const LhMesh& mesh, const InteractionSplit& split,
                               const WaveParams& wp, const QuadPolicy& pol,
                               const CanonicalSystem& sys) {
    GalerkinSystem out;
    out.params = wp;
    out.policy = pol;
    out.A = assemble_matrix(mesh, split, wp, pol, sys);
    out.g = assemble_rhs(mesh, wp, pol);
    out.basis_norm.reserve(mesh.size());
    for (const MeshElement& el : mesh.elements()) out.basis_norm.push_back(std::sqrt(el.area));
    return out;
}

} // namespace fracscat
