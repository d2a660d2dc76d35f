#include "fracscat/postprocess.hpp"

#include <cmath>
#include <stdexcept>

namespace fracscat {

namespace {

Cplx eval_scattered(const Eigen::VectorXcd& coeffs, const LhMesh& mesh, const WaveParams& wp,
                    double h_J, const Vec2& x0) {
    Functional f;
    f.kind = Functional::Kind::ScatteredField;
    f.x0 = x0;
    Eigen::VectorXcd j = assemble_functional(mesh, wp, h_J, f);
    return (coeffs.array() * j.array()).sum();
}

Cplx eval_scattered_robust(const Eigen::VectorXcd& coeffs, const LhMesh& mesh,
                           const WaveParams& wp, const QuadPolicy& pol, const Vec2& x0,
                           bool* ok = nullptr) {
    double ratio = level_ratio(mesh.ifs());
    double h_J = pol.h_J;
    if (point_in_convex_polygon(x0, mesh.ifs().hull())) h_J *= ratio;
    try {
        if (ok) *ok = true;
        return eval_scattered(coeffs, mesh, wp, h_J, x0);
    } catch (const std::runtime_error&) {
        try {
            Cplx v = eval_scattered(coeffs, mesh, wp, h_J * ratio, x0);
            if (ok) *ok = true;
            return v;
        } catch (const std::runtime_error&) {
            // x0 may coincide with a quadrature node at every level (e.g. a
            // fixed point of the IFS); nudge it off by a relative 1e-12
            try {
                double eps = 1e-12 * mesh.ifs().diam();
                Cplx v = eval_scattered(coeffs, mesh, wp, h_J, Vec2{x0.x + eps, x0.y + eps});
                if (ok) *ok = true;
                return v;
            } catch (const std::runtime_error&) {
                if (!ok) throw;
                *ok = false;
                return Cplx(0.0, 0.0);
            }
        }
    }
}

} // namespace

std::vector<FieldSample> scattered_field(const Eigen::VectorXcd& coeffs, const LhMesh& mesh,
                                         const WaveParams& wp, const QuadPolicy& pol,
                                         const std::vector<Vec2>& points) {
    std::vector<FieldSample> out;
    out.reserve(points.size());
    for (const Vec2& p : points) {
        FieldSample s;
        s.point = p;
        s.kind = FieldSample::Kind::Scattered;
        s.value = eval_scattered_robust(coeffs, mesh, wp, pol, p);
        out.push_back(s);
    }
    return out;
}

std::vector<FieldSample> total_field(const Eigen::VectorXcd& coeffs, const LhMesh& mesh,
                                     const WaveParams& wp, const QuadPolicy& pol,
                                     const std::vector<Vec2>& points) {
    std::vector<FieldSample> out = scattered_field(coeffs, mesh, wp, pol, points);
    for (FieldSample& s : out) {
        s.kind = FieldSample::Kind::Total;
        s.value += incident_field(wp, s.point);
    }
    return out;
}

FarFieldCurve far_field(const Eigen::VectorXcd& coeffs, const LhMesh& mesh, const WaveParams& wp,
                        const QuadPolicy& pol, const std::vector<double>& angles) {
    FarFieldCurve curve;
    curve.angles = angles;
    curve.values.reserve(angles.size());
    for (double theta : angles) {
        Functional f;
        f.kind = Functional::Kind::FarField;
        f.theta = theta;
        Eigen::VectorXcd j = assemble_functional(mesh, wp, pol.h_J, f);
        curve.values.push_back((coeffs.array() * j.array()).sum());
    }
    return curve;
}

double l2_error_nested(const Eigen::VectorXcd& coarse, const LhMesh& coarse_mesh,
                       const Eigen::VectorXcd& fine, const LhMesh& fine_mesh,
                       const std::vector<int>& parent_map) {
    if (static_cast<int>(parent_map.size()) != fine_mesh.size() ||
        coarse.size() != coarse_mesh.size() || fine.size() != fine_mesh.size())
        throw std::invalid_argument("l2_error_nested: inconsistent sizes");
    double acc = 0.0;
    for (int i = 0; i < fine_mesh.size(); ++i) {
        int p = parent_map[i];
        // unwind the |Omega|^{1/2} basis normalisation to physical values
        Cplx vc = coarse(p) / std::sqrt(coarse_mesh.elements()[p].area);
        Cplx vf = fine(i) / std::sqrt(fine_mesh.elements()[i].area);
        acc += std::norm(vc - vf) * fine_mesh.elements()[i].area;
    }
    return std::sqrt(acc);
}

std::vector<Cplx> iterated_galerkin(const Eigen::VectorXcd& coeffs, const LhMesh& mesh,
                                    const WaveParams& wp, const QuadPolicy& pol) {
    double h_fine = pol.h_J * level_ratio(mesh.ifs());
    std::vector<Cplx> out;
    out.reserve(mesh.size());
    for (const MeshElement& el : mesh.elements()) {
        Cplx us = eval_scattered(coeffs, mesh, wp, h_fine, el.node);
        out.push_back(incident_field(wp, el.node) + us);
    }
    return out;
}

FieldGrid field_grid(const Eigen::VectorXcd& coeffs, const LhMesh& mesh, const WaveParams& wp,
                     const QuadPolicy& pol, const Vec2& lo, const Vec2& hi, int nx, int ny) {
    if (nx < 1 || ny < 1) throw std::invalid_argument("field_grid: empty resolution");
    FieldGrid g;
    g.lo = lo;
    g.hi = hi;
    g.nx = nx;
    g.ny = ny;
    g.samples.reserve(std::size_t(nx) * ny);
    for (int iy = 0; iy < ny; ++iy) {
        double ty = ny > 1 ? double(iy) / (ny - 1) : 0.5;
        for (int ix = 0; ix < nx; ++ix) {
            double tx = nx > 1 ? double(ix) / (nx - 1) : 0.5;
            FieldSample s;
            s.point = Vec2{lo.x + tx * (hi.x - lo.x), lo.y + ty * (hi.y - lo.y)};
            s.kind = FieldSample::Kind::Total;
            s.value = eval_scattered_robust(coeffs, mesh, wp, pol, s.point, &s.ok);
            if (s.ok) s.value += incident_field(wp, s.point);
            g.samples.push_back(s);
        }
    }
    return g;
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("ls_slope: need two or more samples");
    double n = double(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("ls_slope: degenerate abscissae");
    return (n * sxy - sx * sy) / denom;
}

double eoc_slope(const std::vector<double>& h, const std::vector<double>& err, int window) {
    if (h.size() != err.size()) throw std::invalid_argument("eoc_slope: size mismatch");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (err[i] <= 0.0 || h[i] <= 0.0) continue;
        lx.push_back(std::log(h[i]));
        ly.push_back(std::log(err[i]));
    }
    int n = static_cast<int>(lx.size());
    int use = std::min(window, n);
    if (use < 2) throw std::invalid_argument("eoc_slope: not enough usable levels");
    std::vector<double> tx(lx.end() - use, lx.end());
    std::vector<double> ty(ly.end() - use, ly.end());
    return ls_slope(tx, ty);
}

} // namespace fracscat
