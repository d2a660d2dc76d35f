#include "fracscat/kernel.hpp"

#include <cmath>
#include <stdexcept>

#include "fracscat/bessel.hpp"

namespace fracscat {

Cplx hankel1_0(double z) {
    if (!(z > 0.0)) throw std::domain_error("hankel1_0: z must be > 0");
    return {bessel_j0(z), bessel_y0(z)};
}

Cplx phi(double k, const Vec2& x, const Vec2& y) {
    double r = dist(x, y);
    if (r <= 0.0) throw std::domain_error("phi: coincident points");
    return Cplx(0.0, 0.25) * hankel1_0(k * r);
}

double phi0(const Vec2& x, const Vec2& y) {
    double r = dist(x, y);
    if (r <= 0.0) throw std::domain_error("phi0: coincident points");
    return std::log(r);
}

Cplx phi_star(double k, const Vec2& x, const Vec2& y) {
    double r = dist(x, y);
    if (k * r < 1e-8)
        return Cplx(kC2 * (std::log(0.5 * k) + kEulerGamma), 0.25);
    return Cplx(0.0, 0.25) * hankel1_0(k * r) - kC2 * std::log(r);
}

void WaveParams::validate() const {
    if (!(k > 0.0)) throw std::invalid_argument("WaveParams: k must be > 0");
    if (m.imag() < 0.0) throw std::invalid_argument("WaveParams: Im(m) must be >= 0");
    if (incident == Incident::PlaneWave && std::abs(direction.norm() - 1.0) > 1e-12)
        throw std::invalid_argument("WaveParams: plane-wave direction must be unit");
}

Cplx incident_field(const WaveParams& params, const Vec2& x) {
    switch (params.incident) {
        case WaveParams::Incident::PlaneWave: {
            double phase = params.k * params.direction.dot(x);
            return {std::cos(phase), std::sin(phase)};
        }
        case WaveParams::Incident::PointSource:
            return phi(params.k, x, params.source);
        case WaveParams::Incident::Constant:
            return {1.0, 0.0};
    }
    throw std::logic_error("incident_field: unknown incident type");
}

} // namespace fracscat
