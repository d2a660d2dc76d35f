#ifndef FRACSCAT_KERNEL_HPP
#define FRACSCAT_KERNEL_HPP

#include <complex>

#include "fracscat/geometry.hpp"

namespace fracscat {

using Cplx = std::complex<double>;

inline constexpr double kEulerGamma = 0.57721566490153286061;
// Phi = c2 * Phi0 + Phi* with Phi0 = log|x-y|
inline constexpr double kC2 = -1.0 / (2.0 * 3.141592653589793238462643383279502884);

// H0^(1)(z) = J0(z) + i Y0(z), z > 0
Cplx hankel1_0(double z);

// fundamental solution Phi(x,y) = (i/4) H0^(1)(k|x-y|)
Cplx phi(double k, const Vec2& x, const Vec2& y);

// log-singular part Phi0(x,y) = log|x-y|
double phi0(const Vec2& x, const Vec2& y);

// smooth remainder; at the diagonal (k|x-y| < 1e-8) uses the analytic limit
// i/4 - (log(k/2) + gamma)/(2 pi)
Cplx phi_star(double k, const Vec2& x, const Vec2& y);

struct WaveParams {
    double k = 1.0;
    Cplx m{1.0, 0.0}; // contrast: refractive index is 1 + m on the scatterer

    enum class Incident { PlaneWave, PointSource, Constant } incident = Incident::PlaneWave;
    Vec2 direction{0.0, 1.0}; // plane-wave direction, unit
    Vec2 source{0.0, 0.0};    // point-source location

    void validate() const;
};

Cplx incident_field(const WaveParams& params, const Vec2& x);

} // namespace fracscat

#endif
