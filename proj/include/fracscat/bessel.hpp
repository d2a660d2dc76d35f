#ifndef FRACSCAT_BESSEL_HPP
#define FRACSCAT_BESSEL_HPP

namespace fracscat {

// Order-0 and order-1 Bessel functions of the first and second kind, double
// precision (~1e-15 relative). Chebyshev series of the power-series part for
// z <= 4 and Chebyshev-fitted amplitude/phase asymptotic forms beyond.
double bessel_j0(double z);
double bessel_y0(double z); // requires z > 0
double bessel_j1(double z);
double bessel_y1(double z); // requires z > 0

} // namespace fracscat

#endif
