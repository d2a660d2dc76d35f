#ifndef FRACSCAT_POSTPROCESS_HPP
#define FRACSCAT_POSTPROCESS_HPP

#include "fracscat/solve.hpp"

namespace fracscat {

struct FieldSample {
    Vec2 point;
    Cplx value{0.0, 0.0};
    enum class Kind { Scattered, Total } kind = Kind::Scattered;
    bool ok = true; // false if evaluation failed (value is meaningless)
};

struct FarFieldCurve {
    std::vector<double> angles;
    std::vector<Cplx> values;
};

// u^s(x0) = sum_i c_i j~_i(x0). Points inside the scatterer's hull use h_J one
// level finer; a node collision is retried once with a finer width.
std::vector<FieldSample> scattered_field(const Eigen::VectorXcd& coeffs, const LhMesh& mesh,
                                         const WaveParams& wp, const QuadPolicy& pol,
                                         const std::vector<Vec2>& points);

std::vector<FieldSample> total_field(const Eigen::VectorXcd& coeffs, const LhMesh& mesh,
                                     const WaveParams& wp, const QuadPolicy& pol,
                                     const std::vector<Vec2>& points);

FarFieldCurve far_field(const Eigen::VectorXcd& coeffs, const LhMesh& mesh, const WaveParams& wp,
                        const QuadPolicy& pol, const std::vector<double>& angles);

// Exact L2 distance between the two piecewise-constant solutions on nested
// meshes; parent_map as produced by nested_restriction(coarse, fine).
double l2_error_nested(const Eigen::VectorXcd& coarse, const LhMesh& coarse_mesh,
                       const Eigen::VectorXcd& fine, const LhMesh& fine_mesh,
                       const std::vector<int>& parent_map);

// u^(1) = u^i + u^s sampled at the element nodes (h_J one level finer).
std::vector<Cplx> iterated_galerkin(const Eigen::VectorXcd& coeffs, const LhMesh& mesh,
                                    const WaveParams& wp, const QuadPolicy& pol);

struct FieldGrid {
    Vec2 lo, hi;
    int nx = 0, ny = 0;
    std::vector<FieldSample> samples; // row-major, y outer
};

FieldGrid field_grid(const Eigen::VectorXcd& coeffs, const LhMesh& mesh, const WaveParams& wp,
                     const QuadPolicy& pol, const Vec2& lo, const Vec2& hi, int nx, int ny);

// least-squares slope of y against x (both given directly; callers pass logs)
double ls_slope(const std::vector<double>& x, const std::vector<double>& y);

// slope of log(err) vs log(h) over the last `window` entries (default 3)
double eoc_slope(const std::vector<double>& h, const std::vector<double>& err, int window = 3);

} // namespace fracscat

#endif
