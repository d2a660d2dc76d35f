#ifndef FRACSCAT_GEOMETRY_HPP
#define FRACSCAT_GEOMETRY_HPP

#include <cmath>
#include <vector>

namespace fracscat {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm2() const { return x * x + y * y; }
    double norm() const { return std::sqrt(norm2()); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }
inline double dist(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

struct Mat2 {
    // row-major: [[a, b], [c, d]]
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

    Mat2() = default;
    Mat2(double a_, double b_, double c_, double d_) : a(a_), b(b_), c(c_), d(d_) {}

    Vec2 operator*(const Vec2& v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
    Mat2 operator*(const Mat2& m) const {
        return {a * m.a + b * m.c, a * m.b + b * m.d,
                c * m.a + d * m.c, c * m.b + d * m.d};
    }
    Mat2 transpose() const { return {a, c, b, d}; }
    double det() const { return a * d - b * c; }
    Mat2 inverse() const {
        double dt = det();
        return {d / dt, -b / dt, -c / dt, a / dt};
    }
    // spectral norm of a 2x2 matrix
    double norm2() const {
        double s = a * a + b * b + c * c + d * d;
        double dt = det();
        double disc = s * s - 4.0 * dt * dt;
        if (disc < 0.0) disc = 0.0;
        return std::sqrt(0.5 * (s + std::sqrt(disc)));
    }
};

inline Mat2 identity2() { return {1.0, 0.0, 0.0, 1.0}; }
inline Mat2 rotation(double theta) {
    double c = std::cos(theta), s = std::sin(theta);
    return {c, -s, s, c};
}
// reflection across the line through the origin at angle theta/2 to the x axis
inline Mat2 reflection(double theta) {
    double c = std::cos(theta), s = std::sin(theta);
    return {c, s, s, -c};
}

// Orientation-preserving or -reversing similarity x -> rho * Q * x + t with Q orthogonal.
struct Similarity {
    double rho = 1.0;
    Mat2 Q;
    Vec2 t;

    Similarity() = default;
    Similarity(double rho_, const Mat2& Q_, const Vec2& t_) : rho(rho_), Q(Q_), t(t_) {}

    Vec2 operator()(const Vec2& p) const { return rho * (Q * p) + t; }

    // composition (S * T)(x) = S(T(x))
    Similarity operator*(const Similarity& o) const {
        return {rho * o.rho, Q * o.Q, rho * (Q * o.t) + t};
    }
    Similarity inverse() const {
        Mat2 Qt = Q.transpose();
        return {1.0 / rho, Qt, (Qt * t) * (-1.0 / rho)};
    }
};

inline bool approx_equal(const Mat2& A, const Mat2& B, double tol) {
    return std::abs(A.a - B.a) <= tol && std::abs(A.b - B.b) <= tol &&
           std::abs(A.c - B.c) <= tol && std::abs(A.d - B.d) <= tol;
}

// len_scale sets the absolute tolerance used for the translation part.
inline bool approx_equal(const Similarity& S, const Similarity& T, double tol, double len_scale) {
    return std::abs(S.rho - T.rho) <= tol * std::max(S.rho, T.rho) &&
           approx_equal(S.Q, T.Q, tol) &&
           dist(S.t, T.t) <= tol * len_scale;
}

// Andrew monotone chain; returns hull in counter-clockwise order.
std::vector<Vec2> convex_hull(std::vector<Vec2> pts);

double polygon_diameter(const std::vector<Vec2>& hull);

// Distance between two convex polygons (0 if they intersect or touch).
// Returns early once the running minimum drops to <= cutoff.
double convex_polygon_distance(const std::vector<Vec2>& A, const std::vector<Vec2>& B,
                               double cutoff = 0.0);

double segment_distance(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1);
bool point_in_convex_polygon(const Vec2& p, const std::vector<Vec2>& poly);

} // namespace fracscat

#endif
