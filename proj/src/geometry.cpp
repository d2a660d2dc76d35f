#include "fracscat/geometry.hpp"

#include <algorithm>

namespace fracscat {

std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
    if (pts.size() < 3) return pts;
    std::sort(pts.begin(), pts.end(), [](const Vec2& p, const Vec2& q) {
        return p.x < q.x || (p.x == q.x && p.y < q.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(), [](const Vec2& p, const Vec2& q) {
                  return p.x == q.x && p.y == q.y;
              }),
              pts.end());
    size_t n = pts.size();
    if (n < 3) return pts;
    std::vector<Vec2> hull(2 * n);
    size_t k = 0;
    for (size_t i = 0; i < n; ++i) {
        while (k >= 2 && (hull[k - 1] - hull[k - 2]).cross(pts[i] - hull[k - 2]) <= 0) --k;
        hull[k++] = pts[i];
    }
    for (size_t i = n - 1, lo = k + 1; i-- > 0;) {
        while (k >= lo && (hull[k - 1] - hull[k - 2]).cross(pts[i] - hull[k - 2]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

double polygon_diameter(const std::vector<Vec2>& hull) {
    double d2 = 0.0;
    for (size_t i = 0; i < hull.size(); ++i)
        for (size_t j = i + 1; j < hull.size(); ++j)
            d2 = std::max(d2, (hull[i] - hull[j]).norm2());
    return std::sqrt(d2);
}

double segment_distance(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1) {
    Vec2 u = a1 - a0, v = b1 - b0, w = a0 - b0;
    // proper intersection means distance zero
    double d1 = u.cross(b0 - a0), d2 = u.cross(b1 - a0);
    double d3 = v.cross(a0 - b0), d4 = v.cross(a1 - b0);
    if (((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0))) return 0.0;
    auto pt_seg = [](const Vec2& p, const Vec2& s0, const Vec2& s1) {
        Vec2 d = s1 - s0;
        double L2 = d.norm2();
        double t = L2 > 0 ? std::clamp((p - s0).dot(d) / L2, 0.0, 1.0) : 0.0;
        return dist(p, s0 + t * d);
    };
    (void)w;
    double r = pt_seg(a0, b0, b1);
    r = std::min(r, pt_seg(a1, b0, b1));
    r = std::min(r, pt_seg(b0, a0, a1));
    r = std::min(r, pt_seg(b1, a0, a1));
    return r;
}

bool point_in_convex_polygon(const Vec2& p, const std::vector<Vec2>& poly) {
    size_t n = poly.size();
    if (n < 3) return false;
    double extent = 0.0;
    for (const Vec2& v : poly) extent = std::max(extent, (v - poly[0]).norm());
    // near-duplicate vertices have meaningless edge directions; skip them
    double eps = 1e-9 * extent;
    for (size_t i = 0; i < n; ++i) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[(i + 1) % n];
        double e = (b - a).norm();
        if (e <= eps) continue;
        if ((b - a).cross(p - a) < -eps * e) return false;
    }
    return true;
}

double convex_polygon_distance(const std::vector<Vec2>& A, const std::vector<Vec2>& B,
                               double cutoff) {
    if (A.empty() || B.empty()) return 0.0;
    if (A.size() >= 3 && point_in_convex_polygon(B[0], A)) return 0.0;
    if (B.size() >= 3 && point_in_convex_polygon(A[0], B)) return 0.0;
    double best = dist(A[0], B[0]);
    size_t na = A.size(), nb = B.size();
    if (na == 1 || nb == 1) {
        for (const Vec2& p : A)
            for (const Vec2& q : B) best = std::min(best, dist(p, q));
        return best;
    }
    for (size_t i = 0; i < na; ++i) {
        const Vec2& a0 = A[i];
        const Vec2& a1 = A[(i + 1) % na];
        for (size_t j = 0; j < nb; ++j) {
            const Vec2& b0 = B[j];
            const Vec2& b1 = B[(j + 1) % nb];
            best = std::min(best, segment_distance(a0, a1, b0, b1));
            if (best <= cutoff) return best;
        }
    }
    return best;
}

} // namespace fracscat
