#include "fracscat/ifs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>

#include <nlohmann/json.hpp>

namespace fracscat {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// hashed point set with tolerance-aware membership queries
class PointGrid {
public:
    PointGrid(const std::vector<Vec2>& pts, double cell) : cell_(cell) {
        buckets_.reserve(pts.size() * 2);
        for (const Vec2& p : pts) buckets_[key(p)].push_back(p);
    }
    bool contains(const Vec2& p, double tol) const {
        std::int64_t ix = qx(p.x), iy = qx(p.y);
        for (std::int64_t dx = -1; dx <= 1; ++dx)
            for (std::int64_t dy = -1; dy <= 1; ++dy) {
                auto it = buckets_.find(pack(ix + dx, iy + dy));
                if (it == buckets_.end()) continue;
                for (const Vec2& q : it->second)
                    if (dist(p, q) <= tol) return true;
            }
        return false;
    }

private:
    std::int64_t qx(double v) const { return static_cast<std::int64_t>(std::floor(v / cell_)); }
    static std::uint64_t pack(std::int64_t a, std::int64_t b) {
        return (static_cast<std::uint64_t>(a) << 32) ^ (static_cast<std::uint64_t>(b) & 0xffffffffu);
    }
    std::uint64_t key(const Vec2& p) const { return pack(qx(p.x), qx(p.y)); }
    double cell_;
    std::unordered_map<std::uint64_t, std::vector<Vec2>> buckets_;
};

// Support function of the attractor's convex hull on a uniform fan of
// directions, iterated to a fixed point. The angular interpolation used below
// circumscribes, so the resulting estimate never falls inside the true hull.
std::vector<double> support_fan(const std::vector<Similarity>& maps, int D, int iters) {
    Vec2 xc = barycentre_of(maps);
    double r0 = bounding_radius_about(maps, xc) + xc.norm();
    std::vector<double> sigma(D, 2.0 * r0 + 1.0), next(D);
    double dtheta = 2.0 * kPi / D;
    auto interp = [&](double phi) {
        phi = std::fmod(phi, 2.0 * kPi);
        if (phi < 0) phi += 2.0 * kPi;
        int j = static_cast<int>(phi / dtheta);
        if (j >= D) j = D - 1;
        double t1 = j * dtheta, t2 = (j + 1) * dtheta;
        double s1 = sigma[j], s2 = sigma[(j + 1) % D];
        double denom = std::sin(t2 - t1);
        // support of the wedge intersection point of the two half-planes
        return (s1 * std::sin(t2 - phi) + s2 * std::sin(phi - t1)) / denom;
    };
    for (int it = 0; it < iters; ++it) {
        double change = 0.0;
        for (int j = 0; j < D; ++j) {
            double th = j * dtheta;
            Vec2 u{std::cos(th), std::sin(th)};
            double best = -1e300;
            for (const Similarity& s : maps) {
                Vec2 v = s.Q.transpose() * u;
                double val = u.dot(s.t) + s.rho * interp(std::atan2(v.y, v.x));
                best = std::max(best, val);
            }
            next[j] = best;
            change = std::max(change, std::abs(best - sigma[j]));
        }
        sigma.swap(next);
        if (change < 1e-14 * r0) break; // contraction has converged
    }
    return sigma;
}

std::vector<Vec2> support_polygon(const std::vector<double>& sigma, double simplify_eps) {
    int D = static_cast<int>(sigma.size());
    double dtheta = 2.0 * kPi / D;
    // keep the support line of direction j only where it is active; a vertex of
    // the circumscribed polygon is the intersection of consecutive kept lines
    std::vector<int> kept(D);
    for (int j = 0; j < D; ++j) kept[j] = j;
    auto isect = [&](int a, int b) -> Vec2 {
        double ta = a * dtheta, tb = b * dtheta;
        double ca = std::cos(ta), sa = std::sin(ta), cb = std::cos(tb), sb = std::sin(tb);
        double det = ca * sb - sa * cb;
        return {(sigma[a] * sb - sigma[b] * sa) / det, (sigma[b] * ca - sigma[a] * cb) / det};
    };
    // drop constraints that move the polygon outward by less than simplify_eps
    bool changed = true;
    while (changed && kept.size() > 8) {
        changed = false;
        std::vector<int> out;
        out.reserve(kept.size());
        size_t n = kept.size();
        for (size_t i = 0; i < n; ++i) {
            int prev = kept[(i + n - 1) % n];
            int cur = kept[i];
            int next = kept[(i + 1) % n];
            double span = (next - prev + D) % D * dtheta;
            if (span < kPi * 0.9) {
                Vec2 q = isect(prev, next);
                double th = cur * dtheta;
                double excess = q.x * std::cos(th) + q.y * std::sin(th) - sigma[cur];
                if (excess >= 0 && excess < simplify_eps) {
                    changed = true;
                    continue; // drop this constraint
                }
            }
            out.push_back(cur);
        }
        kept.swap(out);
    }
    std::vector<Vec2> poly;
    poly.reserve(kept.size());
    size_t n = kept.size();
    for (size_t i = 0; i < n; ++i) poly.push_back(isect(kept[i], kept[(i + 1) % n]));
    return poly;
}

} // namespace

double similarity_dimension(const std::vector<Similarity>& maps) {
    if (maps.size() < 2) throw std::invalid_argument("similarity_dimension: need M >= 2 maps");
    auto f = [&](double d) {
        double s = 0.0;
        for (const Similarity& m : maps) s += std::pow(m.rho, d);
        return s - 1.0;
    };
    double lo = 1e-8, hi = 4.0;
    if (f(lo) < 0 || f(hi) > 0) throw std::runtime_error("similarity_dimension: no root in (0,4]");
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (f(mid) > 0 ? lo : hi) = mid;
    }
    double d = 0.5 * (lo + hi);
    if (std::abs(f(d)) >= 1e-13) throw std::runtime_error("similarity_dimension: not converged");
    return d;
}

Vec2 barycentre_of(const std::vector<Similarity>& maps) {
    Mat2 A{0, 0, 0, 0};
    Vec2 b{0, 0};
    for (const Similarity& s : maps) {
        double r2 = s.rho * s.rho, r3 = r2 * s.rho;
        A.a += r3 * s.Q.a;
        A.b += r3 * s.Q.b;
        A.c += r3 * s.Q.c;
        A.d += r3 * s.Q.d;
        b += r2 * s.t;
    }
    Mat2 M{1.0 - A.a, -A.b, -A.c, 1.0 - A.d};
    if (std::abs(M.det()) < 1e-14) throw std::runtime_error("barycentre_of: singular system");
    return M.inverse() * b;
}

double bounding_radius_about(const std::vector<Similarity>& maps, const Vec2& x) {
    double rho_star = 0.0, mu_star = 0.0, rr = 0.0;
    for (const Similarity& s : maps) {
        rho_star = std::max(rho_star, s.rho);
        Mat2 ImA{1.0 - s.rho * s.Q.a, -s.rho * s.Q.b, -s.rho * s.Q.c, 1.0 - s.rho * s.Q.d};
        mu_star = std::max(mu_star, ImA.norm2());
        if (std::abs(ImA.det()) < 1e-14) throw std::runtime_error("bounding_radius: singular fixed-point solve");
        Vec2 p = ImA.inverse() * s.t;
        rr = std::max(rr, dist(p, x));
    }
    return mu_star * rr / (1.0 - rho_star);
}

double attractor_diameter(const std::vector<Similarity>& maps, int directions, int iterations) {
    std::vector<double> sigma = support_fan(maps, directions, iterations);
    int D = directions;
    double d = 0.0;
    for (int j = 0; j < D / 2; ++j) d = std::max(d, sigma[j] + sigma[j + D / 2]);
    return d;
}

IfsAttractor::IfsAttractor(std::string name, std::vector<Similarity> maps, double measure,
                           double diam, int cloud_depth)
    : name_(std::move(name)), maps_(std::move(maps)), measure_(measure), diam_(diam) {
    if (maps_.size() < 2) throw std::invalid_argument("IfsAttractor: need M >= 2 maps");
    if (measure_ <= 0 || diam_ <= 0) throw std::invalid_argument("IfsAttractor: measure and diam must be positive");
    rho_min_ = 1.0;
    rho_max_ = 0.0;
    for (const Similarity& s : maps_) {
        if (!(s.rho > 0.0 && s.rho < 1.0)) throw std::invalid_argument("IfsAttractor: rho out of (0,1)");
        Mat2 QtQ = s.Q.transpose() * s.Q;
        if (!approx_equal(QtQ, identity2(), 1e-12)) throw std::invalid_argument("IfsAttractor: rot not orthogonal");
        rho_min_ = std::min(rho_min_, s.rho);
        rho_max_ = std::max(rho_max_, s.rho);
    }
    double d = similarity_dimension(maps_);
    if (std::abs(d - 2.0) > 1e-10) throw std::invalid_argument("IfsAttractor: similarity dimension != 2");
    barycentre_ = barycentre_of(maps_);
    bounding_radius_ = bounding_radius_about(maps_, barycentre_);
    std::vector<double> sigma = support_fan(maps_, 4096, 160);
    hull_ = support_polygon(sigma, 1e-8 * diam_);
    detect_symmetries(cloud_depth);
}

Similarity IfsAttractor::word_map(const Word& w) const {
    Similarity s{1.0, identity2(), {0.0, 0.0}};
    for (std::uint8_t i : w) {
        if (i >= maps_.size()) throw std::out_of_range("word_map: map index out of range");
        s = s * maps_[i];
    }
    return s;
}

double IfsAttractor::word_rho(const Word& w) const {
    double r = 1.0;
    for (std::uint8_t i : w) {
        if (i >= maps_.size()) throw std::out_of_range("word_rho: map index out of range");
        r *= maps_[i].rho;
    }
    return r;
}

std::vector<Vec2> IfsAttractor::point_cloud(int depth) const {
    if (depth < 0) throw std::invalid_argument("point_cloud: negative depth");
    double count = std::pow(static_cast<double>(maps_.size()), depth);
    if (count > 1e7) throw std::runtime_error("point_cloud: more than 1e7 points requested");
    std::vector<Vec2> pts{barycentre_};
    for (int d = 0; d < depth; ++d) {
        std::vector<Vec2> next;
        next.reserve(pts.size() * maps_.size());
        for (const Vec2& p : pts)
            for (const Similarity& s : maps_) next.push_back(s(p));
        pts.swap(next);
    }
    return pts;
}

void IfsAttractor::detect_symmetries(int depth) {
    while (std::pow(static_cast<double>(maps_.size()), depth) > 2e5 && depth > 2) --depth;
    std::vector<Vec2> cloud = point_cloud(depth);
    double tol = 1e-6 * diam_;
    PointGrid grid(cloud, 4.0 * tol);

    double rmax = 0.0;
    for (const Vec2& p : cloud) rmax = std::max(rmax, dist(p, barycentre_));
    std::vector<Vec2> far;
    for (const Vec2& p : cloud)
        if (dist(p, barycentre_) > rmax - tol) far.push_back(p);

    auto verify = [&](const Similarity& g) {
        for (const Vec2& p : cloud)
            if (!grid.contains(g(p), tol)) return false;
        return true;
    };
    auto record = [&](const Similarity& g) {
        for (const Similarity& s : symmetries_)
            if (approx_equal(s, g, 1e-9, diam_)) return;
        if (verify(g)) symmetries_.push_back(g);
    };

    symmetries_.push_back({1.0, identity2(), {0.0, 0.0}});
    if (far.empty()) return;
    Vec2 p0 = far.front() - barycentre_;
    double a0 = std::atan2(p0.y, p0.x);
    for (const Vec2& q : far) {
        Vec2 v = q - barycentre_;
        double a = std::atan2(v.y, v.x);
        Mat2 R = rotation(a - a0);
        Mat2 F = reflection(a + a0);
        // conjugate to act about the barycentre
        record({1.0, R, barycentre_ - R * barycentre_});
        record({1.0, F, barycentre_ - F * barycentre_});
    }
}

IfsAttractor make_fudgeflake() {
    double rho = 1.0 / std::sqrt(3.0);
    Mat2 A = rotation(kPi / 6.0);
    std::vector<Similarity> maps;
    for (int j = 1; j <= 3; ++j) {
        Vec2 delta = rotation((2.0 * j - 1.0) * kPi / 3.0) * Vec2{1.0 / 3.0, 0.0};
        maps.push_back({rho, A, delta});
    }
    double diam = attractor_diameter(maps);
    return IfsAttractor("fudgeflake", std::move(maps), std::sqrt(3.0) / 2.0, diam);
}

IfsAttractor make_gosper() {
    double rho = 1.0 / std::sqrt(7.0);
    double theta = std::asin(std::sqrt(3.0) / (2.0 * std::sqrt(7.0)));
    Mat2 A = rotation(theta);
    std::vector<Similarity> maps;
    for (int j = 1; j <= 6; ++j) {
        Vec2 delta = rotation((j - 1.0) * kPi / 3.0 + theta) * Vec2{std::sqrt(3.0 / 7.0), 0.0};
        maps.push_back({rho, A, delta});
    }
    maps.push_back({rho, A, {0.0, 0.0}});
    double diam = attractor_diameter(maps);
    return IfsAttractor("gosper", std::move(maps), 3.0 * std::sqrt(3.0) / 2.0, diam);
}

IfsAttractor make_koch_snowflake(double h0) {
    std::vector<Similarity> maps;
    for (int j = 1; j <= 6; ++j) {
        Vec2 delta = rotation(j * kPi / 3.0 - kPi / 6.0) * Vec2{h0 / 3.0, 0.0};
        maps.push_back({1.0 / 3.0, identity2(), delta});
    }
    maps.push_back({1.0 / std::sqrt(3.0), rotation(kPi / 6.0), {0.0, 0.0}});
    double measure = 3.0 * h0 * h0 * std::sqrt(3.0) / 10.0;
    return IfsAttractor("koch", std::move(maps), measure, h0);
}

IfsAttractor make_unit_square() {
    std::vector<Similarity> maps{
        {0.5, identity2(), {0.0, 0.0}},
        {0.5, identity2(), {0.5, 0.0}},
        {0.5, identity2(), {0.0, 0.5}},
        {0.5, identity2(), {0.5, 0.5}},
    };
    return IfsAttractor("unit-square", std::move(maps), 1.0, std::sqrt(2.0));
}

IfsAttractor make_triangle(const Vec2& v1, const Vec2& v2, const Vec2& v3) {
    Vec2 c = (v1 + v2 + v3) * (1.0 / 3.0);
    std::vector<Similarity> maps{
        {0.5, identity2(), v1 * 0.5},
        {0.5, identity2(), v2 * 0.5},
        {0.5, identity2(), v3 * 0.5},
        {0.5, rotation(kPi), c * 1.5},
    };
    double area = 0.5 * std::abs((v2 - v1).cross(v3 - v1));
    double diam = std::max({dist(v1, v2), dist(v2, v3), dist(v1, v3)});
    return IfsAttractor("triangle", std::move(maps), area, diam, 5);
}

IfsAttractor ifs_from_json(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    std::string name = j.value("name", "custom");
    if (!j.contains("maps")) {
        if (name == "fudgeflake") return make_fudgeflake();
        if (name == "gosper") return make_gosper();
        if (name == "koch") return make_koch_snowflake(j.value("h0", 2.0 / std::sqrt(3.0)));
        throw std::invalid_argument("ifs_from_json: unknown builtin '" + name + "'");
    }
    std::vector<Similarity> maps;
    for (const auto& m : j.at("maps")) {
        double rho = m.at("rho").get<double>();
        Mat2 Q = identity2();
        if (m.contains("rot")) {
            auto r = m.at("rot");
            Q = Mat2(r[0][0], r[0][1], r[1][0], r[1][1]);
        } else if (m.contains("theta")) {
            Q = rotation(m.at("theta").get<double>());
            if (m.value("reflect", false)) Q = Q * Mat2{1, 0, 0, -1};
        }
        auto sh = m.at("shift");
        maps.push_back({rho, Q, {sh[0].get<double>(), sh[1].get<double>()}});
    }
    if (!j.contains("measure")) throw std::invalid_argument("ifs_from_json: custom IFS requires declared measure");
    double measure = j.at("measure").get<double>();
    double diam = j.contains("diam") ? j.at("diam").get<double>()
                                     : attractor_diameter(maps);
    return IfsAttractor(name, std::move(maps), measure, diam);
}

} // namespace fracscat
