#include "fracscat/singular.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <stdexcept>

#include <json.hpp>

#include "fracscat/quadrature.hpp"

namespace fracscat {

namespace {

// u(K) == v(K) iff v^{-1} u is a symmetry of K
bool cell_equal(const IfsAttractor& ifs, const Similarity& u, const Similarity& v) {
    Similarity rel = v.inverse() * u;
    if (std::abs(rel.rho - 1.0) > 1e-9) return false;
    for (const Similarity& g : ifs.symmetries())
        if (approx_equal(rel, g, 1e-9, ifs.diam())) return true;
    return false;
}

std::vector<Vec2> mapped_hull(const IfsAttractor& ifs, const Similarity& m) {
    std::vector<Vec2> out;
    out.reserve(ifs.hull().size());
    for (const Vec2& p : ifs.hull()) out.push_back(m(p));
    return out;
}

double min_pair_width(const IfsAttractor& ifs, const CellPair& p) {
    return std::min(p.a.rho, p.b.rho) * ifs.diam();
}

bool pair_touching(const IfsAttractor& ifs, const CellPair& p) {
    double cut = 1e-6 * min_pair_width(ifs, p);
    return pair_hull_distance(ifs, p, 0.5 * cut) < cut;
}

// Richardson-extrapolated double barycentre rule for log over a disjoint pair
double disjoint_log_quad(const IfsAttractor& ifs, const CellPair& p) {
    double w = min_pair_width(ifs, p);
    auto g = [](const Vec2& x, const Vec2& y) { return std::log(dist(x, y)); };
    double coarse = double_rule_value(ifs, p.a, p.b, 0.5 * w, g);
    double fine = double_rule_value(ifs, p.a, p.b, 0.25 * w, g);
    // leading error is O(w^4): the midpoint h^2 term vanishes (log is harmonic)
    return (16.0 * fine - coarse) / 15.0;
}

double brute_force_rec(const IfsAttractor& ifs, const CellPair& p, int depth) {
    if (!pair_touching(ifs, p)) return disjoint_log_quad(ifs, p);
    if (depth <= 0) {
        // truncated touching pair: floor the kernel distance at a fraction of
        // the cell width; the pair's contribution is already O(rho^{4 depth})
        double floor_r = 0.05 * min_pair_width(ifs, p);
        auto g = [&](const Vec2& x, const Vec2& y) {
            return std::log(std::max(dist(x, y), floor_r));
        };
        return double_rule_value(ifs, p.a, p.b, 0.25 * min_pair_width(ifs, p), g);
    }
    double acc = 0.0;
    for (const Similarity& sa : ifs.maps())
        for (const Similarity& sb : ifs.maps())
            acc += brute_force_rec(ifs, {p.a * sa, p.b * sb}, depth - 1);
    return acc;
}

} // namespace

double pair_hull_distance(const IfsAttractor& ifs, const CellPair& p, double cutoff) {
    return convex_polygon_distance(mapped_hull(ifs, p.a), mapped_hull(ifs, p.b), cutoff);
}

bool pair_congruence(const IfsAttractor& ifs, const CellPair& p, const CellPair& q, Similarity& T) {
    for (const Similarity& g : ifs.symmetries()) {
        Similarity t1 = q.a * g * p.a.inverse();
        if (cell_equal(ifs, t1 * p.b, q.b)) {
            T = t1;
            return true;
        }
        Similarity t2 = q.b * g * p.a.inverse();
        if (cell_equal(ifs, t2 * p.b, q.a)) {
            T = t2;
            return true;
        }
    }
    return false;
}

double brute_force_log_integral(const IfsAttractor& ifs, const CellPair& p, int depth) {
    return brute_force_rec(ifs, p, depth);
}

CanonicalSystem CanonicalSystem::derive(std::shared_ptr<const IfsAttractor> ifs,
                                        std::vector<CellPair> extra_seeds, int max_depth) {
    CanonicalSystem sys;
    sys.ifs_ = std::move(ifs);
    const IfsAttractor& K = *sys.ifs_;

    Similarity id{1.0, identity2(), {0.0, 0.0}};
    sys.classes_.push_back({id, id});
    std::vector<int> generation{0};
    for (CellPair& seed : extra_seeds) {
        Similarity T;
        bool known = false;
        for (const CellPair& c : sys.classes_)
            if (pair_congruence(K, seed, c, T)) { known = true; break; }
        if (!pair_touching(K, seed))
            throw std::invalid_argument("CanonicalSystem: seed pair is not touching");
        if (!known) {
            sys.classes_.push_back(seed);
            generation.push_back(0);
        }
    }

    std::size_t next = 0;
    while (next < sys.classes_.size()) {
        std::size_t nu = next++;
        if (generation[nu] > max_depth) {
            std::string msg = "CanonicalSystem: closure not reached by depth " +
                              std::to_string(max_depth) + " (" +
                              std::to_string(sys.classes_.size()) + " classes found)";
            throw std::runtime_error(msg);
        }
        CellPair parent = sys.classes_[nu]; // copy: classes_ may grow below
        sys.A_.resize(sys.classes_.size());
        sys.t_.resize(sys.classes_.size(), 0.0);
        std::vector<double>& arow = sys.A_[nu];

        // subdivide only the larger cell (both when equal) so sub-pair sizes
        // stay within one mesh level of each other
        Similarity id_map{1.0, identity2(), {0.0, 0.0}};
        std::vector<Similarity> expand_a{id_map}, expand_b{id_map};
        if (parent.a.rho >= parent.b.rho * (1.0 - 1e-9)) expand_a = K.maps();
        if (parent.b.rho >= parent.a.rho * (1.0 - 1e-9)) expand_b = K.maps();
        for (const Similarity& sa : expand_a) {
            for (const Similarity& sb : expand_b) {
                CellPair child{parent.a * sa, parent.b * sb};
                if (pair_touching(K, child)) {
                    Similarity T;
                    int klass = -1;
                    for (std::size_t c = 0; c < sys.classes_.size(); ++c)
                        if (pair_congruence(K, child, sys.classes_[c], T)) {
                            klass = static_cast<int>(c);
                            break;
                        }
                    if (klass < 0) {
                        sys.classes_.push_back(child);
                        generation.push_back(generation[nu] + 1);
                        klass = static_cast<int>(sys.classes_.size()) - 1;
                        T = id;
                    }
                    double w = std::pow(T.rho, -4.0);
                    if (arow.size() < sys.classes_.size()) arow.resize(sys.classes_.size(), 0.0);
                    arow[klass] += w;
                    sys.t_[nu] -= w * sys.class_measure_product(klass) * std::log(T.rho);
                } else {
                    Similarity T;
                    int rep = -1;
                    for (std::size_t c = 0; c < sys.regular_.size(); ++c)
                        if (pair_congruence(K, child, sys.regular_[c], T)) {
                            rep = static_cast<int>(c);
                            break;
                        }
                    if (rep < 0) {
                        sys.regular_.push_back(child);
                        rep = static_cast<int>(sys.regular_.size()) - 1;
                        T = id;
                    }
                    double w = std::pow(T.rho, -4.0);
                    if (sys.B_.size() < sys.A_.size()) sys.B_.resize(sys.A_.size());
                    std::vector<double>& brow = sys.B_[nu];
                    if (brow.size() <= static_cast<std::size_t>(rep)) brow.resize(rep + 1, 0.0);
                    brow[rep] += w;
                    const CellPair& r = sys.regular_[rep];
                    double mm = (r.a.rho * r.a.rho * K.measure()) * (r.b.rho * r.b.rho * K.measure());
                    sys.t_[nu] -= w * mm * std::log(T.rho);
                }
            }
        }
    }

    // pad rows and fold in the identity: A = I - (child coefficients)
    int ns = sys.num_classes();
    int nr = sys.num_regular();
    sys.A_.resize(ns);
    sys.B_.resize(ns);
    sys.t_.resize(ns, 0.0);
    for (int i = 0; i < ns; ++i) {
        sys.A_[i].resize(ns, 0.0);
        sys.B_[i].resize(nr, 0.0);
        for (int j = 0; j < ns; ++j) sys.A_[i][j] = (i == j ? 1.0 : 0.0) - sys.A_[i][j];
    }

    // kind labels from the contact-set extent
    for (const CellPair& c : sys.classes_) {
        if (cell_equal(K, c.a, c.b)) {
            sys.kinds_.emplace_back("self");
            continue;
        }
        auto hull_b = mapped_hull(K, c.b);
        double res = std::pow(K.rho_max(), 6.0);
        double eps = 3.0 * res * c.a.rho * K.diam();
        std::vector<Vec2> contact;
        for (const Vec2& q : K.point_cloud(6)) {
            Vec2 x = c.a(q);
            std::vector<Vec2> pt{x};
            if (convex_polygon_distance(hull_b, pt) < eps) contact.push_back(x);
        }
        double extent = contact.size() >= 2 ? polygon_diameter(convex_hull(contact)) : 0.0;
        sys.kinds_.emplace_back(extent > 0.2 * min_pair_width(K, c) ? "edge" : "point");
    }
    return sys;
}

double CanonicalSystem::class_measure_product(int klass) const {
    const CellPair& c = classes_[klass];
    double ma = c.a.rho * c.a.rho * ifs_->measure();
    double mb = c.b.rho * c.b.rho * ifs_->measure();
    return ma * mb;
}

const std::vector<double>& CanonicalSystem::solve(double h_s) const {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto it = cache_->values.find(h_s);
    if (it != cache_->values.end()) return it->second;

    int ns = num_classes();
    int nr = num_regular();
    std::vector<double> r(nr);
    auto g = [](const Vec2& x, const Vec2& y) { return std::log(dist(x, y)); };
    for (int k = 0; k < nr; ++k)
        r[k] = double_rule_value(*ifs_, regular_[k].a, regular_[k].b, h_s, g);

    // rhs = B r + t, then Gaussian elimination with partial pivoting
    std::vector<std::vector<double>> M = A_;
    std::vector<double> rhs(ns);
    for (int i = 0; i < ns; ++i) {
        rhs[i] = t_[i];
        for (int k = 0; k < nr; ++k) rhs[i] += B_[i][k] * r[k];
    }
    for (int col = 0; col < ns; ++col) {
        int piv = col;
        for (int i = col + 1; i < ns; ++i)
            if (std::abs(M[i][col]) > std::abs(M[piv][col])) piv = i;
        if (std::abs(M[piv][col]) < 1e-14)
            throw std::runtime_error("CanonicalSystem: singular closure matrix");
        std::swap(M[piv], M[col]);
        std::swap(rhs[piv], rhs[col]);
        for (int i = col + 1; i < ns; ++i) {
            double f = M[i][col] / M[col][col];
            for (int j = col; j < ns; ++j) M[i][j] -= f * M[col][j];
            rhs[i] -= f * rhs[col];
        }
    }
    std::vector<double> s(ns);
    for (int i = ns - 1; i >= 0; --i) {
        double acc = rhs[i];
        for (int j = i + 1; j < ns; ++j) acc -= M[i][j] * s[j];
        s[i] = acc / M[i][i];
    }
    return cache_->values.emplace(h_s, std::move(s)).first->second;
}

CanonicalSystem::Match CanonicalSystem::match(const CellPair& p) const {
    Similarity T;
    for (int c = 0; c < num_classes(); ++c)
        if (pair_congruence(*ifs_, p, classes_[c], T)) return {c, T.rho};
    throw std::runtime_error("CanonicalSystem: touching pair matches no canonical class");
}

double CanonicalSystem::log_integral(const Match& m, double h_s) const {
    const std::vector<double>& s = solve(h_s);
    double rt = m.rho_T;
    return std::pow(rt, -4.0) * (s[m.klass] - class_measure_product(m.klass) * std::log(rt));
}

double CanonicalSystem::log_integral(const CellPair& p, double h_s) const {
    return log_integral(match(p), h_s);
}

std::string CanonicalSystem::dump_json(double h_s) const {
    nlohmann::json j;
    j["geometry"] = ifs_->name();
    j["num_classes"] = num_classes();
    j["num_regular"] = num_regular();
    auto sim_json = [](const Similarity& s) {
        return nlohmann::json{{"rho", s.rho},
                              {"rot", {{s.Q.a, s.Q.b}, {s.Q.c, s.Q.d}}},
                              {"shift", {s.t.x, s.t.y}}};
    };
    for (int c = 0; c < num_classes(); ++c)
        j["classes"].push_back({{"kind", kinds_[c]},
                                {"a", sim_json(classes_[c].a)},
                                {"b", sim_json(classes_[c].b)}});
    j["A"] = A_;
    j["B"] = B_;
    j["t"] = t_;
    j["h_s"] = h_s;
    j["s"] = solve(h_s);
    return j.dump(2);
}

} // namespace fracscat
