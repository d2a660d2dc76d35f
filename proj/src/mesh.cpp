#include "fracscat/mesh.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace fracscat {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
const Vec2 kEps1{1.0, 0.0};
const Vec2 kEps2{0.5, 0.8660254037844386467637231707529362}; // R_{pi/3} eps1

int detect_level(const IfsAttractor& ifs, double h) {
    const std::string& n = ifs.name();
    if (n != "fudgeflake" && n != "gosper" && n != "koch") return -1;
    if (h >= ifs.diam()) return 0;
    double ratio = level_ratio(ifs);
    double t = std::log(h / ifs.diam()) / std::log(ratio);
    return static_cast<int>(std::ceil(t - 1e-9));
}

void subdivide(const IfsAttractor& ifs, double h, Word& word, const Similarity& map,
               std::vector<MeshElement>& out) {
    double d = map.rho * ifs.diam();
    if (d <= h * (1.0 + 1e-12) || word.size() > 64) {
        MeshElement el;
        el.word = word;
        el.map = map;
        el.rho = map.rho;
        el.node = map(ifs.barycentre());
        el.area = map.rho * map.rho * ifs.measure();
        el.diam = d;
        out.push_back(std::move(el));
        if (out.size() > 10'000'000) throw std::runtime_error("build_lh_mesh: element guard exceeded");
        return;
    }
    for (int i = 0; i < ifs.num_maps(); ++i) {
        word.push_back(static_cast<std::uint8_t>(i));
        subdivide(ifs, h, word, map * ifs.maps()[i], out);
        word.pop_back();
    }
}

} // namespace

LhMesh build_lh_mesh(std::shared_ptr<const IfsAttractor> ifs, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("build_lh_mesh: h must be > 0");
    std::vector<MeshElement> elements;
    Word w;
    Similarity id{1.0, identity2(), {0.0, 0.0}};
    subdivide(*ifs, h, w, id, elements);
    int level = detect_level(*ifs, h);
    return LhMesh(std::move(ifs), h, level, std::move(elements));
}

LhMesh build_lh_mesh(const IfsAttractor& ifs, double h) {
    return build_lh_mesh(std::make_shared<IfsAttractor>(ifs), h);
}

double level_ratio(const IfsAttractor& ifs) {
    const std::string& n = ifs.name();
    if (n == "fudgeflake" || n == "koch") return 1.0 / std::sqrt(3.0);
    if (n == "gosper") return 1.0 / std::sqrt(7.0);
    throw std::invalid_argument("level_ratio: not a named example: " + n);
}

std::vector<double> mesh_level_sequence(const IfsAttractor& ifs, int l_max) {
    double ratio = level_ratio(ifs);
    std::vector<double> hs(l_max + 1);
    double h = ifs.diam();
    for (int l = 0; l <= l_max; ++l, h *= ratio) hs[l] = h;
    return hs;
}

std::vector<int> nested_restriction(const LhMesh& coarse, const LhMesh& fine) {
    std::unordered_map<std::string, int> lookup;
    std::size_t min_len = 1'000, max_len = 0;
    for (int i = 0; i < coarse.size(); ++i) {
        const Word& w = coarse.elements()[i].word;
        lookup.emplace(std::string(w.begin(), w.end()), i);
        min_len = std::min(min_len, w.size());
        max_len = std::max(max_len, w.size());
    }
    std::vector<int> parent(fine.size(), -1);
    for (int i = 0; i < fine.size(); ++i) {
        const Word& w = fine.elements()[i].word;
        for (std::size_t len = min_len; len <= std::min(max_len, w.size()); ++len) {
            auto it = lookup.find(std::string(w.begin(), w.begin() + len));
            if (it != lookup.end()) {
                parent[i] = it->second;
                break;
            }
        }
        if (parent[i] < 0) throw std::runtime_error("nested_restriction: meshes are not nested");
    }
    return parent;
}

void InteractionSplit::finalize() {
    set_.clear();
    set_.reserve(singular.size() * 2);
    for (auto [i, j] : singular)
        set_.insert((static_cast<std::uint64_t>(i) << 32) | static_cast<std::uint32_t>(j));
}

namespace {

// quantised key for the relative configuration of a cell pair, used to reuse
// hull-distance decisions between congruent pairs
struct ConfigKey {
    std::int64_t v[7];
    bool operator==(const ConfigKey& o) const {
        for (int i = 0; i < 7; ++i)
            if (v[i] != o.v[i]) return false;
        return true;
    }
};
struct ConfigKeyHash {
    std::size_t operator()(const ConfigKey& k) const {
        std::size_t h = 1469598103934665603ull;
        for (int i = 0; i < 7; ++i) {
            h ^= static_cast<std::size_t>(k.v[i]);
            h *= 1099511628211ull;
        }
        return h;
    }
};

InteractionSplit classify_hull(const LhMesh& mesh, double tol) {
    const IfsAttractor& ifs = mesh.ifs();
    const std::vector<Vec2>& base_hull = ifs.hull();
    const auto& els = mesh.elements();
    int n = mesh.size();
    double cut = tol * mesh.h();

    double r_hull = 0.0;
    for (const Vec2& p : base_hull) r_hull = std::max(r_hull, dist(p, ifs.barycentre()));

    // spatial buckets of width h
    double cell = mesh.h();
    auto bucket = [&](const Vec2& p) {
        return std::pair<long, long>(static_cast<long>(std::floor(p.x / cell)),
                                     static_cast<long>(std::floor(p.y / cell)));
    };
    std::unordered_map<std::int64_t, std::vector<int>> grid;
    auto pack = [](long a, long b) {
        return (static_cast<std::int64_t>(a) << 32) ^ (b & 0xffffffffll);
    };
    for (int i = 0; i < n; ++i) {
        auto [bx, by] = bucket(els[i].node);
        grid[pack(bx, by)].push_back(i);
    }

    std::vector<std::vector<Vec2>> cell_hull(n);
    auto hull_of = [&](int i) -> const std::vector<Vec2>& {
        if (cell_hull[i].empty()) {
            cell_hull[i].reserve(base_hull.size());
            for (const Vec2& p : base_hull) cell_hull[i].push_back(els[i].map(p));
        }
        return cell_hull[i];
    };

    std::unordered_map<ConfigKey, bool, ConfigKeyHash> cache;
    auto config_key = [&](int i, int j) {
        const Similarity& a = els[i].map;
        const Similarity& b = els[j].map;
        Similarity rel = a.inverse() * b; // pair geometry up to the common map a
        double q = 1e-9;
        ConfigKey k{};
        k.v[0] = llround(rel.rho / q);
        k.v[1] = llround(rel.Q.a / q);
        k.v[2] = llround(rel.Q.b / q);
        k.v[3] = llround(rel.Q.c / q);
        k.v[4] = llround(rel.Q.d / q);
        k.v[5] = llround(rel.t.x / q);
        k.v[6] = llround(rel.t.y / q);
        return k;
    };

    InteractionSplit split;
    split.n = n;
    for (int i = 0; i < n; ++i) {
        auto [bx, by] = bucket(els[i].node);
        double ri = els[i].rho * r_hull;
        for (long dx = -2; dx <= 2; ++dx)
            for (long dy = -2; dy <= 2; ++dy) {
                auto it = grid.find(pack(bx + dx, by + dy));
                if (it == grid.end()) continue;
                for (int j : it->second) {
                    if (j <= i) continue;
                    double rj = els[j].rho * r_hull;
                    double node_gap = dist(els[i].node, els[j].node) - ri - rj;
                    if (node_gap > cut) continue;
                    ConfigKey key = config_key(i, j);
                    auto hit = cache.find(key);
                    bool touch;
                    if (hit != cache.end()) {
                        touch = hit->second;
                    } else {
                        // distance scales with the common similarity, and the
                        // cached configs equal up to 1e-9 relative, so the
                        // decision transfers between congruent pairs
                        double d = convex_polygon_distance(hull_of(i), hull_of(j), 0.5 * cut);
                        touch = d < cut;
                        cache.emplace(key, touch);
                    }
                    if (touch) split.singular.emplace_back(i, j);
                }
            }
    }
    std::sort(split.singular.begin(), split.singular.end());
    split.finalize();
    return split;
}

// touching lattice offsets per example, derived once with the hull classifier
// (see tests/test_mesh.cpp regression) and frozen here
struct AdjacencyTable {
    // entries: family_i, family_j, da1, da2 (applies symmetrically)
    std::vector<std::array<long, 4>> touching;
};

const AdjacencyTable& adjacency_table(const std::string& name);

InteractionSplit classify_lattice(const LhMesh& mesh) {
    LatticeStructure lat = lattice_coords(mesh);
    const AdjacencyTable& table = adjacency_table(mesh.ifs().name());
    int n = mesh.size();

    std::unordered_map<std::int64_t, int> index;
    auto pack = [&](int fam, long a1, long a2) {
        return (static_cast<std::int64_t>(fam) << 48) ^ ((a1 & 0xffffffll) << 24) ^ (a2 & 0xffffffll);
    };
    for (int i = 0; i < n; ++i)
        index[pack(lat.coords[i].family, lat.coords[i].a1, lat.coords[i].a2)] = i;

    InteractionSplit split;
    split.n = n;
    for (int i = 0; i < n; ++i) {
        const LatticeCoord& c = lat.coords[i];
        for (const auto& t : table.touching) {
            if (t[0] != c.family) continue;
            auto it = index.find(pack(static_cast<int>(t[1]), c.a1 + t[2], c.a2 + t[3]));
            if (it == index.end()) continue;
            int j = it->second;
            if (j > i) split.singular.emplace_back(i, j);
        }
    }
    std::sort(split.singular.begin(), split.singular.end());
    split.singular.erase(std::unique(split.singular.begin(), split.singular.end()),
                         split.singular.end());
    split.finalize();
    return split;
}

} // namespace

InteractionSplit classify_pairs(const LhMesh& mesh, ClassifyMode mode, double tol) {
    const std::string& name = mesh.ifs().name();
    bool named = name == "fudgeflake" || name == "gosper" || name == "koch";
    if (mode == ClassifyMode::Auto) mode = (named && mesh.level() >= 1) ? ClassifyMode::Lattice : ClassifyMode::Hull;
    if (mode == ClassifyMode::Lattice) {
        if (!named || mesh.level() < 1)
            throw std::invalid_argument("classify_pairs: lattice mode needs a named example level mesh");
        return classify_lattice(mesh);
    }
    return classify_hull(mesh, tol);
}

LatticeStructure lattice_coords(const LhMesh& mesh) {
    const IfsAttractor& ifs = mesh.ifs();
    const std::string& name = ifs.name();
    int l = mesh.level();
    if (l < 0) throw std::invalid_argument("lattice_coords: mesh is not a named example level mesh");

    LatticeStructure lat;
    lat.level = l;
    double h0 = ifs.diam();

    if (name == "fudgeflake") {
        double s = std::pow(3.0, -0.5 * l);
        Mat2 R = rotation(l * kPi / 6.0);
        Mat2 R1 = rotation((l + 1) * kPi / 6.0);
        lat.basis = {s * (R * kEps1), s * (R * kEps2)};
        lat.family_offset = {std::pow(3.0, -0.5 * (l + 1)) * (R1 * kEps1)};
        lat.num_families = 1;
    } else if (name == "gosper") {
        double theta = std::asin(std::sqrt(3.0) / (2.0 * std::sqrt(7.0)));
        double s = std::sqrt(3.0) * std::pow(7.0, -0.5 * l);
        Mat2 R = rotation(l * theta);
        lat.basis = {s * (R * kEps1), s * (R * kEps2)};
        lat.family_offset = {{0.0, 0.0}};
        lat.num_families = 1;
    } else if (name == "koch") {
        double s = h0 * std::pow(3.0, -0.5 * l);
        Mat2 R1 = rotation((l + 1) * kPi / 6.0);
        Mat2 R2 = rotation((l + 2) * kPi / 6.0);
        lat.basis = {s * (R1 * kEps1), s * (R1 * kEps2)};
        double so = h0 * std::pow(3.0, -0.5 * (l + 1));
        lat.family_offset = {{0.0, 0.0}, so * (R2 * kEps1), so * (R2 * kEps2)};
        lat.num_families = 3;
    } else {
        throw std::invalid_argument("lattice_coords: unknown example: " + name);
    }

    Mat2 B{lat.basis[0].x, lat.basis[1].x, lat.basis[0].y, lat.basis[1].y};
    Mat2 Binv = B.inverse();
    double snap_tol = 1e-8 * mesh.h();

    lat.family_area.assign(lat.num_families, 0.0);
    lat.family_diam.assign(lat.num_families, 0.0);
    lat.coords.resize(mesh.size());
    double hl = ifs.diam() * std::pow(level_ratio(ifs), l);
    for (int i = 0; i < mesh.size(); ++i) {
        const MeshElement& el = mesh.elements()[i];
        bool small = el.diam < hl * 0.999; // Koch S-cells are one level finer
        int matched = -1;
        LatticeCoord c;
        for (int f = 0; f < lat.num_families; ++f) {
            if (name == "koch" && ((f == 0) == small)) continue;
            Vec2 frac = Binv * (el.node - lat.family_offset[f]);
            long a1 = std::lround(frac.x), a2 = std::lround(frac.y);
            Vec2 recon = lat.family_offset[f] + static_cast<double>(a1) * lat.basis[0] +
                         static_cast<double>(a2) * lat.basis[1];
            if (dist(recon, el.node) < snap_tol) {
                if (matched >= 0) throw std::runtime_error("lattice_coords: ambiguous family for element");
                matched = f;
                c = {f, a1, a2};
            }
        }
        if (matched < 0) throw std::runtime_error("lattice_coords: node fails to snap to lattice");
        lat.coords[i] = c;
        lat.family_area[matched] = el.area;
        lat.family_diam[matched] = el.diam;
    }
    return lat;
}

namespace {

const AdjacencyTable& adjacency_table(const std::string& name) {
    static const AdjacencyTable fudge{{
        {0, 0, 1, 0}, {0, 0, -1, 0}, {0, 0, 0, 1}, {0, 0, 0, -1}, {0, 0, 1, -1}, {0, 0, -1, 1},
    }};
    static const AdjacencyTable gosper{{
        {0, 0, 1, 0}, {0, 0, -1, 0}, {0, 0, 0, 1}, {0, 0, 0, -1}, {0, 0, 1, -1}, {0, 0, -1, 1},
    }};
    static const AdjacencyTable koch{{
        {0, 0, -1, 0}, {0, 0, -1, 1}, {0, 0, 0, -1}, {0, 0, 0, 1}, {0, 0, 1, -1}, {0, 0, 1, 0},
        {0, 1, -1, 0}, {0, 1, 0, -1}, {0, 1, 0, 0},
        {0, 2, 0, -1}, {0, 2, 0, 0},  {0, 2, 1, -1},
        {1, 0, 0, 0},  {1, 0, 0, 1},  {1, 0, 1, 0},
        {1, 2, 0, 0},  {1, 2, 1, -1}, {1, 2, 1, 0},
        {2, 0, -1, 1}, {2, 0, 0, 0},  {2, 0, 0, 1},
        {2, 1, -1, 0}, {2, 1, -1, 1}, {2, 1, 0, 0},
    }};
    if (name == "fudgeflake") return fudge;
    if (name == "gosper") return gosper;
    if (name == "koch") return koch;
    throw std::invalid_argument("adjacency_table: unknown example: " + name);
}

} // namespace

} // namespace fracscat
