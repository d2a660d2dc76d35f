#ifndef FRACSCAT_MESH_HPP
#define FRACSCAT_MESH_HPP

#include <memory>
#include <unordered_set>
#include <utility>
#include <vector>

#include "fracscat/ifs.hpp"

namespace fracscat {

struct MeshElement {
    Word word;
    Similarity map; // cell = map(Omega)
    Vec2 node;      // barycentre s_m(x_Omega)
    double rho = 1.0;
    double area = 0.0;
    double diam = 0.0;
};

// Geometry-conforming quasi-uniform mesh: the words whose cell diameter first
// drops to <= h, in lexicographic word order.
class LhMesh {
public:
    LhMesh(std::shared_ptr<const IfsAttractor> ifs, double h, int level,
           std::vector<MeshElement> elements)
        : ifs_(std::move(ifs)), h_(h), level_(level), elements_(std::move(elements)) {}

    const IfsAttractor& ifs() const { return *ifs_; }
    std::shared_ptr<const IfsAttractor> ifs_ptr() const { return ifs_; }
    double h() const { return h_; }
    // level l when h = h_l for a named example; -1 otherwise
    int level() const { return level_; }
    const std::vector<MeshElement>& elements() const { return elements_; }
    int size() const { return static_cast<int>(elements_.size()); }

private:
    std::shared_ptr<const IfsAttractor> ifs_;
    double h_;
    int level_;
    std::vector<MeshElement> elements_;
};

LhMesh build_lh_mesh(std::shared_ptr<const IfsAttractor> ifs, double h);
LhMesh build_lh_mesh(const IfsAttractor& ifs, double h);

// Refinement ratio per level for the named examples (3^{-1/2} or 7^{-1/2}).
double level_ratio(const IfsAttractor& ifs);

// h_0..h_{l_max} with h_l = ratio^l * diam
std::vector<double> mesh_level_sequence(const IfsAttractor& ifs, int l_max);

// For each fine element, index of the coarse element whose word is a prefix.
std::vector<int> nested_restriction(const LhMesh& coarse, const LhMesh& fine);

struct InteractionSplit {
    int n = 0;
    std::vector<std::pair<int, int>> singular; // strictly i < j; (i,i) implicit

    bool touching(int i, int j) const {
        if (i == j) return true;
        if (i > j) std::swap(i, j);
        return set_.count((static_cast<std::uint64_t>(i) << 32) | static_cast<std::uint32_t>(j)) > 0;
    }
    void finalize(); // builds the lookup set from `singular`
    std::size_t num_singular_entries() const { return 2 * singular.size() + n; }

private:
    std::unordered_set<std::uint64_t> set_;
};

enum class ClassifyMode { Auto, Lattice, Hull };

// Split index pairs into regular (closures disjoint) and singular (touching).
// Hull mode measures distances between per-cell copies of the attractor's
// convex hull; cells touch iff that distance < tol * h.
InteractionSplit classify_pairs(const LhMesh& mesh, ClassifyMode mode = ClassifyMode::Auto,
                                double tol = 1e-6);

struct LatticeCoord {
    int family = 0; // 0 = B; 1, 2 = S1, S2 (Koch only)
    long a1 = 0;
    long a2 = 0;
};

struct LatticeStructure {
    int level = 0;
    int num_families = 1;
    std::vector<LatticeCoord> coords;      // per element
    std::vector<Vec2> basis;               // two lattice basis vectors
    std::vector<Vec2> family_offset;       // per family
    std::vector<double> family_area;       // per family
    std::vector<double> family_diam;       // per family
};

// Inverts the per-example affine lattice formulas; throws if a node fails to
// snap within 1e-8 * h.
LatticeStructure lattice_coords(const LhMesh& mesh);

} // namespace fracscat

#endif
