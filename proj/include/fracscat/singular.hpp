#ifndef FRACSCAT_SINGULAR_HPP
#define FRACSCAT_SINGULAR_HPP

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "fracscat/ifs.hpp"

namespace fracscat {

// Unordered pair of cells a(K), b(K) relative to a common reference attractor.
struct CellPair {
    Similarity a;
    Similarity b;
};

// The closure system A s = B r + t for the log-kernel double integrals
// I_{A,B} = int_A int_B log|x-y| over touching cell pairs: subdividing a
// touching pair yields sub-pairs that are either disjoint (regular, quadrature)
// or similar to one of finitely many canonical touching classes.
class CanonicalSystem {
public:
    struct Match {
        int klass = -1;
        double rho_T = 1.0; // ratio of the similarity mapping the pair onto the class
    };

    static CanonicalSystem derive(std::shared_ptr<const IfsAttractor> ifs,
                                  std::vector<CellPair> extra_seeds = {}, int max_depth = 4);

    const IfsAttractor& ifs() const { return *ifs_; }
    int num_classes() const { return static_cast<int>(classes_.size()); }
    const std::vector<CellPair>& classes() const { return classes_; }
    // "self", "edge", "point" (by contact-set extent), else "other"
    const std::vector<std::string>& class_kind() const { return kinds_; }
    int num_regular() const { return static_cast<int>(regular_.size()); }
    const std::vector<CellPair>& regular_pairs() const { return regular_; }

    const std::vector<std::vector<double>>& A_mat() const { return A_; }
    const std::vector<std::vector<double>>& B_mat() const { return B_; }
    const std::vector<double>& t_vec() const { return t_; }

    // canonical values s~ at quadrature width h_s (cached)
    const std::vector<double>& solve(double h_s) const;

    // identify the class of an arbitrary touching pair; throws if none matches
    Match match(const CellPair& p) const;

    // I_{A,B}[log] for a touching pair, through the canonical system:
    // rho_T^{-4} (s_klass - |A_k||B_k| log rho_T)
    double log_integral(const CellPair& p, double h_s) const;
    double log_integral(const Match& m, double h_s) const;

    double class_measure_product(int klass) const; // |A_k| * |B_k|

    std::string dump_json(double h_s) const;

private:
    CanonicalSystem() = default;

    std::shared_ptr<const IfsAttractor> ifs_;
    std::vector<CellPair> classes_;
    std::vector<std::string> kinds_;
    std::vector<CellPair> regular_;
    std::vector<std::vector<double>> A_;
    std::vector<std::vector<double>> B_;
    std::vector<double> t_;
    struct Cache {
        std::mutex mutex;
        std::map<double, std::vector<double>> values;
    };
    std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

// Similarity T with T(p.a(K)) = q.a(K), T(p.b(K)) = q.b(K) (or swapped);
// returns true and fills T on success.
bool pair_congruence(const IfsAttractor& ifs, const CellPair& p, const CellPair& q, Similarity& T);

// hull distance between the two cells of a pair
double pair_hull_distance(const IfsAttractor& ifs, const CellPair& p, double cutoff = 0.0);

// Test oracle: graded-refinement evaluation of I_{A,B}[log], recursing on
// touching sub-pairs to `depth` and integrating disjoint sub-pairs by the
// composite barycentre rule at width min(diam)/4.
double brute_force_log_integral(const IfsAttractor& ifs, const CellPair& p, int depth);

} // namespace fracscat

#endif
