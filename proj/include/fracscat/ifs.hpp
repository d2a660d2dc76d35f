#ifndef FRACSCAT_IFS_HPP
#define FRACSCAT_IFS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "fracscat/geometry.hpp"

namespace fracscat {

// A word m = (m_1, ..., m_l) of map indices; s_m = s_{m_1} o ... o s_{m_l}
// with s_{m_1} outermost. Indices are zero-based internally.
using Word = std::vector<std::uint8_t>;

// Self-similar planar set of full dimension 2 (an attractor with positive
// Lebesgue measure, "2-attractor"): the maps tile the set up to null overlap.
class IfsAttractor {
public:
    IfsAttractor(std::string name, std::vector<Similarity> maps, double measure,
                 double diam, int cloud_depth = 6);

    const std::string& name() const { return name_; }
    const std::vector<Similarity>& maps() const { return maps_; }
    int num_maps() const { return static_cast<int>(maps_.size()); }
    double measure() const { return measure_; }
    double diam() const { return diam_; }
    const Vec2& barycentre() const { return barycentre_; }
    double rho_min() const { return rho_min_; }
    double rho_max() const { return rho_max_; }

    // radius of a ball about the barycentre guaranteed to contain the set
    double bounding_radius() const { return bounding_radius_; }

    Similarity word_map(const Word& w) const;
    double word_rho(const Word& w) const;

    // barycentres of all cells at subdivision depth `depth` (M^depth points)
    std::vector<Vec2> point_cloud(int depth) const;

    // convex hull of a deep point cloud; cell hulls are mapped copies of this
    const std::vector<Vec2>& hull() const { return hull_; }

    // isometries g (about absolute coordinates) with g(K) = K, identity first
    const std::vector<Similarity>& symmetries() const { return symmetries_; }

private:
    void detect_symmetries(int depth);

    std::string name_;
    std::vector<Similarity> maps_;
    double measure_;
    double diam_;
    Vec2 barycentre_;
    double rho_min_;
    double rho_max_;
    double bounding_radius_;
    std::vector<Vec2> hull_;
    std::vector<Similarity> symmetries_;
};

// Solve sum_i rho_i^d = 1 for d by bisection.
double similarity_dimension(const std::vector<Similarity>& maps);

// Fixed point of the push-forward of Lebesgue measure restricted to the set:
// x = [I - sum rho_i^3 A_i]^{-1} (sum rho_i^2 delta_i) in 2D.
Vec2 barycentre_of(const std::vector<Similarity>& maps);

// Containment radius about x: mu* max_i |p_i - x| / (1 - rho*), p_i the fixed
// point of map i, mu* = max ||I - rho_i A_i||_2, rho* = max rho_i.
double bounding_radius_about(const std::vector<Similarity>& maps, const Vec2& x);

// Diameter of the attractor via support-function iteration of its convex hull.
double attractor_diameter(const std::vector<Similarity>& maps, int directions = 1440,
                          int iterations = 200);

// Built-in examples. Angles/shifts are the exact closed forms.
IfsAttractor make_fudgeflake();
IfsAttractor make_gosper();
IfsAttractor make_koch_snowflake(double h0 = 2.0 / 1.7320508075688772935);
// Unit square as a 4-map 2-attractor (test geometry).
IfsAttractor make_unit_square();
// Equilateral triangle with the given vertices as a 4-map 2-attractor.
IfsAttractor make_triangle(const Vec2& v1, const Vec2& v2, const Vec2& v3);

// Parse an IFS from a JSON description (maps as {rho, theta, reflect, shift}).
IfsAttractor ifs_from_json(const std::string& json_text);

} // namespace fracscat

#endif
