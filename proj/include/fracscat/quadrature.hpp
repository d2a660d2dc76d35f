#ifndef FRACSCAT_QUADRATURE_HPP
#define FRACSCAT_QUADRATURE_HPP

#include <vector>

#include "fracscat/ifs.hpp"

namespace fracscat {

// Composite barycentre rule over a cell: nodes are the barycentres of the
// cell's own L mesh at width h_q, weights the sub-cell areas.
struct QuadRule {
    std::vector<Vec2> nodes;
    std::vector<double> weights;
    double h_q = 0.0;
};

// cell = cellmap(Omega); h_q is snapped down to the cell's nearest level width
QuadRule single_rule(const IfsAttractor& ifs, const Similarity& cellmap, double h_q);

template <typename F>
auto apply_rule(const QuadRule& r, F&& f) -> decltype(f(Vec2{})) {
    decltype(f(Vec2{})) acc{};
    for (std::size_t i = 0; i < r.nodes.size(); ++i) acc += r.weights[i] * f(r.nodes[i]);
    return acc;
}

// tensor rule applied streaming; summation order fixed (outer a, inner b)
template <typename G>
auto apply_double_rule(const QuadRule& a, const QuadRule& b, G&& g) -> decltype(g(Vec2{}, Vec2{})) {
    decltype(g(Vec2{}, Vec2{})) acc{};
    for (std::size_t i = 0; i < a.nodes.size(); ++i) {
        decltype(g(Vec2{}, Vec2{})) row{};
        for (std::size_t j = 0; j < b.nodes.size(); ++j)
            row += b.weights[j] * g(a.nodes[i], b.nodes[j]);
        acc += a.weights[i] * row;
    }
    return acc;
}

template <typename G>
auto double_rule_value(const IfsAttractor& ifs, const Similarity& cellA, const Similarity& cellB,
                       double h_q, G&& g) -> decltype(g(Vec2{}, Vec2{})) {
    QuadRule ra = single_rule(ifs, cellA, h_q);
    QuadRule rb = single_rule(ifs, cellB, h_q);
    return apply_double_rule(ra, rb, g);
}

} // namespace fracscat

#endif
