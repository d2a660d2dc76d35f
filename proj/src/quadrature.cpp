#include "fracscat/quadrature.hpp"

#include <stdexcept>

namespace fracscat {

namespace {

void expand(const std::vector<Similarity>& maps, double diam, double base_area, const Vec2& bc,
            const Similarity& map, double h_q, QuadRule& rule, std::size_t& guard) {
    double w = map.rho * diam;
    if (w <= h_q * (1.0 + 1e-12)) {
        rule.nodes.push_back(map(bc));
        rule.weights.push_back(map.rho * map.rho * base_area);
        if (w > rule.h_q) rule.h_q = w;
        if (++guard > 50'000'000) throw std::runtime_error("single_rule: rule too large");
        return;
    }
    for (const Similarity& m : maps) expand(maps, diam, base_area, bc, map * m, h_q, rule, guard);
}

} // namespace

QuadRule single_rule(const IfsAttractor& ifs, const Similarity& cellmap, double h_q) {
    if (!(h_q > 0.0)) throw std::invalid_argument("single_rule: h_q must be positive");
    QuadRule rule;
    rule.h_q = 0.0;
    std::size_t guard = 0;
    expand(ifs.maps(), ifs.diam(), ifs.measure(), ifs.barycentre(), cellmap, h_q, rule, guard);
    return rule;
}

} // namespace fracscat
