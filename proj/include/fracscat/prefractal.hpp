#ifndef FRACSCAT_PREFRACTAL_HPP
#define FRACSCAT_PREFRACTAL_HPP

#include "fracscat/assembly.hpp"

namespace fracscat {

// Uniform triangular mesh of the level-j Koch prefractal polygon. Each
// triangle doubles as a copy of the unit-side equilateral-triangle 2-attractor
// so the singular quadrature machinery applies unchanged.
struct PrefractalMesh {
    int level = 0;
    double h0 = 0.0;
    double side = 0.0;         // triangle side = 3^{-j} * (sqrt(3) h0 / 2)
    std::vector<Vec2> polygon; // prefractal boundary, counter-clockwise
    std::shared_ptr<const IfsAttractor> ref;
    std::vector<MeshElement> elements;
    InteractionSplit split; // triangles sharing a vertex or an edge

    double area() const;
};

long prefractal_count(int j); // (8*9^j - 3*4^j)/5

PrefractalMesh build_prefractal_mesh(int j, double h0 = 1.1547005383792515290);

// canonical singular system for the triangle attractor, seeded with every
// touching-pair geometry the tiling realises
CanonicalSystem derive_prefractal_canonical(const PrefractalMesh& pm);

GalerkinSystem assemble_prefractal(const PrefractalMesh& pm, const WaveParams& wp,
                                   const CanonicalSystem& sys);

Eigen::VectorXcd prefractal_functional(const PrefractalMesh& pm, const WaveParams& wp, double h_J,
                                       const Functional& f);

} // namespace fracscat

#endif
