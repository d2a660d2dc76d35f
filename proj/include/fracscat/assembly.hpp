#ifndef FRACSCAT_ASSEMBLY_HPP
#define FRACSCAT_ASSEMBLY_HPP

#include <Eigen/Dense>

#include "fracscat/kernel.hpp"
#include "fracscat/mesh.hpp"
#include "fracscat/quadrature.hpp"
#include "fracscat/singular.hpp"

namespace fracscat {

// Quadrature width schedule; alpha picks the convergence/superconvergence
// parameter choices (h_s, h_r tightened for alpha = 2).
struct QuadPolicy {
    int alpha = 1;
    double h_r = 0.0;
    double h_s = 0.0;
    double h_star = 0.0;
    double h_g = 0.0;
    double h_J = 0.0;

    static QuadPolicy make(int alpha, double h, double h0);
};

struct GalerkinSystem {
    Eigen::MatrixXcd A;
    Eigen::VectorXcd g;
    std::vector<double> basis_norm; // |Omega_i|^{1/2}
    WaveParams params;
    QuadPolicy policy;
};

// Off-diagonal-identity part E_ij of the matrix: A_ij = delta_ij + E_ij.
// `touching` selects the singularity-subtracted path (needs sys).
Cplx interaction_entry(const IfsAttractor& ref, const MeshElement& ei, const MeshElement& ej,
                       bool touching, const WaveParams& wp, const QuadPolicy& pol,
                       const CanonicalSystem* sys);

Eigen::MatrixXcd assemble_matrix(const LhMesh& mesh, const InteractionSplit& split,
                                 const WaveParams& wp, const QuadPolicy& pol,
                                 const CanonicalSystem& sys);

Eigen::VectorXcd assemble_rhs(const LhMesh& mesh, const WaveParams& wp, const QuadPolicy& pol);

// element-list variants (the cells need not tile a single attractor copy;
// used by the prefractal baseline)
Eigen::MatrixXcd assemble_matrix(const IfsAttractor& ref, const std::vector<MeshElement>& els,
                                 const InteractionSplit& split, const WaveParams& wp,
                                 const QuadPolicy& pol, const CanonicalSystem& sys);
Eigen::VectorXcd assemble_rhs(const IfsAttractor& ref, const std::vector<MeshElement>& els,
                              const WaveParams& wp, const QuadPolicy& pol);

struct Functional {
    enum class Kind { FarField, ScatteredField } kind = Kind::FarField;
    double theta = 0.0; // far-field observation angle
    Vec2 x0;            // scattered-field evaluation point
};

// j~_i = Q^{h_J}[density]/|Omega_i|^{1/2}; density is the far-field or
// scattered-field representation kernel times k-power and contrast factors.
Eigen::VectorXcd assemble_functional(const LhMesh& mesh, const WaveParams& wp, double h_J,
                                     const Functional& f);
Eigen::VectorXcd assemble_functional(const IfsAttractor& ref, const std::vector<MeshElement>& els,
                                     const WaveParams& wp, double h_J, const Functional& f);

GalerkinSystem assemble_system(const LhMesh& mesh, const InteractionSplit& split,
                               const WaveParams& wp, const QuadPolicy& pol,
                               const CanonicalSystem& sys);

// e^{i pi/4}/sqrt(8 pi): far-field normalisation so u^s ~ e^{ikr}/sqrt(r) u^inf
inline Cplx far_field_constant() {
    return Cplx(0.19947114020071633897, 0.19947114020071633897);
}

} // namespace fracscat

#endif
