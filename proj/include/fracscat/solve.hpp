#ifndef FRACSCAT_SOLVE_HPP
#define FRACSCAT_SOLVE_HPP

#include <functional>
#include <string>
#include <vector>

#include "fracscat/assembly.hpp"

namespace fracscat {

struct SolveReport {
    Eigen::VectorXcd coefficients;
    double residual_norm = 0.0;
    int iterations = 0;
    double cond_estimate = 0.0;
    std::string method;
    std::vector<double> residual_history;
};

// LU with partial pivoting; the residual is always checked.
SolveReport solve_dense(const GalerkinSystem& sys, bool estimate_cond = false);

using Matvec = std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>;

// Unpreconditioned restarted GMRES. Throws on stagnation past max_iter.
SolveReport gmres(const Matvec& apply_A, const Eigen::VectorXcd& g, double tol = 1e-10,
                  int max_iter = 1000, int restart = 50);

// kappa_2: singular values for small N, power iteration on A and A^{-1} above.
double condition_estimate(const Eigen::MatrixXcd& A);

// Matrix-vector product exploiting the lattice structure of the named-example
// meshes: the regular block acts as per-family-pair 2-level Toeplitz
// convolutions (entries depend only on the coordinate offset), applied with
// zero-padded FFTs; touching entries are added as a sparse correction.
class LatticeOperator {
public:
    LatticeOperator(const LhMesh& mesh, const InteractionSplit& split, const WaveParams& wp,
                    const QuadPolicy& pol, const CanonicalSystem& sys);
    ~LatticeOperator();
    LatticeOperator(const LatticeOperator&) = delete;
    LatticeOperator& operator=(const LatticeOperator&) = delete;

    // not safe for concurrent calls on one instance (shared FFT buffers)
    Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const;

    int size() const { return n_; }

private:
    int n_ = 0;
    int families_ = 1;
    int n1_ = 1, n2_ = 1; // coordinate box
    int p1_ = 1, p2_ = 1; // padded FFT dims (2n-1)
    long a1min_ = 0, a2min_ = 0;
    std::vector<std::vector<int>> grid_; // per family: (a1,a2) -> element index
    std::vector<LatticeCoord> coords_;

    std::vector<std::vector<Cplx>> khat_; // per family pair: FFT of the offset table
    struct SparseEntry {
        int i, j;
        Cplx e;
    };
    std::vector<SparseEntry> sparse_;

    struct Fft; // FFTW plans and work buffers (or the fallback)
    Fft* fft_ = nullptr;
};

} // namespace fracscat

#endif
