#include "fracscat/solve.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#ifdef FRACSCAT_HAVE_FFTW
#include <fftw3.h>
#endif

namespace fracscat {

SolveReport solve_dense(const GalerkinSystem& sys, bool estimate_cond) {
    SolveReport rep;
    rep.method = "dense-LU";
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(sys.A);
    rep.coefficients = lu.solve(sys.g);
    double gn = sys.g.norm();
    rep.residual_norm = gn > 0.0 ? (sys.A * rep.coefficients - sys.g).norm() / gn : 0.0;
    if (!std::isfinite(rep.residual_norm) || rep.residual_norm > 1e-8)
        throw std::runtime_error("solve_dense: matrix is numerically singular (residual " +
                                 std::to_string(rep.residual_norm) + ")");
    if (estimate_cond) rep.cond_estimate = condition_estimate(sys.A);
    return rep;
}

namespace {

// complex Givens rotation [[conj(c), conj(s)], [-s, c]] zeroing b
void make_givens(Cplx a, Cplx b, Cplx& c, Cplx& s, Cplx& r) {
    double d = std::sqrt(std::norm(a) + std::norm(b));
    if (d == 0.0) {
        c = 1.0;
        s = 0.0;
        r = 0.0;
        return;
    }
    c = a / d;
    s = b / d;
    r = d;
}

void apply_givens(Cplx c, Cplx s, Cplx& a, Cplx& b) {
    Cplx t = std::conj(c) * a + std::conj(s) * b;
    b = -s * a + c * b;
    a = t;
}

// smallest 7-smooth integer >= n; keeps FFT sizes fast
int good_fft_size(int n) {
    for (;; ++n) {
        int m = n;
        for (int f : {2, 3, 5, 7})
            while (m % f == 0) m /= f;
        if (m == 1) return n;
    }
}

} // namespace

SolveReport gmres(const Matvec& apply_A, const Eigen::VectorXcd& g, double tol, int max_iter,
                  int restart) {
    int n = static_cast<int>(g.size());
    SolveReport rep;
    rep.method = "gmres";
    rep.coefficients = Eigen::VectorXcd::Zero(n);
    double bnorm = g.norm();
    if (bnorm == 0.0) return rep;

    while (true) {
        Eigen::VectorXcd r = g - apply_A(rep.coefficients);
        double beta = r.norm();
        rep.residual_norm = beta / bnorm;
        rep.residual_history.push_back(rep.residual_norm);
        if (rep.residual_norm <= tol) return rep;
        if (rep.iterations >= max_iter) break;

        int m = std::min(restart, max_iter - rep.iterations);
        Eigen::MatrixXcd V(n, m + 1);
        Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(m + 1, m);
        Eigen::VectorXcd cs(m), sn(m);
        Eigen::VectorXcd s = Eigen::VectorXcd::Zero(m + 1);
        V.col(0) = r / beta;
        s(0) = beta;

        int j_used = 0;
        for (int j = 0; j < m; ++j) {
            Eigen::VectorXcd w = apply_A(V.col(j));
            for (int i = 0; i <= j; ++i) {
                H(i, j) = V.col(i).dot(w);
                w -= H(i, j) * V.col(i);
            }
            H(j + 1, j) = w.norm();
            if (std::abs(H(j + 1, j)) > 1e-300) V.col(j + 1) = w / H(j + 1, j);

            for (int i = 0; i < j; ++i) apply_givens(cs(i), sn(i), H(i, j), H(i + 1, j));
            make_givens(H(j, j), H(j + 1, j), cs(j), sn(j), H(j, j));
            H(j + 1, j) = 0.0;
            apply_givens(cs(j), sn(j), s(j), s(j + 1));

            ++rep.iterations;
            j_used = j + 1;
            double res = std::abs(s(j + 1)) / bnorm;
            rep.residual_history.push_back(res);
            if (res <= tol) break;
        }

        Eigen::VectorXcd y =
            H.topLeftCorner(j_used, j_used).triangularView<Eigen::Upper>().solve(s.head(j_used));
        rep.coefficients += V.leftCols(j_used) * y;
    }

    throw std::runtime_error("gmres: no convergence after " + std::to_string(rep.iterations) +
                             " iterations (residual " + std::to_string(rep.residual_norm) + ")");
}

double condition_estimate(const Eigen::MatrixXcd& A) {
    int n = static_cast<int>(A.rows());
    if (n == 0) return 1.0;
    if (n <= 400) {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
        const auto& sv = svd.singularValues();
        double smin = sv(sv.size() - 1);
        if (smin == 0.0) return std::numeric_limits<double>::infinity();
        return sv(0) / smin;
    }

    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
    Eigen::MatrixXcd Ah = A.adjoint();
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu_h(Ah);

    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i) v(i) = Cplx(1.0 + 0.01 * std::sin(double(i)), 0.0);
    v.normalize();
    double smax2 = 0.0;
    for (int it = 0; it < 60; ++it) {
        Eigen::VectorXcd w = A.adjoint() * (A * v);
        smax2 = w.norm();
        v = w / smax2;
    }

    for (int i = 0; i < n; ++i) v(i) = Cplx(1.0 + 0.01 * std::cos(double(i)), 0.0);
    v.normalize();
    double inv2 = 0.0;
    for (int it = 0; it < 60; ++it) {
        Eigen::VectorXcd w = lu_h.solve(lu.solve(v));
        inv2 = w.norm();
        v = w / inv2;
    }
    return std::sqrt(smax2 * inv2);
}

struct LatticeOperator::Fft {
#ifdef FRACSCAT_HAVE_FFTW
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
#endif
    std::vector<Cplx> work;
    std::vector<std::vector<Cplx>> xhat; // per family
    std::vector<Cplx> acc;
};

LatticeOperator::LatticeOperator(const LhMesh& mesh, const InteractionSplit& split,
                                 const WaveParams& wp, const QuadPolicy& pol,
                                 const CanonicalSystem& sys) {
    wp.validate();
    LatticeStructure lat = lattice_coords(mesh); // throws for unsupported meshes
    n_ = mesh.size();
    families_ = lat.num_families;
    coords_ = lat.coords;

    long a1max = coords_[0].a1, a2max = coords_[0].a2;
    a1min_ = a1max;
    a2min_ = a2max;
    for (const LatticeCoord& c : coords_) {
        a1min_ = std::min(a1min_, c.a1);
        a1max = std::max(a1max, c.a1);
        a2min_ = std::min(a2min_, c.a2);
        a2max = std::max(a2max, c.a2);
    }
    n1_ = static_cast<int>(a1max - a1min_) + 1;
    n2_ = static_cast<int>(a2max - a2min_) + 1;
    p1_ = good_fft_size(2 * n1_ - 1);
    p2_ = good_fft_size(2 * n2_ - 1);

    grid_.assign(families_, std::vector<int>(std::size_t(n1_) * n2_, -1));
    std::vector<int> rep(families_, -1);
    for (int i = 0; i < n_; ++i) {
        const LatticeCoord& c = coords_[i];
        grid_[c.family][(c.a1 - a1min_) * n2_ + (c.a2 - a2min_)] = i;
        if (rep[c.family] < 0) rep[c.family] = i;
    }
    for (int f = 0; f < families_; ++f)
        if (rep[f] < 0) throw std::runtime_error("LatticeOperator: empty lattice family");

    const auto& els = mesh.elements();
    const IfsAttractor& ifs = mesh.ifs();
    Cplx mk2 = wp.m * wp.k * wp.k;

    // offsets realised by touching pairs: excluded from the tables, applied
    // sparsely below
    auto off_key = [&](int f, int g, long d1, long d2) {
        return std::array<long, 4>{f, g, d1, d2};
    };
    std::map<std::array<long, 4>, Cplx> touch;
    for (int f = 0; f < families_; ++f) touch[off_key(f, f, 0, 0)] = 0.0;
    for (auto [i, j] : split.singular) {
        const LatticeCoord &ci = coords_[i], &cj = coords_[j];
        touch[off_key(ci.family, cj.family, cj.a1 - ci.a1, cj.a2 - ci.a2)] = 0.0;
        touch[off_key(cj.family, ci.family, ci.a1 - cj.a1, ci.a2 - cj.a2)] = 0.0;
    }
    for (auto& [key, e] : touch) {
        // any realised pair with this offset gives the shared entry
        int f = static_cast<int>(key[0]);
        if (key[0] == key[1] && key[2] == 0 && key[3] == 0) {
            const MeshElement& el = els[rep[f]];
            e = interaction_entry(ifs, el, el, true, wp, pol, &sys);
            continue;
        }
        bool found = false;
        for (int i = 0; i < n_ && !found; ++i) {
            if (coords_[i].family != f) continue;
            int g = static_cast<int>(key[1]);
            long b1 = coords_[i].a1 + key[2] - a1min_;
            long b2 = coords_[i].a2 + key[3] - a2min_;
            if (b1 < 0 || b1 >= n1_ || b2 < 0 || b2 >= n2_) continue;
            int j = grid_[g][b1 * n2_ + b2];
            if (j < 0) continue;
            e = interaction_entry(ifs, els[i], els[j], true, wp, pol, &sys);
            found = true;
        }
        if (!found) throw std::runtime_error("LatticeOperator: unmatched touching offset");
    }

    sparse_.reserve(n_ + split.singular.size());
    for (int i = 0; i < n_; ++i)
        sparse_.push_back({i, i, touch[off_key(coords_[i].family, coords_[i].family, 0, 0)]});
    for (auto [i, j] : split.singular) {
        const LatticeCoord &ci = coords_[i], &cj = coords_[j];
        sparse_.push_back({i, j, touch[off_key(ci.family, cj.family, cj.a1 - ci.a1, cj.a2 - ci.a2)]});
    }

    // per-family-pair offset tables of regular entries
    std::vector<std::vector<Cplx>> ktab(std::size_t(families_) * families_);
    if (wp.m != Cplx(0.0, 0.0)) {
        auto kernel = [&](const Vec2& x, const Vec2& y) { return phi(wp.k, x, y); };
        for (int f = 0; f < families_; ++f) {
            const MeshElement& ef = els[rep[f]];
            double nf = std::sqrt(ef.area);
            for (int g = 0; g < families_; ++g) {
                const MeshElement& eg = els[rep[g]];
                double ng = std::sqrt(eg.area);
                std::vector<Cplx>& K = ktab[f * families_ + g];
                K.assign(std::size_t(p1_) * p2_, Cplx(0.0, 0.0));
                for (long d1 = -(n1_ - 1); d1 <= n1_ - 1; ++d1) {
                    for (long d2 = -(n2_ - 1); d2 <= n2_ - 1; ++d2) {
                        if (touch.count(off_key(f, g, d1, d2))) continue;
                        Vec2 shift = (coords_[rep[f]].a1 + d1 - coords_[rep[g]].a1) * lat.basis[0] +
                                     (coords_[rep[f]].a2 + d2 - coords_[rep[g]].a2) * lat.basis[1];
                        Similarity cell{eg.map.rho, eg.map.Q, eg.map.t + shift};
                        Cplx q = double_rule_value(ifs, ef.map, cell, pol.h_r, kernel);
                        K[(d1 + n1_ - 1) * p2_ + (d2 + n2_ - 1)] = -mk2 * q / (nf * ng);
                    }
                }
            }
        }
    } else {
        for (auto& K : ktab) K.assign(std::size_t(p1_) * p2_, Cplx(0.0, 0.0));
    }

    fft_ = new Fft;
    fft_->work.assign(std::size_t(p1_) * p2_, Cplx(0.0, 0.0));
    fft_->acc.assign(std::size_t(p1_) * p2_, Cplx(0.0, 0.0));
    fft_->xhat.assign(families_, std::vector<Cplx>(std::size_t(p1_) * p2_));
#ifdef FRACSCAT_HAVE_FFTW
    fft_->fwd = fftw_plan_dft_2d(p1_, p2_, reinterpret_cast<fftw_complex*>(fft_->work.data()),
                                 reinterpret_cast<fftw_complex*>(fft_->work.data()), FFTW_FORWARD,
                                 FFTW_ESTIMATE);
    fft_->bwd = fftw_plan_dft_2d(p1_, p2_, reinterpret_cast<fftw_complex*>(fft_->acc.data()),
                                 reinterpret_cast<fftw_complex*>(fft_->acc.data()), FFTW_BACKWARD,
                                 FFTW_ESTIMATE);
    khat_.resize(ktab.size());
    for (std::size_t t = 0; t < ktab.size(); ++t) {
        std::copy(ktab[t].begin(), ktab[t].end(), fft_->work.begin());
        fftw_execute(fft_->fwd);
        khat_[t] = fft_->work;
    }
#else
    khat_ = std::move(ktab); // spatial-domain tables; applied directly
#endif
}

LatticeOperator::~LatticeOperator() {
#ifdef FRACSCAT_HAVE_FFTW
    if (fft_) {
        if (fft_->fwd) fftw_destroy_plan(fft_->fwd);
        if (fft_->bwd) fftw_destroy_plan(fft_->bwd);
    }
#endif
    delete fft_;
}

Eigen::VectorXcd LatticeOperator::apply(const Eigen::VectorXcd& x) const {
    if (x.size() != n_) throw std::invalid_argument("LatticeOperator::apply: size mismatch");
    Eigen::VectorXcd y = x; // identity part

#ifdef FRACSCAT_HAVE_FFTW
    for (int g = 0; g < families_; ++g) {
        std::fill(fft_->work.begin(), fft_->work.end(), Cplx(0.0, 0.0));
        for (int i = 0; i < n_; ++i) {
            const LatticeCoord& c = coords_[i];
            if (c.family != g) continue;
            fft_->work[(c.a1 - a1min_) * p2_ + (c.a2 - a2min_)] = x(i);
        }
        fftw_execute(fft_->fwd);
        fft_->xhat[g] = fft_->work;
    }
    double scale = 1.0 / (double(p1_) * double(p2_));
    for (int f = 0; f < families_; ++f) {
        std::fill(fft_->acc.begin(), fft_->acc.end(), Cplx(0.0, 0.0));
        for (int g = 0; g < families_; ++g) {
            // the conv reads offset c_i - c_j, which table (g, f) stores
            const std::vector<Cplx>& kh = khat_[g * families_ + f];
            const std::vector<Cplx>& xh = fft_->xhat[g];
            for (std::size_t t = 0; t < kh.size(); ++t) fft_->acc[t] += kh[t] * xh[t];
        }
        fftw_execute(fft_->bwd);
        for (int i = 0; i < n_; ++i) {
            const LatticeCoord& c = coords_[i];
            if (c.family != f) continue;
            y(i) += scale *
                    fft_->acc[(c.a1 - a1min_ + n1_ - 1) * p2_ + (c.a2 - a2min_ + n2_ - 1)];
        }
    }
#else
    for (int i = 0; i < n_; ++i) {
        const LatticeCoord& ci = coords_[i];
        Cplx acc(0.0, 0.0);
        for (int j = 0; j < n_; ++j) {
            const LatticeCoord& cj = coords_[j];
            const std::vector<Cplx>& K = khat_[ci.family * families_ + cj.family];
            acc += K[(cj.a1 - ci.a1 + n1_ - 1) * p2_ + (cj.a2 - ci.a2 + n2_ - 1)] * x(j);
        }
        y(i) += acc;
    }
#endif

    for (const SparseEntry& e : sparse_) {
        if (e.i == e.j) {
            y(e.i) += e.e * x(e.i);
        } else {
            y(e.i) += e.e * x(e.j);
            y(e.j) += e.e * x(e.i);
        }
    }
    return y;
}

} // namespace fracscat
