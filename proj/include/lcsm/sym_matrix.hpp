#pragma once

#include <Eigen/Dense>

#include "lcsm/errors.hpp"

namespace lcsm {

/// Dense real symmetric matrix. Symmetry holds by construction: every
/// mutation path writes the lower triangle and mirrors it.
class SymMatrix {
public:
    explicit SymMatrix(int dim) : mat_(Eigen::MatrixXd::Zero(check_dim(dim), dim)) {}

    static SymMatrix identity(int dim) {
        SymMatrix m(dim);
        m.mat_.setIdentity();
        return m;
    }

    /// Builds from a dense matrix by mirroring its lower triangle.
    static SymMatrix from_dense(const Eigen::MatrixXd& m);

    int dim() const { return static_cast<int>(mat_.rows()); }

    double operator()(int k, int l) const { return mat_(k, l); }

    void set(int k, int l, double v) {
        mat_(k, l) = v;
        mat_(l, k) = v;
    }

    const Eigen::MatrixXd& mat() const { return mat_; }

private:
    static int check_dim(int dim) {
        if (dim < 1) throw InvalidInput("SymMatrix: dim must be >= 1");
        return dim;
    }

    Eigen::MatrixXd mat_;
};

enum class Weighting { kPlain, kIsometric };

/// Column-stacked lower triangle of a symmetric matrix. With isometric
/// weighting the off-diagonal slots carry sqrt(2) times the matrix entry,
/// so the Euclidean dot product equals the Frobenius inner product.
struct HalfVector {
    int dim = 0;
    Eigen::VectorXd values;
    Weighting weighting = Weighting::kPlain;
};

/// d(d+1)/2
inline int half_dim(int d) { return d * (d + 1) / 2; }

/// Recovers d from a triangular number; throws InvalidInput otherwise.
int dim_from_half(Eigen::Index len);

HalfVector vh(const SymMatrix& m);
SymMatrix vh_inv(const HalfVector& v);
HalfVector vh_iso(const SymMatrix& m);
SymMatrix vh_iso_inv(const HalfVector& v);

double frob_inner(const SymMatrix& a, const SymMatrix& b);
double frob_norm(const SymMatrix& a);

double min_eigenvalue(const SymMatrix& a);

/// Count of singular values above tol * (largest singular value).
int numerical_rank(const SymMatrix& a, double tol = 1e-10);

namespace detail {
// Raw iso coordinates, used pervasively by the basis/solver internals.
Eigen::VectorXd iso_coords(const Eigen::MatrixXd& m);
Eigen::MatrixXd from_iso_coords(const Eigen::VectorXd& v, int d);
}  // namespace detail

}  // namespace lcsm
