#include "lcsm/sym_matrix.hpp"

#include <cmath>

namespace lcsm {

SymMatrix SymMatrix::from_dense(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) throw InvalidInput("SymMatrix::from_dense: matrix must be square");
    SymMatrix out(static_cast<int>(m.rows()));
    for (int l = 0; l < out.dim(); ++l)
        for (int k = l; k < out.dim(); ++k) out.set(k, l, m(k, l));
    return out;
}

int dim_from_half(Eigen::Index len) {
    const double droot = (std::sqrt(8.0 * static_cast<double>(len) + 1.0) - 1.0) / 2.0;
    const int d = static_cast<int>(std::lround(droot));
    if (d < 1 || half_dim(d) != len)
        throw InvalidInput("half vector length is not a triangular number");
    return d;
}

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

Eigen::VectorXd pack_lower(const Eigen::MatrixXd& m, double off_weight) {
    const int d = static_cast<int>(m.rows());
    Eigen::VectorXd v(half_dim(d));
    Eigen::Index idx = 0;
    for (int l = 0; l < d; ++l)
        for (int k = l; k < d; ++k) v[idx++] = (k == l) ? m(k, l) : off_weight * m(k, l);
    return v;
}

Eigen::MatrixXd unpack_lower(const Eigen::VectorXd& v, double off_weight) {
    const int d = dim_from_half(v.size());
    Eigen::MatrixXd m(d, d);
    Eigen::Index idx = 0;
    for (int l = 0; l < d; ++l)
        for (int k = l; k < d; ++k) {
            const double x = (k == l) ? v[idx] : v[idx] / off_weight;
            m(k, l) = x;
            m(l, k) = x;
            ++idx;
        }
    return m;
}

}  // namespace

HalfVector vh(const SymMatrix& m) {
    return HalfVector{m.dim(), pack_lower(m.mat(), 1.0), Weighting::kPlain};
}

SymMatrix vh_inv(const HalfVector& v) {
    if (v.weighting != Weighting::kPlain)
        throw InvalidInput("vh_inv: expected a plain-weighted half vector");
    return SymMatrix::from_dense(unpack_lower(v.values, 1.0));
}

HalfVector vh_iso(const SymMatrix& m) {
    return HalfVector{m.dim(), pack_lower(m.mat(), kSqrt2), Weighting::kIsometric};
}

SymMatrix vh_iso_inv(const HalfVector& v) {
    if (v.weighting != Weighting::kIsometric)
        throw InvalidInput("vh_iso_inv: expected an isometric half vector");
    return SymMatrix::from_dense(unpack_lower(v.values, kSqrt2));
}

double frob_inner(const SymMatrix& a, const SymMatrix& b) {
    if (a.dim() != b.dim()) throw InvalidInput("frob_inner: dimension mismatch");
    return (a.mat().array() * b.mat().array()).sum();
}

double frob_norm(const SymMatrix& a) { return std::sqrt(frob_inner(a, a)); }

double min_eigenvalue(const SymMatrix& a) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.mat(), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

int numerical_rank(const SymMatrix& a, double tol) {
    if (tol <= 0) throw InvalidInput("numerical_rank: tol must be positive");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a.mat());
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv[0] == 0.0) return 0;
    const double cutoff = tol * sv[0];
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv[i] > cutoff) ++rank;
    return rank;
}

namespace detail {

Eigen::VectorXd iso_coords(const Eigen::MatrixXd& m) { return pack_lower(m, kSqrt2); }

Eigen::MatrixXd from_iso_coords(const Eigen::VectorXd& v, int d) {
    Eigen::MatrixXd m = unpack_lower(v, kSqrt2);
    if (m.rows() != d) throw InvalidInput("from_iso_coords: length does not match dim");
    return m;
}

}  // namespace detail

}  // namespace lcsm
