#include "lcsm/basis.hpp"

#include <Eigen/QR>
#include <cmath>

namespace lcsm {

namespace {

constexpr double kDependencyTol = 1e-10;

Eigen::MatrixXd iso_columns(const std::vector<SymMatrix>& mats) {
    if (mats.empty()) throw InvalidInput("basis: empty matrix list");
    const int d = mats.front().dim();
    Eigen::MatrixXd cols(half_dim(d), static_cast<Eigen::Index>(mats.size()));
    for (std::size_t j = 0; j < mats.size(); ++j) {
        if (mats[j].dim() != d) throw InvalidInput("basis: mixed matrix dimensions");
        cols.col(static_cast<Eigen::Index>(j)) = detail::iso_coords(mats[j].mat());
    }
    return cols;
}

bool gram_independent(const Eigen::MatrixXd& cols, double* min_out, double* max_out) {
    const Eigen::MatrixXd gram = cols.transpose() * cols;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
    const double mn = es.eigenvalues().minCoeff();
    const double mx = es.eigenvalues().maxCoeff();
    if (min_out) *min_out = mn;
    if (max_out) *max_out = mx;
    return mx > 0.0 && mn > kDependencyTol * mx;
}

// Orthonormal basis of the orthogonal complement of col(anchored) via the
// Householder reflectors of its QR factorization. Deterministic ordering.
Eigen::MatrixXd orth_complement(const Eigen::MatrixXd& anchored) {
    const Eigen::Index t = anchored.rows();
    const Eigen::Index k = anchored.cols();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(anchored);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(t, t);
    return q.rightCols(t - k);
}

}  // namespace

std::vector<SymMatrix> adjacency_powers(const SymMatrix& a, int s) {
    if (s < 1) throw InvalidInput("adjacency_powers: s must be >= 1");
    std::vector<SymMatrix> powers;
    powers.reserve(static_cast<std::size_t>(s));
    Eigen::MatrixXd cur = a.mat();
    powers.push_back(SymMatrix::from_dense(cur));
    for (int j = 2; j <= s; ++j) {
        cur = cur * a.mat();
        powers.push_back(SymMatrix::from_dense(cur));
    }
    return powers;
}

IndependenceReport check_linear_independence(const std::vector<SymMatrix>& mats) {
    IndependenceReport rep;
    const Eigen::MatrixXd cols = iso_columns(mats);
    rep.ok = gram_independent(cols, &rep.min_eigenvalue, &rep.max_eigenvalue);
    if (!rep.ok) {
        // first prefix whose Gram becomes rank deficient
        for (Eigen::Index j = 0; j < cols.cols(); ++j) {
            if (!gram_independent(cols.leftCols(j + 1), nullptr, nullptr)) {
                rep.offending_index = static_cast<int>(j);
                break;
            }
        }
    }
    return rep;
}

std::vector<SymMatrix> remainder_basis(const std::vector<SymMatrix>& given, int q) {
    const Eigen::MatrixXd cols = iso_columns(given);
    const auto rep = check_linear_independence(given);
    if (!rep.ok)
        throw DependencyError("remainder_basis: given matrices are linearly dependent at index " +
                                  std::to_string(rep.offending_index),
                              rep.offending_index);
    const int d = given.front().dim();
    const int q_max = half_dim(d) - static_cast<int>(given.size());
    const int q_eff = (q == kFullRemainder) ? q_max : q;
    if (q_eff < 0 || q_eff > q_max)
        throw InvalidInput("remainder_basis: q must lie in [0, " + std::to_string(q_max) + "]");
    const Eigen::MatrixXd comp = orth_complement(cols);
    std::vector<SymMatrix> out;
    out.reserve(static_cast<std::size_t>(q_eff));
    for (int k = 0; k < q_eff; ++k)
        out.push_back(SymMatrix::from_dense(detail::from_iso_coords(comp.col(k), d)));
    return out;
}

BasisSet BasisSet::build(std::vector<SymMatrix> given, int q) {
    return build(std::move(given), {}, q);
}

BasisSet BasisSet::build(std::vector<SymMatrix> given, const std::vector<SymMatrix>& pinned,
                         int q) {
    if (given.empty()) throw InvalidInput("BasisSet: given block must not be empty");
    std::vector<SymMatrix> anchored = given;
    anchored.insert(anchored.end(), pinned.begin(), pinned.end());
    const auto rep = check_linear_independence(anchored);
    if (!rep.ok)
        throw DependencyError("BasisSet: linearly dependent basis at index " +
                                  std::to_string(rep.offending_index),
                              rep.offending_index);

    const int d = given.front().dim();
    const int t = half_dim(d);
    const Eigen::MatrixXd anchored_iso = iso_columns(anchored);

    // Pinned remainder elements must already be orthogonal to the given
    // block and to each other; they keep their own norms.
    const int n_pin = static_cast<int>(pinned.size());
    const int n_giv = static_cast<int>(given.size());
    if (n_pin > 0) {
        const Eigen::MatrixXd cross = anchored_iso.leftCols(n_giv).transpose() *
                                      anchored_iso.rightCols(n_pin);
        Eigen::MatrixXd pin_gram =
            anchored_iso.rightCols(n_pin).transpose() * anchored_iso.rightCols(n_pin);
        pin_gram.diagonal().setZero();
        const double scale = anchored_iso.colwise().norm().maxCoeff();
        if (cross.cwiseAbs().maxCoeff() > 1e-8 * scale * scale ||
            pin_gram.cwiseAbs().maxCoeff() > 1e-8 * scale * scale)
            throw InvalidInput("BasisSet: pinned remainder elements are not orthogonal");
    }

    const int q_max = t - n_giv;
    const int q_eff = (q == kFullRemainder) ? q_max : q;
    if (q_eff < n_pin || q_eff > q_max)
        throw InvalidInput("BasisSet: q must lie in [" + std::to_string(n_pin) + ", " +
                           std::to_string(q_max) + "]");

    BasisSet bs;
    bs.dim_ = d;
    bs.given_ = std::move(given);
    bs.remainder_iso_.resize(t, q_eff);
    if (n_pin > 0) bs.remainder_iso_.leftCols(n_pin) = anchored_iso.rightCols(n_pin);
    if (q_eff > n_pin) {
        const Eigen::MatrixXd comp = orth_complement(anchored_iso);
        bs.remainder_iso_.rightCols(q_eff - n_pin) = comp.leftCols(q_eff - n_pin);
    }
    bs.remainder_norm2_ = bs.remainder_iso_.colwise().squaredNorm();
    bs.penalized_.assign(static_cast<std::size_t>(bs.p()), true);
    bs.penalized_[0] = false;
    bs.scales_ = Eigen::VectorXd::Ones(bs.p());
    return bs;
}

SymMatrix BasisSet::remainder(int k) const {
    return SymMatrix::from_dense(detail::from_iso_coords(remainder_iso_.col(k), dim_));
}

SymMatrix BasisSet::element(int j) const {
    if (j < given_count()) return given_[static_cast<std::size_t>(j)];
    return remainder(j - given_count());
}

double BasisSet::element_norm2(int j) const {
    if (j < given_count()) return frob_inner(given_[static_cast<std::size_t>(j)],
                                             given_[static_cast<std::size_t>(j)]);
    return remainder_norm2_[j - given_count()];
}

std::vector<bool> BasisSet::penalize_mask(PenalizeMode mode) const {
    std::vector<bool> mask(static_cast<std::size_t>(p()), true);
    switch (mode) {
        case PenalizeMode::kDefault:
            mask[0] = false;
            break;
        case PenalizeMode::kRemainderOnly:
            for (int j = 0; j < given_count(); ++j) mask[static_cast<std::size_t>(j)] = false;
            break;
        case PenalizeMode::kAll:
            break;
    }
    return mask;
}

Eigen::VectorXd BasisSet::to_original_scale(const Eigen::VectorXd& theta) const {
    if (theta.size() != p()) throw InvalidInput("to_original_scale: coefficient length mismatch");
    return theta.array() / scales_.array();
}

double BasisSet::u_p() const {
    if (!u_p_) {
        double best = 0.0;
        for (int j = 0; j < p(); ++j)
            best = std::max(best, static_cast<double>(numerical_rank(element(j))));
        u_p_ = std::sqrt(best);
    }
    return *u_p_;
}

SymMatrix BasisSet::combine(const Eigen::VectorXd& theta) const {
    if (theta.size() != p()) throw InvalidInput("combine: coefficient length mismatch");
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(dim_, dim_);
    for (int j = 0; j < given_count(); ++j) acc += theta[j] * given_[static_cast<std::size_t>(j)].mat();
    if (q() > 0) {
        const Eigen::VectorXd rem = remainder_iso_ * theta.tail(q());
        acc += detail::from_iso_coords(rem, dim_);
    }
    return SymMatrix::from_dense(acc);
}

BasisSet::Residuals BasisSet::remainder_residuals() const {
    Residuals r;
    if (q() == 0) return r;
    const Eigen::MatrixXd giv = iso_columns(given_);
    r.cross = (giv.transpose() * remainder_iso_).cwiseAbs().maxCoeff();
    Eigen::MatrixXd gram = remainder_iso_.transpose() * remainder_iso_;
    gram.diagonal() -= remainder_norm2_;
    r.gram = gram.cwiseAbs().maxCoeff();
    return r;
}

BasisSet normalize_basis(const BasisSet& bs) {
    BasisSet out = bs;
    Eigen::VectorXd norms(bs.p());
    for (int j = 0; j < bs.given_count(); ++j) {
        const double nrm = frob_norm(bs.given(j));
        if (nrm == 0.0) throw InvalidInput("normalize_basis: zero matrix at index " + std::to_string(j));
        norms[j] = nrm;
        out.given_[static_cast<std::size_t>(j)] =
            SymMatrix::from_dense(bs.given(j).mat() / nrm);
    }
    for (int k = 0; k < bs.q(); ++k) {
        const double nrm = std::sqrt(bs.remainder_norm2(k));
        if (nrm == 0.0)
            throw InvalidInput("normalize_basis: zero matrix at index " +
                               std::to_string(bs.given_count() + k));
        norms[bs.given_count() + k] = nrm;
        out.remainder_iso_.col(k) /= nrm;
    }
    out.remainder_norm2_ = out.remainder_iso_.colwise().squaredNorm();
    out.scales_ = bs.scales().array() * norms.array();
    out.normalized_ = true;
    return out;
}

double compute_u_p(const BasisSet& bs) { return bs.u_p(); }

}  // namespace lcsm
