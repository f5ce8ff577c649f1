#pragma once

#include <optional>
#include <vector>

#include "lcsm/sym_matrix.hpp"

namespace lcsm {

inline constexpr int kFullRemainder = -1;

enum class PenalizeMode { kDefault, kRemainderOnly, kAll };

struct IndependenceReport {
    bool ok = true;
    double min_eigenvalue = 0.0;
    double max_eigenvalue = 0.0;
    int offending_index = -1;  // first index whose prefix becomes dependent
};

/// [A^1, ..., A^s] by repeated multiplication.
std::vector<SymMatrix> adjacency_powers(const SymMatrix& a, int s);

/// Gram (in iso coordinates) eigenvalue test at 1e-10 relative tolerance.
IndependenceReport check_linear_independence(const std::vector<SymMatrix>& mats);

/// Orthonormal (Frobenius) basis of the orthogonal complement of
/// span{given} inside the symmetric matrices, first q elements in a
/// deterministic Householder order. q = kFullRemainder takes the whole
/// complement.
std::vector<SymMatrix> remainder_basis(const std::vector<SymMatrix>& given, int q);

/// Full basis {I, G_1..G_s, F_1..F_q}: the given block held dense, the
/// remainder block held as iso half-vector columns. Remainder columns are
/// mutually Frobenius-orthogonal and orthogonal to the given block; the
/// trailing (complement) columns are unit-norm, while optional pinned
/// leading columns keep their own norms (recorded in remainder_norm2).
class BasisSet {
public:
    /// Empty placeholder; only the builders produce a usable set.
    BasisSet() = default;

    static BasisSet build(std::vector<SymMatrix> given, int q = kFullRemainder);
    static BasisSet build(std::vector<SymMatrix> given, const std::vector<SymMatrix>& pinned,
                          int q = kFullRemainder);

    int dim() const { return dim_; }
    int s() const { return static_cast<int>(given_.size()) - 1; }
    int q() const { return static_cast<int>(remainder_iso_.cols()); }
    int p() const { return static_cast<int>(given_.size()) + q(); }
    int given_count() const { return static_cast<int>(given_.size()); }

    const SymMatrix& given(int j) const { return given_.at(j); }
    const std::vector<SymMatrix>& given_all() const { return given_; }

    const Eigen::MatrixXd& remainder_iso() const { return remainder_iso_; }
    SymMatrix remainder(int k) const;
    double remainder_norm2(int k) const { return remainder_norm2_[k]; }

    /// Dense B_j for any flat index j in [0, p).
    SymMatrix element(int j) const;
    /// ||B_j||_F^2 for any flat index.
    double element_norm2(int j) const;

    const std::vector<bool>& penalized() const { return penalized_; }
    std::vector<bool> penalize_mask(PenalizeMode mode) const;

    bool normalized() const { return normalized_; }
    /// Frobenius norms of the pre-normalization elements (all 1 when the
    /// basis was never normalized).
    const Eigen::VectorXd& scales() const { return scales_; }
    /// Maps coefficients fitted against this basis back to the scale of
    /// the original (unnormalized) matrices.
    Eigen::VectorXd to_original_scale(const Eigen::VectorXd& theta) const;

    /// max_j sqrt(rank(B_j)); cached after the first call.
    double u_p() const;

    /// Gamma_theta = sum_j theta_j B_j.
    SymMatrix combine(const Eigen::VectorXd& theta) const;

    /// Worst orthogonality / orthonormality residuals of the remainder
    /// block, for diagnostics.
    struct Residuals {
        double cross = 0.0;  // max |<F_k, B_given>|
        double gram = 0.0;   // max |<F_k, F_l> - diag_k delta_kl|
    };
    Residuals remainder_residuals() const;

private:
    friend BasisSet normalize_basis(const BasisSet& bs);

    int dim_ = 0;
    std::vector<SymMatrix> given_;
    Eigen::MatrixXd remainder_iso_;  // half_dim(d) x q
    Eigen::VectorXd remainder_norm2_;
    std::vector<bool> penalized_;
    bool normalized_ = false;
    Eigen::VectorXd scales_;
    mutable std::optional<double> u_p_;
};

/// Scales every element to unit Frobenius norm, recording the factors.
BasisSet normalize_basis(const BasisSet& bs);

double compute_u_p(const BasisSet& bs);

}  // namespace lcsm
