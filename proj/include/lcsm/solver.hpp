#pragma once

#include <functional>
#include <vector>

#include "lcsm/basis.hpp"
#include "lcsm/sym_matrix.hpp"

namespace lcsm {

using Coefficients = Eigen::VectorXd;

/// Everything the objective depends on through the data. The cross-Gram
/// between the remainder and given blocks is zero and the remainder Gram
/// is diagonal by basis construction, so only the given-block Gram is
/// stored densely.
struct SufficientStats {
    long n = 0;
    Eigen::VectorXd c;            // c_j = sum_i <B_j, Z_i>
    Eigen::MatrixXd gram_given;   // (s+1) x (s+1)
    Eigen::VectorXd diag;         // ||B_j||_F^2 for all j
    double rss0 = 0.0;            // sum_i ||Z_i||_F^2

    int p() const { return static_cast<int>(c.size()); }
    int given_count() const { return static_cast<int>(gram_given.rows()); }
};

SufficientStats build_stats(const std::vector<SymMatrix>& data, const BasisSet& bs);

struct FitConfig {
    double lambda = 0.0;
    double tol = 1e-6;
    int max_iter = 10000;             // full coordinate cycles
    std::vector<bool> penalized;      // length p
};

struct FitResult {
    Coefficients theta;
    int iterations = 0;
    double objective = 0.0;
    bool converged = false;
};

/// Cyclic coordinate descent failed to meet the stopping rule; carries the
/// last iterate.
class NonConvergence : public Error {
public:
    NonConvergence(const std::string& msg, FitResult last)
        : Error(msg), last_(std::move(last)) {}
    const FitResult& last() const { return last_; }

private:
    FitResult last_;
};

double empirical_risk(const Coefficients& theta, const SufficientStats& stats);
double empirical_risk(const Coefficients& theta, const std::vector<SymMatrix>& data,
                      const BasisSet& bs);

double objective_value(const Coefficients& theta, const SufficientStats& stats, double lambda,
                       const std::vector<bool>& penalized);

double soft_threshold(double a, double t);

/// Exact minimizer of the univariate objective in coordinate j, holding
/// the rest of theta fixed.
double coordinate_update(int j, const Coefficients& theta, const SufficientStats& stats,
                         double lambda, const std::vector<bool>& penalized);

/// Called after every single coordinate update when tracing a fit.
using UpdateObserver = std::function<void(int j, const Coefficients& theta)>;

FitResult fit(const SufficientStats& stats, const FitConfig& cfg,
              const Coefficients* init = nullptr, const UpdateObserver& observer = nullptr);

/// Reference route that never forms sufficient statistics: cyclic descent
/// on dense residual matrices. Intended for small problems and checks.
FitResult fit_dense(const std::vector<SymMatrix>& data, const BasisSet& bs, const FitConfig& cfg,
                    const Coefficients* init = nullptr);

struct KktReport {
    bool pass = true;
    double worst = 0.0;
    int worst_index = -1;
};

/// Subgradient optimality residuals, with the gradient scaled so that the
/// stationarity condition reads g_j + lambda sign(theta_j) = 0.
KktReport kkt_check(const Coefficients& theta, const SufficientStats& stats, double lambda,
                    const std::vector<bool>& penalized, double tol);

SymMatrix predict_sigma(const Coefficients& theta, const BasisSet& bs);

}  // namespace lcsm
