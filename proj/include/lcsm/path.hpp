#pragma once

#include "lcsm/solver.hpp"

namespace lcsm {

/// Smallest penalty at which every penalized coordinate is zero. With all
/// coordinates penalized this is max_j |c_j|; otherwise the unpenalized
/// block is profiled out by least squares first and the KKT boundary is
/// taken over the penalized coordinates.
double lambda_max(const SufficientStats& stats, const std::vector<bool>& penalized);

/// m geometrically spaced points from delta*lam_max up to lam_max.
Eigen::VectorXd make_grid(double lam_max, double delta, int m);

double aic_value(double risk, int active_size, int d);

/// argmin; ties resolve to the smallest lambda (lowest index).
int select_optimal(const Eigen::VectorXd& aics);

struct PdCorrection {
    SymMatrix sigma;
    double omega = 0.0;
};

/// Adds omega*I with omega = |min eigenvalue| + epsilon when the input is
/// not positive definite; returns the input unchanged otherwise.
PdCorrection pd_correct(const SymMatrix& sigma, double epsilon = 1e-6);

struct PathResult {
    Eigen::VectorXd lambdas;                // ascending
    std::vector<Coefficients> coefficients; // per lambda
    Eigen::VectorXd risks;
    Eigen::VectorXd aics;
    Eigen::VectorXi active_sizes;
    int selected = -1;
    SymMatrix sigma_hat{1};                 // at the selected lambda, PD-corrected
    bool pd_corrected = false;
    double omega = 0.0;
};

/// Warm-started fits from the largest grid value downward; every stored
/// solution is KKT-certified at 1e-4*(1+lambda).
PathResult fit_path(const SufficientStats& stats, const BasisSet& bs,
                    const Eigen::VectorXd& grid, const FitConfig& cfg,
                    double pd_epsilon = 1e-6);

}  // namespace lcsm
