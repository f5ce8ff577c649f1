#pragma once

#include <string>
#include <vector>

#include "lcsm/path.hpp"
#include "lcsm/rng.hpp"

namespace lcsm {

/// How the Wishart draw is turned into an error matrix. kByDf divides by
/// the degrees of freedom before centering at sigma_e^2 I (a mean-zero
/// error); kNone skips the division, which is the convention that the
/// published Monte-Carlo tables follow.
enum class WishartScaling { kByDf, kNone };

struct SimConfig {
    int adj_type = 3;
    int d = 20;
    long n = 50;
    int s = 2;
    std::vector<int> hubs;  // empty: defaults keyed on d
    int reps = 100;
    std::uint64_t seed = 1;
    double alpha0 = 300.0;
    Eigen::VectorXd alpha;      // empty: 10 * ones(s)
    Eigen::VectorXd beta_head;  // empty: 50 * (1,-1,-1,1,-1)
    double sigma_e2 = 1.0;
    double delta = 1e-4;
    int nlambda = 100;
    double tol = 1e-6;
    int max_iter = 10000;
    PenalizeMode penalize = PenalizeMode::kDefault;
    /// Replication metrics evaluate the raw estimator unless enabled; the
    /// s=3 scenarios generate non-PD truths where a correction would
    /// swamp the Frobenius error.
    bool pd_correct = false;
    double pd_epsilon = 1e-6;
    WishartScaling error_scaling = WishartScaling::kNone;
    bool redraw_adjacency = true;
    int threads = 1;
};

std::vector<int> default_hub_counts(int adj_type, int d);

/// 0/1 adjacency: strict lower triangle filled Bernoulli-wise with the
/// type's column probabilities, then symmetrized.
SymMatrix gen_adjacency(int adj_type, int d, const std::vector<int>& hubs, Rng& rng);

namespace detail {
/// Lower-triangle Bernoulli fill with an explicit per-column probability.
SymMatrix bernoulli_adjacency(int d, const Eigen::VectorXd& col_prob, Rng& rng);
}  // namespace detail

struct TruthBundle {
    SymMatrix adjacency{1};
    SymMatrix sigma_a{1};
    SymMatrix sigma_r{1};
    Eigen::VectorXd theta_star;
    BasisSet basis;
    bool sigma_pd = false;
};

/// Assembles the unnormalized basis {I, A..A^s, P_1..P_k, complement}
/// where the P's are unit pair matrices at positions every A^j leaves
/// zero, carrying the nonzero beta_head coefficients.
TruthBundle gen_true_cov(const SymMatrix& a, int s, double alpha0, const Eigen::VectorXd& alpha,
                         const Eigen::VectorXd& beta_head);

std::vector<SymMatrix> gen_errors(long n, int d, double sigma_e2, Rng& rng,
                                  WishartScaling scaling = WishartScaling::kByDf);

struct Dataset {
    std::vector<SymMatrix> z;
    TruthBundle truth;
};

/// Draws one dataset. A non-null fixed_adjacency suppresses the per-call
/// adjacency draw and uses the supplied matrix instead.
Dataset gen_dataset(const SimConfig& cfg, Rng& rng, const SymMatrix* fixed_adjacency = nullptr);

/// Scaled Frobenius error d^{-1/2} ||sigma_hat - sigma_a - sigma_r||_F.
double fe(const SymMatrix& sigma_hat, const SymMatrix& sigma_a, const SymMatrix& sigma_r);

/// Mean squared error over the true-support coordinates.
double mse(const Eigen::VectorXd& theta_hat, const Eigen::VectorXd& theta_star);

struct LcmFit {
    Eigen::VectorXd coef;  // length s+1
    SymMatrix sigma{1};
};

/// Baseline: unpenalized least squares on {I, A, ..., A^s} alone.
LcmFit lcm_fit(const std::vector<SymMatrix>& data, const SymMatrix& a, int s);

struct RepRow {
    int rep = 0;
    bool ok = false;
    double fe_lcsm = 0.0;
    double fe_lcm = 0.0;
    double mse_lcsm = 0.0;
    double mse_lcm = 0.0;
    double runtime_s = 0.0;
    bool pd_corrected = false;
    bool sigma_pd = true;
    std::string error;
};

struct Aggregate {
    double mean = 0.0;
    double se = 0.0;  // sample sd / sqrt(reps)
};

struct SimResult {
    std::vector<RepRow> rows;
    Aggregate fe_lcsm, fe_lcm, mse_lcsm, mse_lcm, runtime;
    int completed = 0;
    int failures = 0;
    int non_pd_truths = 0;
    int pd_corrections = 0;
};

SimResult run_replications(const SimConfig& cfg);

}  // namespace lcsm
