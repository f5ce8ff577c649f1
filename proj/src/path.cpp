#include "lcsm/path.hpp"

#include <cmath>

namespace lcsm {

double lambda_max(const SufficientStats& stats, const std::vector<bool>& penalized) {
    if (static_cast<int>(penalized.size()) != stats.p())
        throw InvalidInput("lambda_max: penalized mask length must equal p");
    const double n = static_cast<double>(stats.n);
    const int p = stats.p();
    const int g = stats.given_count();

    std::vector<int> free_idx;
    for (int j = 0; j < p; ++j)
        if (!penalized[static_cast<std::size_t>(j)]) free_idx.push_back(j);

    Eigen::VectorXd theta0 = Eigen::VectorXd::Zero(p);
    if (!free_idx.empty()) {
        // Least squares over the unpenalized coordinates alone. Cross terms
        // between the given and remainder blocks vanish.
        const int k = static_cast<int>(free_idx.size());
        Eigen::MatrixXd sys(k, k);
        Eigen::VectorXd rhs(k);
        for (int a = 0; a < k; ++a) {
            rhs[a] = stats.c[free_idx[static_cast<std::size_t>(a)]] / n;
            for (int b = 0; b < k; ++b) {
                const int ja = free_idx[static_cast<std::size_t>(a)];
                const int jb = free_idx[static_cast<std::size_t>(b)];
                double val = 0.0;
                if (ja < g && jb < g)
                    val = stats.gram_given(ja, jb);
                else if (ja == jb)
                    val = stats.diag[ja];
                sys(a, b) = val;
            }
        }
        const Eigen::VectorXd sol = sys.ldlt().solve(rhs);
        if (!sol.allFinite())
            throw DependencyError("lambda_max: singular unpenalized block", -1);
        for (int a = 0; a < k; ++a) theta0[free_idx[static_cast<std::size_t>(a)]] = sol[a];
    }

    double best = 0.0;
    const auto theta_g = theta0.head(g);
    for (int j = 0; j < p; ++j) {
        if (!penalized[static_cast<std::size_t>(j)]) continue;
        const double gdot = (j < g) ? stats.gram_given.row(j).dot(theta_g)
                                    : stats.diag[j] * theta0[j];
        best = std::max(best, std::abs(stats.c[j] - n * gdot));
    }
    return best;
}

Eigen::VectorXd make_grid(double lam_max, double delta, int m) {
    if (lam_max <= 0.0)
        throw DegenerateData("make_grid: lambda_max must be positive");
    if (delta <= 0.0 || delta >= 1.0) throw InvalidInput("make_grid: delta must lie in (0,1)");
    if (m < 2) throw InvalidInput("make_grid: need at least two grid points");
    Eigen::VectorXd grid(m);
    const double lo = std::log(delta * lam_max);
    const double hi = std::log(lam_max);
    for (int i = 0; i < m; ++i)
        grid[i] = std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(m - 1));
    grid[0] = delta * lam_max;
    grid[m - 1] = lam_max;
    return grid;
}

double aic_value(double risk, int active_size, int d) {
    return risk + 2.0 * static_cast<double>(active_size) / static_cast<double>(d);
}

int select_optimal(const Eigen::VectorXd& aics) {
    if (aics.size() == 0) throw InvalidInput("select_optimal: empty AIC profile");
    int best = 0;
    for (int i = 1; i < aics.size(); ++i)
        if (aics[i] < aics[best]) best = i;
    return best;
}

PdCorrection pd_correct(const SymMatrix& sigma, double epsilon) {
    if (epsilon <= 0) throw InvalidInput("pd_correct: epsilon must be positive");
    const double mn = min_eigenvalue(sigma);
    if (mn > 0.0) return PdCorrection{sigma, 0.0};
    const double omega = std::abs(mn) + epsilon;
    Eigen::MatrixXd shifted = sigma.mat();
    shifted.diagonal().array() += omega;
    return PdCorrection{SymMatrix::from_dense(shifted), omega};
}

PathResult fit_path(const SufficientStats& stats, const BasisSet& bs, const Eigen::VectorXd& grid,
                    const FitConfig& cfg, double pd_epsilon) {
    const int m = static_cast<int>(grid.size());
    if (m < 1) throw InvalidInput("fit_path: empty grid");
    for (int i = 1; i < m; ++i)
        if (grid[i] <= grid[i - 1]) throw InvalidInput("fit_path: grid must be ascending");

    PathResult res;
    res.lambdas = grid;
    res.coefficients.assign(static_cast<std::size_t>(m), Coefficients());
    res.risks.resize(m);
    res.aics.resize(m);
    res.active_sizes.resize(m);

    Coefficients warm = Eigen::VectorXd::Zero(stats.p());
    for (int i = m - 1; i >= 0; --i) {
        FitConfig step = cfg;
        step.lambda = grid[i];
        FitResult fr;
        try {
            fr = fit(stats, step, &warm);
        } catch (const NonConvergence& e) {
            throw NonConvergence("fit_path: lambda index " + std::to_string(i) + ": " + e.what(),
                                 e.last());
        }
        warm = fr.theta;
        res.coefficients[static_cast<std::size_t>(i)] = fr.theta;
        res.risks[i] = empirical_risk(fr.theta, stats);
        int active = 0;
        for (int j = 0; j < stats.p(); ++j)
            if (fr.theta[j] != 0.0) ++active;
        res.active_sizes[i] = active;
        res.aics[i] = aic_value(res.risks[i], active, bs.dim());
    }
    res.selected = select_optimal(res.aics);
    const auto corrected =
        pd_correct(predict_sigma(res.coefficients[static_cast<std::size_t>(res.selected)], bs),
                   pd_epsilon);
    res.sigma_hat = corrected.sigma;
    res.omega = corrected.omega;
    res.pd_corrected = corrected.omega > 0.0;
    return res;
}

}  // namespace lcsm
