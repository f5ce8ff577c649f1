#include "lcsm/solver.hpp"

#include <cmath>

namespace lcsm {

namespace {

void check_mask(const std::vector<bool>& penalized, int p, const char* where) {
    if (static_cast<int>(penalized.size()) != p)
        throw InvalidInput(std::string(where) + ": penalized mask length must equal p");
}

// (G theta)_j exploiting the block structure.
double gram_row_dot(const SufficientStats& stats, const Coefficients& theta, int j) {
    const int g = stats.given_count();
    if (j < g) return stats.gram_given.row(j).dot(theta.head(g));
    return stats.diag[j] * theta[j];
}

}  // namespace

SufficientStats build_stats(const std::vector<SymMatrix>& data, const BasisSet& bs) {
    if (data.empty()) throw InvalidInput("build_stats: empty data");
    const int d = bs.dim();
    for (const auto& z : data)
        if (z.dim() != d) throw InvalidInput("build_stats: data dimension mismatch");

    SufficientStats st;
    st.n = static_cast<long>(data.size());
    const int g = bs.given_count();
    const int p = bs.p();
    st.c = Eigen::VectorXd::Zero(p);
    st.diag.resize(p);
    st.gram_given.resize(g, g);
    for (int j = 0; j < g; ++j)
        for (int k = 0; k <= j; ++k) {
            const double v = frob_inner(bs.given(j), bs.given(k));
            st.gram_given(j, k) = v;
            st.gram_given(k, j) = v;
        }
    for (int j = 0; j < g; ++j) st.diag[j] = st.gram_given(j, j);
    for (int k = 0; k < bs.q(); ++k) st.diag[g + k] = bs.remainder_norm2(k);

    Eigen::VectorXd iso_sum = Eigen::VectorXd::Zero(half_dim(d));
    st.rss0 = 0.0;
    for (const auto& z : data) {
        for (int j = 0; j < g; ++j) st.c[j] += frob_inner(bs.given(j), z);
        iso_sum += detail::iso_coords(z.mat());
        st.rss0 += frob_inner(z, z);
    }
    if (bs.q() > 0) st.c.tail(bs.q()) = bs.remainder_iso().transpose() * iso_sum;
    return st;
}

double empirical_risk(const Coefficients& theta, const SufficientStats& stats) {
    if (theta.size() != stats.p()) throw InvalidInput("empirical_risk: coefficient length mismatch");
    const int g = stats.given_count();
    const auto theta_g = theta.head(g);
    double quad = theta_g.dot(stats.gram_given * theta_g);
    if (stats.p() > g)
        quad += (stats.diag.tail(stats.p() - g).array() *
                 theta.tail(stats.p() - g).array().square())
                    .sum();
    return stats.rss0 - 2.0 * theta.dot(stats.c) + static_cast<double>(stats.n) * quad;
}

double empirical_risk(const Coefficients& theta, const std::vector<SymMatrix>& data,
                      const BasisSet& bs) {
    const SymMatrix gamma = bs.combine(theta);
    double acc = 0.0;
    for (const auto& z : data) {
        const Eigen::MatrixXd diff = z.mat() - gamma.mat();
        acc += diff.squaredNorm();
    }
    return acc;
}

double objective_value(const Coefficients& theta, const SufficientStats& stats, double lambda,
                       const std::vector<bool>& penalized) {
    check_mask(penalized, stats.p(), "objective_value");
    double pen = 0.0;
    for (int j = 0; j < stats.p(); ++j)
        if (penalized[static_cast<std::size_t>(j)]) pen += std::abs(theta[j]);
    return empirical_risk(theta, stats) + 2.0 * lambda * pen;
}

double soft_threshold(double a, double t) {
    if (t < 0) throw InvalidInput("soft_threshold: threshold must be >= 0");
    if (a > t) return a - t;
    if (a < -t) return a + t;
    return 0.0;
}

double coordinate_update(int j, const Coefficients& theta, const SufficientStats& stats,
                         double lambda, const std::vector<bool>& penalized) {
    check_mask(penalized, stats.p(), "coordinate_update");
    const double n = static_cast<double>(stats.n);
    const double den = n * stats.diag[j];
    const double cross = gram_row_dot(stats, theta, j) - stats.diag[j] * theta[j];
    const double num = stats.c[j] - n * cross;
    const double t = penalized[static_cast<std::size_t>(j)] ? lambda : 0.0;
    return soft_threshold(num / den, t / den);
}

namespace {

// One pass of cycles at a fixed stopping tolerance. Returns true when the
// successive-cycle l2 distance dropped below tol within the cycle budget.
bool run_cycles(const SufficientStats& stats, double lambda, const std::vector<bool>& penalized,
                double tol, int max_cycles, Coefficients& theta, int& cycles_used,
                const UpdateObserver& observer) {
    const int p = stats.p();
    Eigen::VectorXd prev(p);
    for (int cycle = 0; cycle < max_cycles; ++cycle) {
        prev = theta;
        for (int j = 0; j < p; ++j) {
            theta[j] = coordinate_update(j, theta, stats, lambda, penalized);
            if (observer) observer(j, theta);
        }
        ++cycles_used;
        if ((theta - prev).norm() < tol) return true;
    }
    return false;
}

}  // namespace

FitResult fit(const SufficientStats& stats, const FitConfig& cfg, const Coefficients* init,
              const UpdateObserver& observer) {
    const int p = stats.p();
    check_mask(cfg.penalized, p, "fit");
    if (cfg.tol <= 0 || cfg.max_iter < 1 || cfg.lambda < 0)
        throw InvalidInput("fit: invalid configuration");

    FitResult res;
    res.theta = init ? *init : Eigen::VectorXd::Zero(p);
    if (res.theta.size() != p) throw InvalidInput("fit: initializer length mismatch");

    // Converge by successive-cycle distance, then certify by the KKT
    // residual; tighten the distance rule if certification fails.
    const double kkt_tol = 1e-4 * (1.0 + cfg.lambda);
    double tol = cfg.tol;
    while (true) {
        const bool done = run_cycles(stats, cfg.lambda, cfg.penalized, tol,
                                     cfg.max_iter - res.iterations, res.theta, res.iterations,
                                     observer);
        if (!done) {
            res.objective = objective_value(res.theta, stats, cfg.lambda, cfg.penalized);
            throw NonConvergence("fit: no convergence within max_iter cycles", res);
        }
        if (kkt_check(res.theta, stats, cfg.lambda, cfg.penalized, kkt_tol).pass) break;
        tol /= 100.0;
        if (tol < 1e-15) {
            res.objective = objective_value(res.theta, stats, cfg.lambda, cfg.penalized);
            throw NonConvergence("fit: KKT certification failed at machine tolerance", res);
        }
    }
    res.converged = true;
    res.objective = objective_value(res.theta, stats, cfg.lambda, cfg.penalized);
    return res;
}

FitResult fit_dense(const std::vector<SymMatrix>& data, const BasisSet& bs, const FitConfig& cfg,
                    const Coefficients* init) {
    const int p = bs.p();
    check_mask(cfg.penalized, p, "fit_dense");
    if (data.empty()) throw InvalidInput("fit_dense: empty data");
    const double n = static_cast<double>(data.size());

    std::vector<Eigen::MatrixXd> elements;
    elements.reserve(static_cast<std::size_t>(p));
    Eigen::VectorXd diag(p);
    for (int j = 0; j < p; ++j) {
        elements.push_back(bs.element(j).mat());
        diag[j] = elements.back().squaredNorm();
    }

    Coefficients theta = init ? *init : Eigen::VectorXd::Zero(p);
    std::vector<Eigen::MatrixXd> resid;
    resid.reserve(data.size());
    const SymMatrix gamma0 = bs.combine(theta);
    for (const auto& z : data) resid.push_back(z.mat() - gamma0.mat());

    FitResult res;
    res.theta = theta;
    Eigen::VectorXd prev(p);
    for (int cycle = 0; cycle < cfg.max_iter; ++cycle) {
        prev = res.theta;
        for (int j = 0; j < p; ++j) {
            double num = 0.0;
            for (const auto& r : resid) num += (r.array() * elements[static_cast<std::size_t>(j)].array()).sum();
            num += n * diag[j] * res.theta[j];
            const double t = cfg.penalized[static_cast<std::size_t>(j)] ? cfg.lambda : 0.0;
            const double updated = soft_threshold(num / (n * diag[j]), t / (n * diag[j]));
            const double delta = updated - res.theta[j];
            if (delta != 0.0)
                for (auto& r : resid) r -= delta * elements[static_cast<std::size_t>(j)];
            res.theta[j] = updated;
        }
        ++res.iterations;
        if ((res.theta - prev).norm() < cfg.tol) {
            res.converged = true;
            break;
        }
    }
    double risk = 0.0;
    for (const auto& r : resid) risk += r.squaredNorm();
    double pen = 0.0;
    for (int j = 0; j < p; ++j)
        if (cfg.penalized[static_cast<std::size_t>(j)]) pen += std::abs(res.theta[j]);
    res.objective = risk + 2.0 * cfg.lambda * pen;
    if (!res.converged)
        throw NonConvergence("fit_dense: no convergence within max_iter cycles", res);
    return res;
}

KktReport kkt_check(const Coefficients& theta, const SufficientStats& stats, double lambda,
                    const std::vector<bool>& penalized, double tol) {
    check_mask(penalized, stats.p(), "kkt_check");
    const double n = static_cast<double>(stats.n);
    KktReport rep;
    for (int j = 0; j < stats.p(); ++j) {
        const double grad = n * gram_row_dot(stats, theta, j) - stats.c[j];
        double viol;
        if (!penalized[static_cast<std::size_t>(j)]) {
            viol = std::abs(grad);
        } else if (theta[j] != 0.0) {
            viol = std::abs(grad + lambda * (theta[j] > 0 ? 1.0 : -1.0));
        } else {
            viol = std::max(0.0, std::abs(grad) - lambda);
        }
        if (viol > rep.worst) {
            rep.worst = viol;
            rep.worst_index = j;
        }
    }
    rep.pass = rep.worst <= tol;
    return rep;
}

SymMatrix predict_sigma(const Coefficients& theta, const BasisSet& bs) {
    return bs.combine(theta);
}

}  // namespace lcsm
