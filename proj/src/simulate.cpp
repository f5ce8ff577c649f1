#include "lcsm/simulate.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

namespace lcsm {

std::vector<int> default_hub_counts(int adj_type, int d) {
    if (adj_type == 1) {
        if (d < 50) return {2};
        if (d < 80) return {3};
        return {4};
    }
    if (adj_type == 2) {
        if (d < 80) return {1, 1};
        return {2, 2};
    }
    return {};
}

namespace detail {

SymMatrix bernoulli_adjacency(int d, const Eigen::VectorXd& col_prob, Rng& rng) {
    if (col_prob.size() != d) throw InvalidInput("bernoulli_adjacency: probability length mismatch");
    SymMatrix a(d);
    for (int l = 0; l < d; ++l)
        for (int k = l + 1; k < d; ++k)
            if (rng.bernoulli(col_prob[l])) a.set(k, l, 1.0);
    return a;
}

}  // namespace detail

namespace {

SymMatrix hub_network(int d, int hubs, Rng& rng) {
    if (hubs < 0 || hubs > d) throw InvalidInput("gen_adjacency: invalid hub count");
    Eigen::VectorXd prob = Eigen::VectorXd::Constant(d, 0.02);
    prob.head(hubs).setConstant(0.7);
    return detail::bernoulli_adjacency(d, prob, rng);
}

}  // namespace

SymMatrix gen_adjacency(int adj_type, int d, const std::vector<int>& hubs, Rng& rng) {
    if (d < 2) throw InvalidInput("gen_adjacency: d must be >= 2");
    switch (adj_type) {
        case 1: {
            if (hubs.size() != 1) throw InvalidInput("gen_adjacency: type 1 needs one hub count");
            return hub_network(d, hubs[0], rng);
        }
        case 2: {
            if (d % 2 != 0) throw InvalidInput("gen_adjacency: type 2 needs even d");
            if (hubs.size() != 2) throw InvalidInput("gen_adjacency: type 2 needs two hub counts");
            const SymMatrix b1 = hub_network(d / 2, hubs[0], rng);
            const SymMatrix b2 = hub_network(d / 2, hubs[1], rng);
            Eigen::MatrixXd block = Eigen::MatrixXd::Zero(d, d);
            block.topLeftCorner(d / 2, d / 2) = b1.mat();
            block.bottomRightCorner(d / 2, d / 2) = b2.mat();
            return SymMatrix::from_dense(block);
        }
        case 3: {
            return detail::bernoulli_adjacency(d, Eigen::VectorXd::Constant(d, 0.2), rng);
        }
        default:
            throw InvalidInput("gen_adjacency: adjacency type must be 1, 2 or 3");
    }
}

TruthBundle gen_true_cov(const SymMatrix& a, int s, double alpha0, const Eigen::VectorXd& alpha,
                         const Eigen::VectorXd& beta_head) {
    if (alpha.size() != s) throw InvalidInput("gen_true_cov: alpha length must equal s");
    const int d = a.dim();
    const auto powers = adjacency_powers(a, s);

    // Pair positions untouched by every power, in column-stacked order of
    // the strict lower triangle.
    std::vector<std::pair<int, int>> free_pairs;
    for (int l = 0; l < d; ++l)
        for (int k = l + 1; k < d; ++k) {
            bool free = true;
            for (const auto& pw : powers)
                if (pw(k, l) != 0.0) {
                    free = false;
                    break;
                }
            if (free) free_pairs.emplace_back(k, l);
        }
    const int n_beta = static_cast<int>(beta_head.size());
    if (static_cast<int>(free_pairs.size()) < n_beta)
        throw Error("gen_true_cov: fewer than " + std::to_string(n_beta) +
                    " index pairs free of the adjacency powers");

    std::vector<SymMatrix> pinned;
    pinned.reserve(static_cast<std::size_t>(n_beta));
    for (int k = 0; k < n_beta; ++k) {
        SymMatrix pair(d);
        pair.set(free_pairs[static_cast<std::size_t>(k)].first,
                 free_pairs[static_cast<std::size_t>(k)].second, 1.0);
        pinned.push_back(pair);
    }

    std::vector<SymMatrix> given;
    given.reserve(static_cast<std::size_t>(s) + 1);
    given.push_back(SymMatrix::identity(d));
    for (const auto& pw : powers) given.push_back(pw);

    TruthBundle tb;
    tb.adjacency = a;
    tb.basis = BasisSet::build(std::move(given), pinned, kFullRemainder);
    tb.theta_star = Eigen::VectorXd::Zero(tb.basis.p());
    tb.theta_star[0] = alpha0;
    tb.theta_star.segment(1, s) = alpha;
    tb.theta_star.segment(1 + s, n_beta) = beta_head;

    Eigen::MatrixXd sig_a = alpha0 * Eigen::MatrixXd::Identity(d, d);
    for (int j = 0; j < s; ++j) sig_a += alpha[j] * powers[static_cast<std::size_t>(j)].mat();
    Eigen::MatrixXd sig_r = Eigen::MatrixXd::Zero(d, d);
    for (int k = 0; k < n_beta; ++k) sig_r += beta_head[k] * pinned[static_cast<std::size_t>(k)].mat();
    tb.sigma_a = SymMatrix::from_dense(sig_a);
    tb.sigma_r = SymMatrix::from_dense(sig_r);
    tb.sigma_pd = min_eigenvalue(SymMatrix::from_dense(sig_a + sig_r)) > 0.0;
    return tb;
}

std::vector<SymMatrix> gen_errors(long n, int d, double sigma_e2, Rng& rng,
                                  WishartScaling scaling) {
    if (sigma_e2 < 0.0) throw InvalidInput("gen_errors: sigma_e2 must be >= 0");
    const double sd = std::sqrt(sigma_e2);
    std::vector<SymMatrix> out;
    out.reserve(static_cast<std::size_t>(n));
    Eigen::MatrixXd x(d, d);
    for (long i = 0; i < n; ++i) {
        for (int col = 0; col < d; ++col)
            for (int row = 0; row < d; ++row) x(row, col) = sd * rng.normal();
        Eigen::MatrixXd w = x.transpose() * x;
        if (scaling == WishartScaling::kByDf) w /= static_cast<double>(d);
        w.diagonal().array() -= sigma_e2;
        out.push_back(SymMatrix::from_dense(w));
    }
    return out;
}

Dataset gen_dataset(const SimConfig& cfg, Rng& rng, const SymMatrix* fixed_adjacency) {
    const std::vector<int> hubs =
        cfg.hubs.empty() ? default_hub_counts(cfg.adj_type, cfg.d) : cfg.hubs;
    const Eigen::VectorXd alpha =
        cfg.alpha.size() > 0 ? cfg.alpha : Eigen::VectorXd::Constant(cfg.s, 10.0);
    Eigen::VectorXd beta_head = cfg.beta_head;
    if (beta_head.size() == 0) {
        beta_head.resize(5);
        beta_head << 50.0, -50.0, -50.0, 50.0, -50.0;
    }

    // Not every adjacency admits the truth construction (dependent powers,
    // or too few pairs untouched by them, e.g. dense hub graphs at s=3);
    // condition on constructibility by redrawing.
    TruthBundle truth;
    constexpr int kMaxDraws = 200;
    for (int attempt = 0;; ++attempt) {
        const SymMatrix a = fixed_adjacency ? *fixed_adjacency
                                            : gen_adjacency(cfg.adj_type, cfg.d, hubs, rng);
        try {
            truth = gen_true_cov(a, cfg.s, cfg.alpha0, alpha, beta_head);
            break;
        } catch (const Error&) {
            if (fixed_adjacency || attempt + 1 >= kMaxDraws) throw;
        }
    }
    Dataset ds{.z = {}, .truth = std::move(truth)};
    const Eigen::MatrixXd sigma = ds.truth.sigma_a.mat() + ds.truth.sigma_r.mat();
    auto errors = gen_errors(cfg.n, cfg.d, cfg.sigma_e2, rng, cfg.error_scaling);
    ds.z.reserve(errors.size());
    for (auto& e : errors) ds.z.push_back(SymMatrix::from_dense(sigma + e.mat()));
    return ds;
}

double fe(const SymMatrix& sigma_hat, const SymMatrix& sigma_a, const SymMatrix& sigma_r) {
    const int d = sigma_hat.dim();
    if (sigma_a.dim() != d || sigma_r.dim() != d) throw InvalidInput("fe: dimension mismatch");
    const Eigen::MatrixXd diff = sigma_hat.mat() - sigma_a.mat() - sigma_r.mat();
    return diff.norm() / std::sqrt(static_cast<double>(d));
}

double mse(const Eigen::VectorXd& theta_hat, const Eigen::VectorXd& theta_star) {
    if (theta_hat.size() != theta_star.size()) throw InvalidInput("mse: length mismatch");
    double acc = 0.0;
    int support = 0;
    for (Eigen::Index j = 0; j < theta_star.size(); ++j) {
        if (theta_star[j] == 0.0) continue;
        const double diff = theta_star[j] - theta_hat[j];
        acc += diff * diff;
        ++support;
    }
    if (support == 0) throw InvalidInput("mse: true coefficients are all zero");
    return acc / static_cast<double>(support);
}

LcmFit lcm_fit(const std::vector<SymMatrix>& data, const SymMatrix& a, int s) {
    if (data.empty()) throw InvalidInput("lcm_fit: empty data");
    std::vector<SymMatrix> given;
    given.reserve(static_cast<std::size_t>(s) + 1);
    given.push_back(SymMatrix::identity(a.dim()));
    for (auto& pw : adjacency_powers(a, s)) given.push_back(std::move(pw));
    const auto rep = check_linear_independence(given);
    if (!rep.ok)
        throw DependencyError("lcm_fit: {I, A..A^s} dependent at index " +
                                  std::to_string(rep.offending_index),
                              rep.offending_index);

    const double n = static_cast<double>(data.size());
    const int g = s + 1;
    Eigen::MatrixXd gram(g, g);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(g);
    for (int j = 0; j < g; ++j)
        for (int k = 0; k <= j; ++k) {
            const double v = frob_inner(given[static_cast<std::size_t>(j)],
                                        given[static_cast<std::size_t>(k)]);
            gram(j, k) = v;
            gram(k, j) = v;
        }
    for (const auto& z : data)
        for (int j = 0; j < g; ++j) c[j] += frob_inner(given[static_cast<std::size_t>(j)], z);

    LcmFit out;
    out.coef = gram.ldlt().solve(c / n);
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(a.dim(), a.dim());
    for (int j = 0; j < g; ++j) sigma += out.coef[j] * given[static_cast<std::size_t>(j)].mat();
    out.sigma = SymMatrix::from_dense(sigma);
    return out;
}

namespace {

RepRow run_one(const SimConfig& cfg, const SymMatrix* fixed_adjacency, int rep) {
    RepRow row;
    row.rep = rep;
    try {
        Rng rng = Rng::for_replication(cfg.seed, static_cast<std::uint64_t>(rep));
        Dataset ds = gen_dataset(cfg, rng, fixed_adjacency);
        row.sigma_pd = ds.truth.sigma_pd;

        const auto t0 = std::chrono::steady_clock::now();
        const SufficientStats stats = build_stats(ds.z, ds.truth.basis);
        FitConfig fc;
        fc.tol = cfg.tol;
        fc.max_iter = cfg.max_iter;
        fc.penalized = ds.truth.basis.penalize_mask(cfg.penalize);
        const double lam_max = lambda_max(stats, fc.penalized);
        const Eigen::VectorXd grid = make_grid(lam_max, cfg.delta, cfg.nlambda);
        const PathResult path = fit_path(stats, ds.truth.basis, grid, fc, cfg.pd_epsilon);
        const auto t1 = std::chrono::steady_clock::now();

        const Coefficients& theta = path.coefficients[static_cast<std::size_t>(path.selected)];
        SymMatrix sigma_hat = predict_sigma(theta, ds.truth.basis);
        if (cfg.pd_correct) {
            auto corrected = pd_correct(sigma_hat, cfg.pd_epsilon);
            sigma_hat = corrected.sigma;
            row.pd_corrected = corrected.omega > 0.0;
        }
        row.fe_lcsm = fe(sigma_hat, ds.truth.sigma_a, ds.truth.sigma_r);
        row.mse_lcsm = mse(theta, ds.truth.theta_star);
        row.runtime_s = std::chrono::duration<double>(t1 - t0).count();

        const LcmFit lcm = lcm_fit(ds.z, ds.truth.adjacency, cfg.s);
        Eigen::VectorXd lcm_full = Eigen::VectorXd::Zero(ds.truth.basis.p());
        lcm_full.head(cfg.s + 1) = lcm.coef;
        row.fe_lcm = fe(lcm.sigma, ds.truth.sigma_a, ds.truth.sigma_r);
        row.mse_lcm = mse(lcm_full, ds.truth.theta_star);
        row.ok = true;
    } catch (const std::exception& e) {
        row.ok = false;
        row.error = e.what();
    }
    return row;
}

Aggregate aggregate(const std::vector<RepRow>& rows, double RepRow::*field) {
    double sum = 0.0;
    long count = 0;
    for (const auto& r : rows)
        if (r.ok) {
            sum += r.*field;
            ++count;
        }
    Aggregate agg;
    if (count == 0) return agg;
    agg.mean = sum / static_cast<double>(count);
    if (count > 1) {
        double ss = 0.0;
        for (const auto& r : rows)
            if (r.ok) ss += (r.*field - agg.mean) * (r.*field - agg.mean);
        agg.se = std::sqrt(ss / static_cast<double>(count - 1)) /
                 std::sqrt(static_cast<double>(count));
    }
    return agg;
}

}  // namespace

SimResult run_replications(const SimConfig& cfg) {
    if (cfg.reps < 1) throw InvalidInput("run_replications: reps must be >= 1");
    if (cfg.adj_type == 2 && cfg.d % 2 != 0)
        throw InvalidInput("run_replications: type 2 needs even d");

    SymMatrix fixed(1);
    const SymMatrix* fixed_ptr = nullptr;
    if (!cfg.redraw_adjacency) {
        Rng rng(cfg.seed);
        const std::vector<int> hubs =
            cfg.hubs.empty() ? default_hub_counts(cfg.adj_type, cfg.d) : cfg.hubs;
        fixed = gen_adjacency(cfg.adj_type, cfg.d, hubs, rng);
        fixed_ptr = &fixed;
    }

    std::vector<RepRow> rows(static_cast<std::size_t>(cfg.reps));
    const int threads = std::max(1, cfg.threads);
    if (threads == 1) {
        for (int rep = 0; rep < cfg.reps; ++rep)
            rows[static_cast<std::size_t>(rep)] = run_one(cfg, fixed_ptr, rep);
    } else {
        std::atomic<int> next{0};
        auto worker = [&]() {
            while (true) {
                const int rep = next.fetch_add(1);
                if (rep >= cfg.reps) break;
                rows[static_cast<std::size_t>(rep)] = run_one(cfg, fixed_ptr, rep);
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    SimResult res;
    res.rows = std::move(rows);
    for (const auto& r : res.rows) {
        if (r.ok) {
            ++res.completed;
            if (!r.sigma_pd) ++res.non_pd_truths;
            if (r.pd_corrected) ++res.pd_corrections;
        } else {
            ++res.failures;
        }
    }
    res.fe_lcsm = aggregate(res.rows, &RepRow::fe_lcsm);
    res.fe_lcm = aggregate(res.rows, &RepRow::fe_lcm);
    res.mse_lcsm = aggregate(res.rows, &RepRow::mse_lcsm);
    res.mse_lcm = aggregate(res.rows, &RepRow::mse_lcm);
    res.runtime = aggregate(res.rows, &RepRow::runtime_s);
    return res;
}

}  // namespace lcsm
