#include "lcsm/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace lcsm::io {

namespace {

std::vector<std::vector<double>> read_rows(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(cell, &used));
                while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used])))
                    ++used;
                if (used != cell.size()) throw std::invalid_argument("trailing characters");
            } catch (const std::exception&) {
                throw DataError(path + ": line " + std::to_string(lineno) +
                                ": cannot parse value '" + cell + "'");
            }
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw DataError(path + ": line " + std::to_string(lineno) +
                            ": expected " + std::to_string(rows.front().size()) + " columns, got " +
                            std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw DataError(path + ": empty file");
    return rows;
}

nlohmann::ordered_json matrix_json(const Eigen::MatrixXd& m) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        out.push_back(std::move(row));
    }
    return out;
}

nlohmann::ordered_json vector_json(const Eigen::VectorXd& v) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

}  // namespace

Eigen::MatrixXd read_csv_matrix(const std::string& path) {
    const auto rows = read_rows(path);
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return m;
}

std::vector<SymMatrix> read_stacked_blocks(const std::string& path) {
    const Eigen::MatrixXd m = read_csv_matrix(path);
    const Eigen::Index d = m.cols();
    if (d < 1 || m.rows() % d != 0)
        throw DataError(path + ": row count " + std::to_string(m.rows()) +
                        " is not a multiple of the block size " + std::to_string(d));
    std::vector<SymMatrix> out;
    out.reserve(static_cast<std::size_t>(m.rows() / d));
    for (Eigen::Index i = 0; i < m.rows(); i += d) {
        const Eigen::MatrixXd block = m.middleRows(i, d);
        if ((block - block.transpose()).cwiseAbs().maxCoeff() >
            1e-8 * (1.0 + block.cwiseAbs().maxCoeff()))
            throw DataError(path + ": block starting at row " + std::to_string(i + 1) +
                            " is not symmetric");
        out.push_back(SymMatrix::from_dense(block));
    }
    return out;
}

void write_csv_matrix(const std::string& path, const Eigen::MatrixXd& m) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << format_double(m(i, j));
        }
        out << '\n';
    }
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string penalize_name(PenalizeMode mode) {
    switch (mode) {
        case PenalizeMode::kDefault: return "default";
        case PenalizeMode::kRemainderOnly: return "remainder-only";
        case PenalizeMode::kAll: return "all";
    }
    return "default";
}

nlohmann::ordered_json fit_report(const BasisSet& bs, const SufficientStats& stats,
                                  const PathResult& path, const ReportOptions& opts) {
    nlohmann::ordered_json rep;
    rep["meta"] = {{"d", bs.dim()},
                   {"n", stats.n},
                   {"s", bs.s()},
                   {"q", bs.q()},
                   {"p", bs.p()},
                   {"penalize", penalize_name(opts.penalize)},
                   {"normalize", opts.normalize},
                   {"center", opts.center},
                   {"matrix_obs", opts.matrix_obs},
                   {"delta", opts.delta},
                   {"nlambda", opts.nlambda},
                   {"tol", opts.tol},
                   {"pd_epsilon", opts.pd_epsilon}};
    if (opts.single_lambda)
        rep["meta"]["lambda_override"] = *opts.single_lambda;

    rep["lambda"] = vector_json(path.lambdas);
    nlohmann::ordered_json steps = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < path.lambdas.size(); ++i) {
        const auto& theta = path.coefficients[static_cast<std::size_t>(i)];
        steps.push_back({{"lambda", path.lambdas[i]},
                         {"risk", path.risks[i]},
                         {"aic", path.aics[i]},
                         {"active_size", path.active_sizes[i]},
                         {"coefficients", vector_json(bs.to_original_scale(theta))}});
    }
    rep["path"] = std::move(steps);

    const int sel = path.selected;
    rep["selected"] = {{"index", sel},
                       {"lambda", path.lambdas[sel]},
                       {"risk", path.risks[sel]},
                       {"aic", path.aics[sel]},
                       {"active_size", path.active_sizes[sel]}};

    const Eigen::VectorXd theta =
        bs.to_original_scale(path.coefficients[static_cast<std::size_t>(sel)]);
    rep["coefficients"] = {{"alpha0", theta[0]},
                           {"alpha", vector_json(theta.segment(1, bs.s()))},
                           {"beta", vector_json(theta.tail(bs.q()))}};
    rep["sigma_hat"] = matrix_json(path.sigma_hat.mat());
    if (opts.split_sigma) {
        Eigen::MatrixXd sig_a = Eigen::MatrixXd::Zero(bs.dim(), bs.dim());
        const auto& fitted = path.coefficients[static_cast<std::size_t>(sel)];
        for (int j = 0; j < bs.given_count(); ++j) sig_a += fitted[j] * bs.given(j).mat();
        Eigen::VectorXd beta_only = fitted;
        beta_only.head(bs.given_count()).setZero();
        const SymMatrix sig_r = bs.combine(beta_only);
        rep["sigma_split"] = {{"sigma_a", matrix_json(sig_a)},
                              {"sigma_r", matrix_json(sig_r.mat())}};
    }
    rep["pd_correction"] = {{"applied", path.pd_corrected}, {"omega", path.omega}};

    if (opts.with_theory) {
        const TheoryInputs& t = opts.theory;
        rep["theory"] = {{"nu", t.nu},
                         {"u_p", t.u_p},
                         {"M1", t.M1},
                         {"sigma_Wn", t.sigma_Wn},
                         {"sigma_eps_n", t.sigma_eps_n},
                         {"b", t.b},
                         {"theta_l1", t.theta_l1},
                         {"tau", tau(t)},
                         {"lambda_subgaussian", lambda_subgaussian(t)},
                         {"lambda_subexponential", lambda_subexponential(t)},
                         {"risk_bound_subgaussian", risk_bound(t, TailRegime::kSubGaussian)},
                         {"risk_bound_subexponential", risk_bound(t, TailRegime::kSubExponential)},
                         {"notes", theory_notes()}};
    }
    return rep;
}

std::string simulation_csv(const SimConfig& cfg, const SimResult& result) {
    std::string out = "type,d,s,rep,fe_lcsm,fe_lcm,mse_lcsm,mse_lcm,runtime_s,pd_corrected\n";
    for (const auto& row : result.rows) {
        if (!row.ok) continue;
        out += std::to_string(cfg.adj_type) + ',' + std::to_string(cfg.d) + ',' +
               std::to_string(cfg.s) + ',' + std::to_string(row.rep) + ',' +
               format_double(row.fe_lcsm) + ',' + format_double(row.fe_lcm) + ',' +
               format_double(row.mse_lcsm) + ',' + format_double(row.mse_lcm) + ',' +
               format_double(row.runtime_s) + ',' + (row.pd_corrected ? "1" : "0") + '\n';
    }
    return out;
}

std::string simulation_summary(const SimConfig& cfg, const SimResult& result) {
    char buf[512];
    std::string out;
    std::snprintf(buf, sizeof(buf), "scenario: type %d, d = %d, s = %d, n = %ld, reps = %d\n",
                  cfg.adj_type, cfg.d, cfg.s, cfg.n, cfg.reps);
    out += buf;
    std::snprintf(buf, sizeof(buf), "%-10s %14s %14s\n", "metric", "LCSM", "LCM");
    out += buf;
    std::snprintf(buf, sizeof(buf), "%-10s %8.3f (%.3f) %8.3f (%.3f)\n", "FE",
                  result.fe_lcsm.mean, result.fe_lcsm.se, result.fe_lcm.mean, result.fe_lcm.se);
    out += buf;
    std::snprintf(buf, sizeof(buf), "%-10s %8.3f (%.3f) %8.3f (%.3f)\n", "MSE",
                  result.mse_lcsm.mean, result.mse_lcsm.se, result.mse_lcm.mean,
                  result.mse_lcm.se);
    out += buf;
    std::snprintf(buf, sizeof(buf), "runtime_s  %8.4f (%.4f)\n", result.runtime.mean,
                  result.runtime.se);
    out += buf;
    std::snprintf(buf, sizeof(buf),
                  "completed %d, failures %d, non-PD truths %d, PD corrections %d\n",
                  result.completed, result.failures, result.non_pd_truths,
                  result.pd_corrections);
    out += buf;
    for (const auto& row : result.rows)
        if (!row.ok) out += "rep " + std::to_string(row.rep) + " failed: " + row.error + "\n";
    return out;
}

nlohmann::ordered_json basis_report(const BasisSet& bs) {
    const auto residuals = bs.remainder_residuals();
    std::vector<SymMatrix> elems;
    elems.reserve(static_cast<std::size_t>(bs.p()));
    for (int j = 0; j < bs.p(); ++j) elems.push_back(bs.element(j));
    const auto indep = check_linear_independence(elems);
    nlohmann::ordered_json rep;
    rep["d"] = bs.dim();
    rep["s"] = bs.s();
    rep["q"] = bs.q();
    rep["p"] = bs.p();
    rep["u_p"] = bs.u_p();
    rep["normalized"] = bs.normalized();
    rep["orthogonality_residual"] = residuals.cross;
    rep["orthonormality_residual"] = residuals.gram;
    rep["independence"] = {{"ok", indep.ok},
                           {"gram_min_eigenvalue", indep.min_eigenvalue},
                           {"gram_max_eigenvalue", indep.max_eigenvalue}};
    if (!indep.ok) rep["independence"]["offending_index"] = indep.offending_index;
    return rep;
}

}  // namespace lcsm::io
