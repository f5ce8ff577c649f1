#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lcsm/path.hpp"
#include "lcsm/simulate.hpp"
#include "lcsm/theory.hpp"

namespace lcsm::io {

/// Headerless comma-separated numeric matrix. Parse failures carry the
/// offending line number.
Eigen::MatrixXd read_csv_matrix(const std::string& path);

/// n stacked d x d blocks (n*d rows, d columns) as symmetric matrices.
std::vector<SymMatrix> read_stacked_blocks(const std::string& path);

void write_csv_matrix(const std::string& path, const Eigen::MatrixXd& m);

/// Fixed "%.17g" rendering used for CSV output.
std::string format_double(double v);

struct ReportOptions {
    PenalizeMode penalize = PenalizeMode::kDefault;
    bool normalize = false;
    bool center = false;
    bool matrix_obs = false;
    double delta = 1e-4;
    int nlambda = 100;
    double tol = 1e-6;
    double pd_epsilon = 1e-6;
    std::optional<double> single_lambda;
    bool split_sigma = false;
    bool with_theory = false;
    TheoryInputs theory;  // n/d/p/u_p/M1/theta_l1 are filled from the fit
};

/// Machine-readable fit report with a fixed field order. Coefficients are
/// reported on the original (pre-normalization) basis scale.
nlohmann::ordered_json fit_report(const BasisSet& bs, const SufficientStats& stats,
                                  const PathResult& path, const ReportOptions& opts);

std::string penalize_name(PenalizeMode mode);

/// Header + one row per completed replication, in replication order.
std::string simulation_csv(const SimConfig& cfg, const SimResult& result);

std::string simulation_summary(const SimConfig& cfg, const SimResult& result);

nlohmann::ordered_json basis_report(const BasisSet& bs);

}  // namespace lcsm::io
