#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "lcsm/io.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

struct FitArgs {
    std::string data_file;
    std::string adjacency_file;
    std::string out_file;
    int order = -1;  // -1: 2 with an adjacency, 0 without
    std::string q_spec = "full";
    int nlambda = 100;
    double delta = 1e-4;
    double tol = 1e-6;
    std::string penalize = "default";
    bool normalize = false;
    bool center = false;
    bool matrix_obs = false;
    bool split_sigma = false;
    double pd_epsilon = 1e-6;
    double lambda_override = -1.0;
    bool with_theory = false;
    double nu = 0.05;
    double sigma_w = 1.0;
    double sigma_eps = 1.0;
    double bernstein_b = 0.0;
    std::string sigma_csv;
};

struct SimArgs {
    int type = 3;
    int d = 20;
    long n = 50;
    int s = 2;
    int reps = 100;
    std::uint64_t seed = 1;
    std::vector<int> hubs;
    double alpha0 = 300.0;
    std::vector<double> alpha;
    std::vector<double> beta_head;
    double sigma_e2 = 1.0;
    double delta = 1e-4;
    int nlambda = 100;
    double tol = 1e-6;
    std::string penalize = "default";
    bool pd_correct = false;
    double pd_epsilon = 1e-6;
    std::string error_scaling = "none";
    bool fixed_adjacency = false;
    int threads = 1;
    std::string out_file;
};

struct BasisArgs {
    std::string adjacency_file;
    int d = 0;
    int order = -1;
    std::string q_spec = "full";
    bool normalize = false;
    std::string out_file;
};

lcsm::PenalizeMode parse_penalize(const std::string& name) {
    if (name == "default") return lcsm::PenalizeMode::kDefault;
    if (name == "remainder-only") return lcsm::PenalizeMode::kRemainderOnly;
    if (name == "all") return lcsm::PenalizeMode::kAll;
    throw lcsm::InvalidInput("unknown penalize mode '" + name + "'");
}

int parse_q(const std::string& spec) {
    if (spec == "full") return lcsm::kFullRemainder;
    try {
        std::size_t used = 0;
        const int q = std::stoi(spec, &used);
        if (used != spec.size() || q < 0) throw std::invalid_argument("");
        return q;
    } catch (const std::exception&) {
        throw lcsm::InvalidInput("--q expects a non-negative integer or 'full'");
    }
}

lcsm::SymMatrix load_adjacency(const std::string& path) {
    const Eigen::MatrixXd m = lcsm::io::read_csv_matrix(path);
    if (m.rows() != m.cols())
        throw lcsm::DataError(path + ": adjacency must be square, got " +
                              std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-8 * (1.0 + m.cwiseAbs().maxCoeff()))
        throw lcsm::DataError(path + ": adjacency must be symmetric");
    return lcsm::SymMatrix::from_dense(m);
}

void write_output(const std::string& out_file, const std::string& content) {
    if (out_file.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(out_file);
    if (!out) throw lcsm::DataError("cannot write " + out_file);
    out << content;
}

lcsm::BasisSet build_cli_basis(const lcsm::SymMatrix* adjacency, int d, int order, int q,
                               bool normalize) {
    std::vector<lcsm::SymMatrix> given;
    given.push_back(lcsm::SymMatrix::identity(d));
    if (order > 0) {
        if (!adjacency) throw lcsm::InvalidInput("--order > 0 requires --adjacency");
        for (auto& pw : lcsm::adjacency_powers(*adjacency, order)) given.push_back(std::move(pw));
    }
    lcsm::BasisSet bs = lcsm::BasisSet::build(std::move(given), q);
    if (normalize) bs = lcsm::normalize_basis(bs);
    return bs;
}

int run_fit(const FitArgs& args) {
    std::vector<lcsm::SymMatrix> data;
    int d = 0;
    long n = 0;
    if (args.matrix_obs) {
        data = lcsm::io::read_stacked_blocks(args.data_file);
        d = data.front().dim();
        n = static_cast<long>(data.size());
    } else {
        Eigen::MatrixXd y = lcsm::io::read_csv_matrix(args.data_file);
        if (args.center) y.rowwise() -= y.colwise().mean();
        d = static_cast<int>(y.cols());
        n = y.rows();
        data.reserve(static_cast<std::size_t>(n));
        for (Eigen::Index i = 0; i < y.rows(); ++i) {
            const Eigen::VectorXd yi = y.row(i);
            data.push_back(lcsm::SymMatrix::from_dense(yi * yi.transpose()));
        }
    }

    std::optional<lcsm::SymMatrix> adjacency;
    if (!args.adjacency_file.empty()) {
        adjacency = load_adjacency(args.adjacency_file);
        if (adjacency->dim() != d)
            throw lcsm::DataError("adjacency dimension " + std::to_string(adjacency->dim()) +
                                  " does not match data dimension " + std::to_string(d));
    }
    const int order = args.order >= 0 ? args.order : (adjacency ? 2 : 0);
    lcsm::BasisSet bs = build_cli_basis(adjacency ? &*adjacency : nullptr, d, order,
                                        parse_q(args.q_spec), args.normalize);

    const lcsm::SufficientStats stats = lcsm::build_stats(data, bs);
    lcsm::FitConfig fc;
    fc.tol = args.tol;
    fc.penalized = bs.penalize_mask(parse_penalize(args.penalize));

    Eigen::VectorXd grid;
    if (args.lambda_override >= 0.0) {
        grid.resize(1);
        grid[0] = args.lambda_override;
    } else {
        grid = lcsm::make_grid(lcsm::lambda_max(stats, fc.penalized), args.delta, args.nlambda);
    }
    const lcsm::PathResult path = lcsm::fit_path(stats, bs, grid, fc, args.pd_epsilon);

    lcsm::io::ReportOptions opts;
    opts.penalize = parse_penalize(args.penalize);
    opts.normalize = args.normalize;
    opts.center = args.center;
    opts.matrix_obs = args.matrix_obs;
    opts.delta = args.delta;
    opts.nlambda = args.nlambda;
    opts.tol = args.tol;
    opts.pd_epsilon = args.pd_epsilon;
    if (args.lambda_override >= 0.0) opts.single_lambda = args.lambda_override;
    opts.split_sigma = args.split_sigma;
    opts.with_theory = args.with_theory;
    if (args.with_theory) {
        lcsm::TheoryInputs t;
        t.n = stats.n;
        t.d = bs.dim();
        t.p = bs.p();
        t.nu = args.nu;
        t.u_p = bs.u_p();
        double m1 = 0.0;
        for (int j = 0; j < bs.p(); ++j) m1 = std::max(m1, std::sqrt(bs.element_norm2(j)));
        t.M1 = m1;
        t.sigma_Wn = args.sigma_w;
        t.sigma_eps_n = args.sigma_eps;
        t.b = args.bernstein_b;
        t.theta_l1 =
            path.coefficients[static_cast<std::size_t>(path.selected)].cwiseAbs().sum();
        opts.theory = t;
    }
    write_output(args.out_file, lcsm::io::fit_report(bs, stats, path, opts).dump(2) + "\n");
    if (!args.sigma_csv.empty()) lcsm::io::write_csv_matrix(args.sigma_csv, path.sigma_hat.mat());
    return 0;
}

int run_simulate(const SimArgs& args) {
    lcsm::SimConfig cfg;
    cfg.adj_type = args.type;
    cfg.d = args.d;
    cfg.n = args.n;
    cfg.s = args.s;
    cfg.reps = args.reps;
    cfg.seed = args.seed;
    cfg.hubs = args.hubs;
    cfg.alpha0 = args.alpha0;
    if (!args.alpha.empty())
        cfg.alpha = Eigen::Map<const Eigen::VectorXd>(args.alpha.data(),
                                                      static_cast<Eigen::Index>(args.alpha.size()));
    if (!args.beta_head.empty())
        cfg.beta_head = Eigen::Map<const Eigen::VectorXd>(
            args.beta_head.data(), static_cast<Eigen::Index>(args.beta_head.size()));
    cfg.sigma_e2 = args.sigma_e2;
    cfg.delta = args.delta;
    cfg.nlambda = args.nlambda;
    cfg.tol = args.tol;
    cfg.penalize = parse_penalize(args.penalize);
    cfg.pd_correct = args.pd_correct;
    cfg.pd_epsilon = args.pd_epsilon;
    if (args.error_scaling == "none")
        cfg.error_scaling = lcsm::WishartScaling::kNone;
    else if (args.error_scaling == "df")
        cfg.error_scaling = lcsm::WishartScaling::kByDf;
    else
        throw lcsm::InvalidInput("--error-scaling expects 'none' or 'df'");
    cfg.redraw_adjacency = !args.fixed_adjacency;
    cfg.threads = args.threads;

    const lcsm::SimResult result = lcsm::run_replications(cfg);
    const std::string csv = lcsm::io::simulation_csv(cfg, result);
    if (args.out_file.empty()) {
        std::cout << csv;
        std::cerr << lcsm::io::simulation_summary(cfg, result);
    } else {
        write_output(args.out_file, csv);
        std::cout << lcsm::io::simulation_summary(cfg, result);
    }
    return 0;
}

int run_basis(const BasisArgs& args) {
    std::optional<lcsm::SymMatrix> adjacency;
    int d = args.d;
    if (!args.adjacency_file.empty()) {
        adjacency = load_adjacency(args.adjacency_file);
        d = adjacency->dim();
    }
    if (d < 1) throw lcsm::InvalidInput("basis: provide --adjacency or --d");
    const int order = args.order >= 0 ? args.order : (adjacency ? 2 : 0);
    lcsm::BasisSet bs = build_cli_basis(adjacency ? &*adjacency : nullptr, d, order,
                                        parse_q(args.q_spec), args.normalize);
    write_output(args.out_file, lcsm::io::basis_report(bs).dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Penalized covariance regression on a network basis"};
    app.require_subcommand(1);

    FitArgs fit_args;
    auto* fit = app.add_subcommand("fit", "Fit the penalized covariance regression");
    fit->add_option("--data", fit_args.data_file, "Observations CSV (rows = samples)")
        ->required();
    fit->add_option("--adjacency", fit_args.adjacency_file, "Adjacency CSV (d x d)");
    fit->add_option("--order", fit_args.order, "Highest adjacency power s");
    fit->add_option("--q", fit_args.q_spec, "Remainder size or 'full'");
    fit->add_option("--nlambda", fit_args.nlambda, "Grid size");
    fit->add_option("--delta", fit_args.delta, "lambda_min / lambda_max ratio");
    fit->add_option("--tol", fit_args.tol, "Coordinate descent tolerance");
    fit->add_option("--penalize", fit_args.penalize, "default | remainder-only | all");
    fit->add_flag("--normalize", fit_args.normalize, "Unit-Frobenius basis scaling");
    fit->add_flag("--center", fit_args.center, "Subtract column means");
    fit->add_flag("--matrix-obs", fit_args.matrix_obs, "Data file holds stacked d x d blocks");
    fit->add_flag("--split-sigma", fit_args.split_sigma, "Report sigma_a / sigma_r separately");
    fit->add_option("--pd-epsilon", fit_args.pd_epsilon, "PD correction floor");
    fit->add_option("--lambda", fit_args.lambda_override, "Fit a single penalty value");
    fit->add_flag("--theory", fit_args.with_theory, "Attach tuning/bound calculators");
    fit->add_option("--nu", fit_args.nu, "Confidence level for --theory");
    fit->add_option("--sigma-w", fit_args.sigma_w, "Sub-Gaussian scale for --theory");
    fit->add_option("--sigma-eps", fit_args.sigma_eps, "Sub-exponential scale for --theory");
    fit->add_option("--bernstein-b", fit_args.bernstein_b, "Bernstein parameter for --theory");
    fit->add_option("--sigma-csv", fit_args.sigma_csv, "Also write sigma_hat as CSV");
    fit->add_option("--out", fit_args.out_file, "Report path (stdout when omitted)");

    SimArgs sim_args;
    auto* sim = app.add_subcommand("simulate", "Monte-Carlo study over synthetic networks");
    sim->add_option("--type", sim_args.type, "Adjacency type 1|2|3")->check(CLI::Range(1, 3));
    sim->add_option("--d", sim_args.d, "Dimension");
    sim->add_option("--n", sim_args.n, "Sample count");
    sim->add_option("--s", sim_args.s, "Highest adjacency power");
    sim->add_option("--reps", sim_args.reps, "Replications");
    sim->add_option("--seed", sim_args.seed, "RNG seed");
    sim->add_option("--hubs", sim_args.hubs, "Hub counts (type 1: one, type 2: two)");
    sim->add_option("--alpha0", sim_args.alpha0, "True intercept");
    sim->add_option("--alpha", sim_args.alpha, "True adjacency coefficients");
    sim->add_option("--beta-head", sim_args.beta_head, "Leading true remainder coefficients");
    sim->add_option("--sigma-e2", sim_args.sigma_e2, "Wishart scale");
    sim->add_option("--delta", sim_args.delta, "lambda_min / lambda_max ratio");
    sim->add_option("--nlambda", sim_args.nlambda, "Grid size");
    sim->add_option("--tol", sim_args.tol, "Coordinate descent tolerance");
    sim->add_option("--penalize", sim_args.penalize, "default | remainder-only | all");
    sim->add_flag("--pd-correct", sim_args.pd_correct,
                  "Apply the PD correction to each replication's estimate");
    sim->add_option("--pd-epsilon", sim_args.pd_epsilon, "PD correction floor");
    sim->add_option("--error-scaling", sim_args.error_scaling,
                    "'none' (table convention) or 'df' (mean-zero errors)");
    sim->add_flag("--fixed-adjacency", sim_args.fixed_adjacency,
                  "Draw the adjacency once and reuse it across replications");
    sim->add_option("--threads", sim_args.threads, "Worker threads");
    sim->add_option("--out", sim_args.out_file, "CSV path (stdout when omitted)");

    BasisArgs basis_args;
    auto* basis = app.add_subcommand("basis", "Construct and diagnose a basis");
    basis->add_option("--adjacency", basis_args.adjacency_file, "Adjacency CSV (d x d)");
    basis->add_option("--d", basis_args.d, "Dimension (identity-only basis)");
    basis->add_option("--order", basis_args.order, "Highest adjacency power s");
    basis->add_option("--q", basis_args.q_spec, "Remainder size or 'full'");
    basis->add_flag("--normalize", basis_args.normalize, "Unit-Frobenius basis scaling");
    basis->add_option("--out", basis_args.out_file, "Report path (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: usage: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (fit->parsed()) return run_fit(fit_args);
        if (sim->parsed()) return run_simulate(sim_args);
        if (basis->parsed()) return run_basis(basis_args);
    } catch (const lcsm::DataError& e) {
        std::cerr << "error: data: " << e.what() << "\n";
        return kExitData;
    } catch (const lcsm::InvalidInput& e) {
        std::cerr << "error: data: " << e.what() << "\n";
        return kExitData;
    } catch (const lcsm::Error& e) {
        std::cerr << "error: numeric: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return kExitNumeric;
    }
    return 0;
}
