#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lcsm/io.hpp"

namespace py = pybind11;

namespace {

std::vector<lcsm::SymMatrix> to_sym_list(const std::vector<Eigen::MatrixXd>& mats) {
    std::vector<lcsm::SymMatrix> out;
    out.reserve(mats.size());
    for (const auto& m : mats) out.push_back(lcsm::SymMatrix::from_dense(m));
    return out;
}

lcsm::PenalizeMode penalize_from_name(const std::string& name) {
    if (name == "default") return lcsm::PenalizeMode::kDefault;
    if (name == "remainder-only") return lcsm::PenalizeMode::kRemainderOnly;
    if (name == "all") return lcsm::PenalizeMode::kAll;
    throw lcsm::InvalidInput("unknown penalize mode '" + name + "'");
}

struct PyPath {
    Eigen::VectorXd lambdas;
    Eigen::MatrixXd coefficients;  // m x p
    Eigen::VectorXd risks;
    Eigen::VectorXd aics;
    Eigen::VectorXi active_sizes;
    int selected;
    Eigen::MatrixXd sigma_hat;
    bool pd_corrected;
    double omega;
};

PyPath to_py(const lcsm::PathResult& path) {
    PyPath out;
    out.lambdas = path.lambdas;
    const int m = static_cast<int>(path.lambdas.size());
    const int p = m > 0 ? static_cast<int>(path.coefficients.front().size()) : 0;
    out.coefficients.resize(m, p);
    for (int i = 0; i < m; ++i)
        out.coefficients.row(i) = path.coefficients[static_cast<std::size_t>(i)].transpose();
    out.risks = path.risks;
    out.aics = path.aics;
    out.active_sizes = path.active_sizes;
    out.selected = path.selected;
    out.sigma_hat = path.sigma_hat.mat();
    out.pd_corrected = path.pd_corrected;
    out.omega = path.omega;
    return out;
}

}  // namespace

PYBIND11_MODULE(_lcsm, m) {
    m.doc() = "Penalized covariance regression on a network basis";

    py::register_exception<lcsm::InvalidInput>(m, "InvalidInputError", PyExc_ValueError);
    py::register_exception<lcsm::DependencyError>(m, "BasisDependencyError", PyExc_ValueError);
    py::register_exception<lcsm::DegenerateData>(m, "DegenerateDataError", PyExc_ValueError);

    // half-vectorization utilities
    m.def("vh", [](const Eigen::MatrixXd& a) { return lcsm::vh(lcsm::SymMatrix::from_dense(a)).values; });
    m.def("vh_inv", [](const Eigen::VectorXd& v) {
        return lcsm::vh_inv(lcsm::HalfVector{lcsm::dim_from_half(v.size()), v,
                                             lcsm::Weighting::kPlain})
            .mat();
    });
    m.def("vh_iso", [](const Eigen::MatrixXd& a) {
        return lcsm::vh_iso(lcsm::SymMatrix::from_dense(a)).values;
    });
    m.def("vh_iso_inv", [](const Eigen::VectorXd& v) {
        return lcsm::vh_iso_inv(lcsm::HalfVector{lcsm::dim_from_half(v.size()), v,
                                                 lcsm::Weighting::kIsometric})
            .mat();
    });
    m.def("frob_inner", [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
        return lcsm::frob_inner(lcsm::SymMatrix::from_dense(a), lcsm::SymMatrix::from_dense(b));
    });
    m.def("min_eigenvalue",
          [](const Eigen::MatrixXd& a) { return lcsm::min_eigenvalue(lcsm::SymMatrix::from_dense(a)); });
    m.def("numerical_rank",
          [](const Eigen::MatrixXd& a, double tol) {
              return lcsm::numerical_rank(lcsm::SymMatrix::from_dense(a), tol);
          },
          py::arg("a"), py::arg("tol") = 1e-10);
    m.def("soft_threshold", &lcsm::soft_threshold, py::arg("a"), py::arg("t"));

    py::class_<lcsm::BasisSet>(m, "BasisSet")
        .def_property_readonly("d", &lcsm::BasisSet::dim)
        .def_property_readonly("s", &lcsm::BasisSet::s)
        .def_property_readonly("q", &lcsm::BasisSet::q)
        .def_property_readonly("p", &lcsm::BasisSet::p)
        .def_property_readonly("u_p", &lcsm::BasisSet::u_p)
        .def_property_readonly("normalized", &lcsm::BasisSet::normalized)
        .def("given", [](const lcsm::BasisSet& bs, int j) { return bs.given(j).mat(); })
        .def("remainder", [](const lcsm::BasisSet& bs, int k) { return bs.remainder(k).mat(); })
        .def("element", [](const lcsm::BasisSet& bs, int j) { return bs.element(j).mat(); })
        .def("combine",
             [](const lcsm::BasisSet& bs, const Eigen::VectorXd& theta) {
                 return bs.combine(theta).mat();
             })
        .def("to_original_scale", &lcsm::BasisSet::to_original_scale)
        .def("residuals", [](const lcsm::BasisSet& bs) {
            const auto r = bs.remainder_residuals();
            return py::make_tuple(r.cross, r.gram);
        });

    m.def(
        "make_basis",
        [](const Eigen::MatrixXd& adjacency, int s, int q, bool normalize) {
            std::vector<lcsm::SymMatrix> given;
            const lcsm::SymMatrix a = lcsm::SymMatrix::from_dense(adjacency);
            given.push_back(lcsm::SymMatrix::identity(a.dim()));
            if (s > 0)
                for (auto& pw : lcsm::adjacency_powers(a, s)) given.push_back(std::move(pw));
            lcsm::BasisSet bs = lcsm::BasisSet::build(std::move(given), q);
            if (normalize) bs = lcsm::normalize_basis(bs);
            return bs;
        },
        py::arg("adjacency"), py::arg("s") = 2, py::arg("q") = lcsm::kFullRemainder,
        py::arg("normalize") = false,
        "Basis {I, A..A^s} plus an orthonormal remainder (q = -1 takes the full complement)");

    m.def(
        "make_basis_from",
        [](const std::vector<Eigen::MatrixXd>& given, int q) {
            return lcsm::BasisSet::build(to_sym_list(given), q);
        },
        py::arg("given"), py::arg("q") = lcsm::kFullRemainder);

    m.def(
        "remainder_basis",
        [](const std::vector<Eigen::MatrixXd>& given, int q) {
            std::vector<Eigen::MatrixXd> out;
            for (const auto& f : lcsm::remainder_basis(to_sym_list(given), q))
                out.push_back(f.mat());
            return out;
        },
        py::arg("given"), py::arg("q") = lcsm::kFullRemainder);

    py::class_<PyPath>(m, "PathResult")
        .def_readonly("lambdas", &PyPath::lambdas)
        .def_readonly("coefficients", &PyPath::coefficients)
        .def_readonly("risks", &PyPath::risks)
        .def_readonly("aics", &PyPath::aics)
        .def_readonly("active_sizes", &PyPath::active_sizes)
        .def_readonly("selected", &PyPath::selected)
        .def_readonly("sigma_hat", &PyPath::sigma_hat)
        .def_readonly("pd_corrected", &PyPath::pd_corrected)
        .def_readonly("omega", &PyPath::omega);

    m.def(
        "fit_path",
        [](const std::vector<Eigen::MatrixXd>& z, const lcsm::BasisSet& bs, double delta,
           int nlambda, double tol, const std::string& penalize, double pd_epsilon) {
            const auto data = to_sym_list(z);
            const lcsm::SufficientStats stats = lcsm::build_stats(data, bs);
            lcsm::FitConfig fc;
            fc.tol = tol;
            fc.penalized = bs.penalize_mask(penalize_from_name(penalize));
            const Eigen::VectorXd grid =
                lcsm::make_grid(lcsm::lambda_max(stats, fc.penalized), delta, nlambda);
            return to_py(lcsm::fit_path(stats, bs, grid, fc, pd_epsilon));
        },
        py::arg("z"), py::arg("basis"), py::arg("delta") = 1e-4, py::arg("nlambda") = 100,
        py::arg("tol") = 1e-6, py::arg("penalize") = "default", py::arg("pd_epsilon") = 1e-6,
        "Warm-started lambda path with AIC selection over matrix observations z_i");

    m.def(
        "fit_single",
        [](const std::vector<Eigen::MatrixXd>& z, const lcsm::BasisSet& bs, double lam,
           double tol, const std::string& penalize) {
            const auto data = to_sym_list(z);
            const lcsm::SufficientStats stats = lcsm::build_stats(data, bs);
            lcsm::FitConfig fc;
            fc.lambda = lam;
            fc.tol = tol;
            fc.penalized = bs.penalize_mask(penalize_from_name(penalize));
            const lcsm::FitResult fr = lcsm::fit(stats, fc);
            return py::make_tuple(fr.theta, fr.objective, fr.iterations);
        },
        py::arg("z"), py::arg("basis"), py::arg("lam"), py::arg("tol") = 1e-6,
        py::arg("penalize") = "default");

    m.def(
        "pd_correct",
        [](const Eigen::MatrixXd& sigma, double epsilon) {
            const auto res = lcsm::pd_correct(lcsm::SymMatrix::from_dense(sigma), epsilon);
            return py::make_tuple(res.sigma.mat(), res.omega);
        },
        py::arg("sigma"), py::arg("epsilon") = 1e-6);

    // theory calculators
    auto inputs_from_kwargs = [](long n, int d, long p, double nu, double u_p, double M1,
                                 double sigma_Wn, double sigma_eps_n, double b,
                                 double theta_l1) {
        lcsm::TheoryInputs t;
        t.n = n;
        t.d = d;
        t.p = p;
        t.nu = nu;
        t.u_p = u_p;
        t.M1 = M1;
        t.sigma_Wn = sigma_Wn;
        t.sigma_eps_n = sigma_eps_n;
        t.b = b;
        t.theta_l1 = theta_l1;
        return t;
    };
    m.def(
        "tau",
        [inputs_from_kwargs](long n, int d, double nu, double u_p, double M1) {
            return lcsm::tau(inputs_from_kwargs(n, d, 1, nu, u_p, M1, 0, 0, 0, 0));
        },
        py::arg("n"), py::arg("d"), py::arg("nu") = 0.05, py::arg("u_p") = 1.0,
        py::arg("M1") = 1.0);
    m.def(
        "risk_bound",
        [inputs_from_kwargs](long n, int d, long p, double nu, double u_p, double M1,
                             double sigma_Wn, double sigma_eps_n, double b, double theta_l1,
                             const std::string& regime) {
            const auto t =
                inputs_from_kwargs(n, d, p, nu, u_p, M1, sigma_Wn, sigma_eps_n, b, theta_l1);
            return lcsm::risk_bound(t, regime == "subexp" ? lcsm::TailRegime::kSubExponential
                                                          : lcsm::TailRegime::kSubGaussian);
        },
        py::arg("n"), py::arg("d"), py::arg("p") = 1, py::arg("nu") = 0.05, py::arg("u_p") = 1.0,
        py::arg("M1") = 1.0, py::arg("sigma_Wn") = 1.0, py::arg("sigma_eps_n") = 1.0,
        py::arg("b") = 0.0, py::arg("theta_l1") = 1.0, py::arg("regime") = "gauss");

    // simulation harness
    m.def(
        "simulate",
        [](int type, int d, long n, int s, int reps, std::uint64_t seed, double alpha0,
           const std::vector<double>& beta_head, double sigma_e2, double delta, int nlambda,
           double tol, const std::string& penalize, const std::string& error_scaling,
           bool redraw_adjacency, int threads, bool pd_correct) {
            lcsm::SimConfig cfg;
            cfg.adj_type = type;
            cfg.d = d;
            cfg.n = n;
            cfg.s = s;
            cfg.reps = reps;
            cfg.seed = seed;
            cfg.alpha0 = alpha0;
            if (!beta_head.empty())
                cfg.beta_head = Eigen::Map<const Eigen::VectorXd>(
                    beta_head.data(), static_cast<Eigen::Index>(beta_head.size()));
            cfg.sigma_e2 = sigma_e2;
            cfg.delta = delta;
            cfg.nlambda = nlambda;
            cfg.tol = tol;
            cfg.penalize = penalize_from_name(penalize);
            cfg.error_scaling = error_scaling == "df" ? lcsm::WishartScaling::kByDf
                                                      : lcsm::WishartScaling::kNone;
            cfg.redraw_adjacency = redraw_adjacency;
            cfg.threads = threads;
            cfg.pd_correct = pd_correct;
            const lcsm::SimResult res = lcsm::run_replications(cfg);
            py::dict out;
            py::list rows;
            for (const auto& r : res.rows) {
                py::dict row;
                row["rep"] = r.rep;
                row["ok"] = r.ok;
                row["fe_lcsm"] = r.fe_lcsm;
                row["fe_lcm"] = r.fe_lcm;
                row["mse_lcsm"] = r.mse_lcsm;
                row["mse_lcm"] = r.mse_lcm;
                row["runtime_s"] = r.runtime_s;
                row["pd_corrected"] = r.pd_corrected;
                if (!r.ok) row["error"] = r.error;
                rows.append(row);
            }
            out["rows"] = rows;
            out["fe_lcsm"] = py::make_tuple(res.fe_lcsm.mean, res.fe_lcsm.se);
            out["fe_lcm"] = py::make_tuple(res.fe_lcm.mean, res.fe_lcm.se);
            out["mse_lcsm"] = py::make_tuple(res.mse_lcsm.mean, res.mse_lcsm.se);
            out["mse_lcm"] = py::make_tuple(res.mse_lcm.mean, res.mse_lcm.se);
            out["completed"] = res.completed;
            out["failures"] = res.failures;
            out["pd_corrections"] = res.pd_corrections;
            return out;
        },
        py::arg("type") = 3, py::arg("d") = 20, py::arg("n") = 50, py::arg("s") = 2,
        py::arg("reps") = 100, py::arg("seed") = 1, py::arg("alpha0") = 300.0,
        py::arg("beta_head") = std::vector<double>{}, py::arg("sigma_e2") = 1.0,
        py::arg("delta") = 1e-4, py::arg("nlambda") = 100, py::arg("tol") = 1e-6,
        py::arg("penalize") = "default", py::arg("error_scaling") = "none",
        py::arg("redraw_adjacency") = true, py::arg("threads") = 1,
        py::arg("pd_correct") = false,
        "Replicated synthetic study; returns per-replication rows and aggregates");

    m.def(
        "gen_adjacency",
        [](int type, int d, const std::vector<int>& hubs, std::uint64_t seed) {
            lcsm::Rng rng(seed);
            const auto h = hubs.empty() ? lcsm::default_hub_counts(type, d) : hubs;
            return lcsm::gen_adjacency(type, d, h, rng).mat();
        },
        py::arg("type"), py::arg("d"), py::arg("hubs") = std::vector<int>{}, py::arg("seed") = 1);
}
