#include "lcsm/theory.hpp"

#include <cmath>

namespace lcsm {

namespace {

void validate(const TheoryInputs& in) {
    if (in.n < 1 || in.d < 1) throw InvalidInput("theory: n and d must be positive");
    if (in.nu <= 0.0 || in.nu >= 1.0) throw InvalidInput("theory: nu must lie in (0,1)");
    if (in.u_p <= 0.0 || in.M1 <= 0.0) throw InvalidInput("theory: u_p and M1 must be positive");
    if (in.sigma_Wn < 0.0 || in.sigma_eps_n < 0.0 || in.b < 0.0 || in.theta_l1 < 0.0)
        throw InvalidInput("theory: scales must be non-negative");
}

}  // namespace

double tau(const TheoryInputs& in) {
    validate(in);
    const double log_term = std::log(2.0 * static_cast<double>(in.d) / in.nu);
    return std::sqrt(in.u_p * in.u_p * in.M1 * in.M1 * log_term / static_cast<double>(in.n));
}

double lambda_subgaussian(const TheoryInputs& in) {
    return std::sqrt(2.0) * in.sigma_Wn * static_cast<double>(in.n) * tau(in);
}

double lambda_subexponential(const TheoryInputs& in) {
    const double t = tau(in);
    return static_cast<double>(in.n) * (std::sqrt(2.0) * in.sigma_eps_n * t + 2.0 * in.b * t * t);
}

double risk_bound(const TheoryInputs& in, TailRegime regime) {
    validate(in);
    const double n = static_cast<double>(in.n);
    const double log_d = std::log(2.0 * static_cast<double>(in.d) / in.nu);
    if (regime == TailRegime::kSubGaussian)
        return 4.0 * std::sqrt(2.0) * in.sigma_Wn * in.u_p * in.theta_l1 *
               std::sqrt(in.M1 * in.M1 * log_d / n);
    if (in.p < 1) throw InvalidInput("theory: p must be positive for the sub-exponential bound");
    const double log_pd = std::log(2.0 * static_cast<double>(in.p) * static_cast<double>(in.d) / in.nu);
    return 4.0 * std::sqrt(2.0) * in.sigma_eps_n * in.u_p * in.theta_l1 *
               std::sqrt(in.M1 * in.M1 * log_pd / n) +
           8.0 * in.b * in.u_p * in.u_p * in.theta_l1 * in.M1 * in.M1 * log_d / n;
}

std::string theory_notes() {
    return "sub-exponential bound: the square-root term uses log(2pd/nu) while the "
           "second term and the tuning constant tau use log(2d/nu), as stated";
}

}  // namespace lcsm
