#pragma once

#include <string>

#include "lcsm/errors.hpp"

namespace lcsm {

/// Inputs for the non-asymptotic tuning and risk-bound calculators. These
/// report theoretical quantities only; the fitting pipeline tunes by AIC.
struct TheoryInputs {
    long n = 0;             // sample count
    int d = 0;              // matrix dimension
    long p = 0;             // basis size (enters the sub-exponential bound)
    double nu = 0.05;       // confidence level in (0,1)
    double u_p = 1.0;       // max_j sqrt(rank(B_j))
    double M1 = 1.0;        // Frobenius bound on the basis elements
    double sigma_Wn = 1.0;  // sub-Gaussian scale
    double sigma_eps_n = 1.0;  // sub-exponential scale
    double b = 0.0;         // Bernstein parameter
    double theta_l1 = 0.0;  // l1 norm of the true coefficients
};

enum class TailRegime { kSubGaussian, kSubExponential };

double tau(const TheoryInputs& in);
double lambda_subgaussian(const TheoryInputs& in);
double lambda_subexponential(const TheoryInputs& in);
double risk_bound(const TheoryInputs& in, TailRegime regime);

/// Caveat attached to sub-exponential outputs: the two bound terms use
/// different log arguments (2pd/nu vs 2d/nu) as stated.
std::string theory_notes();

}  // namespace lcsm
