#pragma once

#include <vector>

#include "optodistill/complex_matrix.hpp"
#include "optodistill/dynamics.hpp"
#include "optodistill/params.hpp"

namespace optodistill {

struct NegativityResult {
    double value = 0.0;                       // sum of |eps| over negative eigenvalues
    std::vector<double> negative_eigenvalues;  // the eps < 0, ascending
    int n_max_used = 0;
};

// Negativity of a normalized two-mode state: transpose mode 1, diagonalize,
// sum the absolute values of the negative eigenvalues.
NegativityResult negativity(const TwoModeDensityMatrix& rho);

// Truncated two-mode squeezed vacuum sum_n lambda^n |n,n> (normalized).
TwoModeDensityMatrix tmsv_state(double lambda, int n_max);

// Negativity of the truncated-renormalized state from its Schmidt
// coefficients c_n = sqrt(1-lambda^2) lambda^n / sqrt(1-lambda^{2(n_max+1)}):
//   N = ((sum_n c_n)^2 - 1) / 2.
// Approaches lambda/(1-lambda) as n_max grows.  Reference for the
// eigensolver path.
double tmsv_negativity_closed_form(double lambda, int n_max);

struct DistillationRatio {
    double n_d = 0.0;   // negativity of the conditional state at q
    double n_0 = 0.0;   // negativity of the unmeasured resource at the same n_max
    double ratio = 0.0;
};

// Throws ZeroBaseline when lambda == 0 (the ratio is undefined).
DistillationRatio distillation_ratio(const ProtocolParams& p, double q);

struct QScanPoint {
    double q = 0.0;
    double pdf = 0.0;
    double n_d = 0.0;
};

// Conditional negativity and outcome density on an evenly spaced q-grid
// covering every branch center sqrt2 Re phi_l +- span_sigma outcome widths
// sigma = sqrt((1+2 delta_q^2)/2).
std::vector<QScanPoint> scan_conditional_negativity(const JointStateCoefficients& jc,
                                                    double q_step, double span_sigma = 6.0);

// Probability mass of outcomes whose conditional negativity strictly exceeds
// the unmeasured baseline: grid step delta_q/10 (or q_step when > 0) over the
// center span +- 6 sigma, trapezoid integration, sign boundaries refined by
// bisection to |dq| < 1e-6.  Throws ZeroBaseline at lambda == 0 and
// GridTooCoarse when a boundary fails to resolve within the bisection budget.
double success_probability(const ProtocolParams& p, double q_step = 0.0);

struct SweepResultRow {
    double g = 0.0;
    double lambda = 0.0;
    double success_prob = 0.0;
    double ratio_at_q = 0.0;  // n_d / n_0 at the designated q
    double n0 = 0.0;
    double max_ratio = 0.0;   // max over the scan grid
    double argmax_q = 0.0;
    int status = 0;  // 0 ok, 1 invalid parameters, 2 truncation bound failed,
                     // 3 degenerate outcome, 4 grid too coarse, 5 compute error,
                     // 6 zero baseline (lambda = 0)
};

// One row per (g, lambda), row-major with g as the slow index; per-cell
// failures land in the row status instead of aborting the sweep.
std::vector<SweepResultRow> sweep(const std::vector<double>& g_values,
                                  const std::vector<double>& lambda_values,
                                  const ProtocolParams& fixed, double designated_q);

}  // namespace optodistill
