#include "optodistill/special_functions.hpp"

#include <cmath>

#include "optodistill/errors.hpp"

namespace optodistill {

namespace {
const double kPiQuarterInv = 1.0 / std::pow(M_PI, 0.25);
}

double hermite_poly(int n, double x) {
    if (n < 0) throw IndexError("hermite_poly: negative degree");
    double hm = 1.0;  // H_0
    if (n == 0) return hm;
    double h = 2.0 * x;  // H_1
    for (int k = 1; k < n; ++k) {
        double next = 2.0 * x * h - 2.0 * k * hm;
        hm = h;
        h = next;
    }
    return h;
}

std::vector<double> hermite_poly_array(int n, double x) {
    std::vector<double> out(static_cast<size_t>(n) + 1);
    out[0] = 1.0;
    if (n >= 1) out[1] = 2.0 * x;
    for (int k = 1; k < n; ++k) out[k + 1] = 2.0 * x * out[k] - 2.0 * k * out[k - 1];
    return out;
}

double fock_wavefunction(int n, double x) {
    if (n < 0) throw IndexError("fock_wavefunction: negative index");
    double pm = kPiQuarterInv * std::exp(-0.5 * x * x);  // psi_0
    if (n == 0) return pm;
    double p = std::sqrt(2.0) * x * pm;  // psi_1
    for (int k = 1; k < n; ++k) {
        double next = std::sqrt(2.0 / (k + 1.0)) * x * p - std::sqrt(k / (k + 1.0)) * pm;
        pm = p;
        p = next;
    }
    return p;
}

std::vector<double> fock_wavefunction_array(int n, double x) {
    std::vector<double> out(static_cast<size_t>(n) + 1);
    out[0] = kPiQuarterInv * std::exp(-0.5 * x * x);
    if (n >= 1) out[1] = std::sqrt(2.0) * x * out[0];
    for (int k = 1; k < n; ++k)
        out[k + 1] = std::sqrt(2.0 / (k + 1.0)) * x * out[k] - std::sqrt(k / (k + 1.0)) * out[k - 1];
    return out;
}

cplx coherent_wavefunction(cplx xi, double x) {
    const double re = xi.real(), im = xi.imag();
    const double dx = x - std::sqrt(2.0) * re;
    const cplx expo(-0.5 * dx * dx, std::sqrt(2.0) * x * im - re * im);
    return kPiQuarterInv * std::exp(expo);
}

cplx coherent_overlap(cplx chi, cplx xi) {
    return std::exp(-0.5 * std::norm(xi) - 0.5 * std::norm(chi) + std::conj(chi) * xi);
}

double log_binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) throw IndexError("log_binomial: require 0 <= k <= n");
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double sqrt_binomial(int n, int k) { return std::exp(0.5 * log_binomial(n, k)); }

}  // namespace optodistill
