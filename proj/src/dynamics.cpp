#include "optodistill/dynamics.hpp"

#include <cmath>

#include "optodistill/errors.hpp"
#include "optodistill/quadrature.hpp"
#include "optodistill/special_functions.hpp"

namespace optodistill {

namespace {
const cplx kI(0.0, 1.0);

cplx phi_label(double g, double kappa, cplx alpha, int n, double time) {
    const cplx z(0.5 * kappa, 1.0);
    const cplx decay = std::exp(-z * time);
    return kI * g * static_cast<double>(n) * (1.0 - decay) / z + alpha * decay;
}
}  // namespace

cplx mech_displacement(const ProtocolParams& p, int n) {
    return phi_label(p.g, p.kappa, p.alpha, n, p.t);
}

cplx mech_displacement_at(const ProtocolParams& p, int n, double time) {
    return phi_label(p.g, p.kappa, p.alpha, n, time);
}

cplx decoherence_exponent(const ProtocolParams& p, int n, int m) {
    if (n < 0 || m < 0) throw IndexError("decoherence_exponent: negative index");
    if (p.kappa == 0.0 || n == m) return 0.0;
    // phi_j(t') = A_j + B_j e^{-z t'}; the integrand splits into four
    // exponentials e^{0}, e^{-z t'}, e^{-conj(z) t'}, e^{-kappa t'}.
    const cplx z(0.5 * p.kappa, 1.0);
    const cplx an = kI * p.g * static_cast<double>(n) / z;
    const cplx am = kI * p.g * static_cast<double>(m) / z;
    const cplx bn = p.alpha - an;
    const cplx bm = p.alpha - am;
    const cplx c0 = std::norm(an) + std::norm(am) - 2.0 * std::conj(an) * am;
    const cplx cz = std::conj(an) * bn + std::conj(am) * bm - 2.0 * std::conj(an) * bm;
    const cplx czb = std::conj(bn) * an + std::conj(bm) * am - 2.0 * std::conj(bn) * am;
    const cplx ck = std::norm(bn) + std::norm(bm) - 2.0 * std::conj(bn) * bm;
    const cplx zb = std::conj(z);
    const cplx integral = c0 * p.t + cz * (1.0 - std::exp(-z * p.t)) / z +
                          czb * (1.0 - std::exp(-zb * p.t)) / zb +
                          ck * (1.0 - std::exp(-p.kappa * p.t)) / p.kappa;
    const cplx d = 0.5 * p.kappa * integral;
    if (d.real() < -1e-10 * (1.0 + std::abs(d)))
        throw ComputeError("decoherence_exponent: negative real part");
    return d;
}

cplx decoherence_exponent_quadrature(const ProtocolParams& p, int n, int m) {
    if (n < 0 || m < 0) throw IndexError("decoherence_exponent_quadrature: negative index");
    if (p.kappa == 0.0 || n == m) return 0.0;
    auto integrand = [&](double tp) {
        const cplx pn = mech_displacement_at(p, n, tp);
        const cplx pm = mech_displacement_at(p, m, tp);
        return std::norm(pn) + std::norm(pm) - 2.0 * std::conj(pn) * pm;
    };
    return 0.5 * p.kappa * adaptive_quadrature_complex(integrand, 0.0, p.t, 1e-10, 1e-14);
}

double loss_weight(double theta, int n, int m, int k) {
    if (n < 0 || m < 0 || k < 0 || k > std::min(n, m))
        throw IndexError("loss_weight: require 0 <= k <= min(n, m)");
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    return sqrt_binomial(n, k) * sqrt_binomial(m, k) * std::pow(c * c, k) *
           std::pow(s, n - k) * std::pow(s, m - k);
}

JointStateCoefficients joint_coefficients(const ProtocolParams& p) {
    p.validate();
    JointStateCoefficients jc;
    jc.params = p;
    jc.global_weight = 1.0 - p.lambda * p.lambda;
    const int dim = p.n_max + 1;
    jc.phi.resize(dim);
    for (int n = 0; n < dim; ++n) jc.phi[n] = mech_displacement(p, n);
    const cplx eta = 1.0 - std::exp(-kI * p.t);
    const double kerr = p.g * p.g * (p.t - std::sin(p.t));
    const double drive = p.g * (p.alpha * eta).imag();
    jc.c_.resize(static_cast<size_t>(dim) * dim);
    jc.d_.resize(static_cast<size_t>(dim) * dim);
    jc.g_.resize(static_cast<size_t>(dim) * dim);
    for (int n = 0; n < dim; ++n) {
        for (int m = 0; m < dim; ++m) {
            const double mag = std::pow(p.lambda, n + m);
            const double phase = kerr * static_cast<double>(n * n - m * m) +
                                 drive * static_cast<double>(n - m);
            jc.c_[jc.idx(n, m)] = mag * std::polar(1.0, phase);
            jc.d_[jc.idx(n, m)] = decoherence_exponent(p, n, m);
            auto& gk = jc.g_[jc.idx(n, m)];
            gk.resize(std::min(n, m) + 1);
            for (int k = 0; k <= std::min(n, m); ++k) gk[k] = loss_weight(p.theta, n, m, k);
        }
    }
    return jc;
}

std::vector<IdealBranch> ideal_evolution_oracle(double lambda, double g, cplx alpha,
                                                double t, int n_max) {
    std::vector<IdealBranch> out;
    out.reserve(n_max + 1);
    const cplx eta = 1.0 - std::exp(-kI * t);
    const double kerr = g * g * (t - std::sin(t));
    const double drive = g * (alpha * eta).imag();
    const double root = std::sqrt(1.0 - lambda * lambda);
    for (int n = 0; n <= n_max; ++n) {
        IdealBranch b;
        b.n = n;
        b.amplitude = root * std::pow(lambda, n) *
                      std::polar(1.0, kerr * static_cast<double>(n * n) +
                                          drive * static_cast<double>(n));
        b.label = alpha * std::exp(-kI * t) + g * static_cast<double>(n) * eta;
        out.push_back(b);
    }
    return out;
}

TwoModeDensityMatrix traced_joint_state(const JointStateCoefficients& jc) {
    const int n_max = jc.params.n_max;
    TwoModeDensityMatrix rho(n_max);
    for (int n = 0; n <= n_max; ++n) {
        for (int m = 0; m <= n_max; ++m) {
            const cplx w = jc.global_weight * jc.c(n, m) * std::exp(-jc.d(n, m)) *
                           coherent_overlap(jc.phi[m], jc.phi[n]);
            for (int k = 0; k <= std::min(n, m); ++k)
                rho.at(n - k, n, m - k, m) += w * jc.g_weight(n, m, k);
        }
    }
    return rho;
}

}  // namespace optodistill
