#include "optodistill/measurement.hpp"

#include <algorithm>
#include <cmath>

#include "optodistill/errors.hpp"
#include "optodistill/quadrature.hpp"
#include "optodistill/special_functions.hpp"

namespace optodistill {

cplx povm_overlap_labels(double delta_q, double q, cplx phi_n, cplx phi_m) {
    const double an = phi_n.real(), bn = phi_n.imag();
    const double am = phi_m.real(), bm = phi_m.imag();
    const double inv2 = 1.0 / (2.0 * delta_q * delta_q);  // 1/(2 delta_q^2)
    // Int e^{-A x^2 + B x} dx = sqrt(pi/A) e^{B^2/(4A)}; the pi^{-1/2} from the
    // two wavefunction prefactors cancels the sqrt(pi).
    const double a = 1.0 + inv2;
    const cplx b(std::sqrt(2.0) * (an + am) + 2.0 * inv2 * q, std::sqrt(2.0) * (bn - bm));
    const cplx c(-(an * an + am * am) - q * q * inv2, -(an * bn - am * bm));
    return std::exp(b * b / (4.0 * a) + c) / std::sqrt(a);
}

cplx povm_overlap(const ProtocolParams& p, double q, int n, int m) {
    if (n < 0 || m < 0 || n > p.n_max || m > p.n_max)
        throw IndexError("povm_overlap: index out of range");
    return povm_overlap_labels(p.delta_q, q, mech_displacement(p, n), mech_displacement(p, m));
}

cplx povm_overlap_quadrature(const ProtocolParams& p, double q, int n, int m) {
    const cplx phi_n = mech_displacement(p, n);
    const cplx phi_m = mech_displacement(p, m);
    const double inv2 = 1.0 / (2.0 * p.delta_q * p.delta_q);
    auto integrand = [&](double x) {
        const double d = q - x;
        return coherent_wavefunction(phi_n, x) * std::conj(coherent_wavefunction(phi_m, x)) *
               std::exp(-d * d * inv2);
    };
    const double c1 = std::sqrt(2.0) * phi_n.real();
    const double c2 = std::sqrt(2.0) * phi_m.real();
    const double lo = std::min({c1, c2, q}) - 12.0;
    const double hi = std::max({c1, c2, q}) + 12.0;
    // For sharp windows the integrand is a spike of width ~delta_q that a
    // coarse first panel can miss entirely, so clip the domain to the window
    // support; contributions beyond 12 delta_q are below the absolute
    // tolerance.  Wide windows keep the full span.
    const double w = 12.0 * p.delta_q + 0.5;
    double lo2 = std::max(lo, q - w);
    double hi2 = std::min(hi, q + w);
    if (!(lo2 < hi2)) {
        lo2 = lo;
        hi2 = hi;
    }
    return adaptive_quadrature_complex(integrand, lo2, hi2, 1e-12, 1e-18);
}

double outcome_pdf(const JointStateCoefficients& jc, double q) {
    const double dq2 = jc.params.delta_q * jc.params.delta_q;
    const double denom = 1.0 + 2.0 * dq2;
    const double lam2 = jc.params.lambda * jc.params.lambda;
    double weight = 1.0;
    double sum = 0.0;
    for (int l = 0; l <= jc.params.n_max; ++l) {
        const double d = q - std::sqrt(2.0) * jc.phi[l].real();
        sum += weight * std::exp(-d * d / denom);
        weight *= lam2;
    }
    return jc.global_weight / std::sqrt(M_PI * denom) * sum;
}

double outcome_pdf(const ProtocolParams& p, double q) {
    p.validate();
    const double dq2 = p.delta_q * p.delta_q;
    const double denom = 1.0 + 2.0 * dq2;
    const double lam2 = p.lambda * p.lambda;
    double weight = 1.0;
    double sum = 0.0;
    for (int l = 0; l <= p.n_max; ++l) {
        const double d = q - std::sqrt(2.0) * mech_displacement(p, l).real();
        sum += weight * std::exp(-d * d / denom);
        weight *= lam2;
    }
    return (1.0 - p.lambda * p.lambda) / std::sqrt(M_PI * denom) * sum;
}

MeasurementRecord conditional_state(const JointStateCoefficients& jc, double q) {
    const ProtocolParams& p = jc.params;
    const double pref = jc.global_weight / std::sqrt(2.0 * M_PI * p.delta_q * p.delta_q);
    TwoModeDensityMatrix rho(p.n_max);
    for (int n = 0; n <= p.n_max; ++n) {
        for (int m = 0; m <= p.n_max; ++m) {
            const cplx w = pref * jc.c(n, m) * std::exp(-jc.d(n, m)) *
                           povm_overlap_labels(p.delta_q, q, jc.phi[n], jc.phi[m]);
            for (int k = 0; k <= std::min(n, m); ++k)
                rho.at(n - k, n, m - k, m) += w * jc.g_weight(n, m, k);
        }
    }
    const cplx tr = rho.mat.trace();
    if (std::abs(tr.imag()) > 1e-10 * std::max(std::abs(tr.real()), 1e-300))
        throw ComputeError("conditional_state: trace not real");
    if (!(tr.real() >= 1e-300))
        throw DegenerateOutcome("conditional_state: raw trace underflow at q = " +
                                std::to_string(q));
    MeasurementRecord rec;
    rec.q = q;
    rec.raw_trace = tr.real();
    rec.pdf = outcome_pdf(jc, q);
    rec.conditional_state = std::move(rho);
    rec.conditional_state.mat.scale(1.0 / rec.raw_trace);
    return rec;
}

MeasurementRecord conditional_state(const ProtocolParams& p, double q) {
    return conditional_state(joint_coefficients(p), q);
}

TwoModeDensityMatrix conditional_state_variant(const JointStateCoefficients& jc, double q,
                                               MechLabelVariant variant) {
    const ProtocolParams& p = jc.params;
    const double pref = jc.global_weight / std::sqrt(2.0 * M_PI * p.delta_q * p.delta_q);
    TwoModeDensityMatrix rho(p.n_max);
    for (int n = 0; n <= p.n_max; ++n) {
        for (int m = 0; m <= p.n_max; ++m) {
            const cplx base = pref * jc.c(n, m) * std::exp(-jc.d(n, m));
            for (int k = 0; k <= std::min(n, m); ++k) {
                const cplx ln = variant == MechLabelVariant::pre_loss ? jc.phi[n] : jc.phi[n - k];
                const cplx lm = variant == MechLabelVariant::pre_loss ? jc.phi[m] : jc.phi[m - k];
                rho.at(n - k, n, m - k, m) += base *
                                              povm_overlap_labels(p.delta_q, q, ln, lm) *
                                              jc.g_weight(n, m, k);
            }
        }
    }
    return rho;
}

}  // namespace optodistill
