#pragma once

#include "optodistill/complex_matrix.hpp"
#include "optodistill/dynamics.hpp"
#include "optodistill/params.hpp"

namespace optodistill {

// Gaussian-window overlap of two coherent-labelled branch wavefunctions,
//   I_nm(q) = Int psi_{phi_n}(x) conj(psi_{phi_m}(x)) e^{-(q-x)^2/(2 delta_q^2)} dx,
// in closed form (complete the square).  I_mn = conj(I_nm).
cplx povm_overlap_labels(double delta_q, double q, cplx phi_n, cplx phi_m);
cplx povm_overlap(const ProtocolParams& p, double q, int n, int m);

// Same integral by adaptive quadrature (permanent cross-check).
cplx povm_overlap_quadrature(const ProtocolParams& p, double q, int n, int m);

// Probability density of the position outcome q:
//   p(q) = (1-lambda^2)/sqrt(pi(1+2 delta_q^2))
//          * sum_{l=0}^{n_max} lambda^{2l} exp(-(q - sqrt2 Re phi_l)^2/(1+2 delta_q^2)).
double outcome_pdf(const JointStateCoefficients& jc, double q);
double outcome_pdf(const ProtocolParams& p, double q);

struct MeasurementRecord {
    double q = 0.0;
    double pdf = 0.0;        // outcome density from the closed-form series
    double raw_trace = 0.0;  // trace of the unnormalized conditional operator
    TwoModeDensityMatrix conditional_state;  // normalized
};

// Two-photon-mode state conditioned on outcome q:
//   (global/sqrt(2 pi delta_q^2)) sum_{n,m} C_nm e^{-D_nm} I_nm(q)
//       sum_k G_nm^k |n-k, n><m-k, m|
// normalized by its trace.  Throws DegenerateOutcome when the raw trace
// underflows (outcome in the far tail).
MeasurementRecord conditional_state(const JointStateCoefficients& jc, double q);
MeasurementRecord conditional_state(const ProtocolParams& p, double q);

// Which photon index labels the mechanical displacement on a lossy branch:
// pre_loss keeps the label of the photon number before injection loss (as
// modeled everywhere); post_loss is the diagnostic alternative where the
// branch that lost k photons carries the label of n-k.
enum class MechLabelVariant { pre_loss, post_loss };

// Unnormalized conditional operator under either label variant; the two
// coincide at theta = pi (no loss).
TwoModeDensityMatrix conditional_state_variant(const JointStateCoefficients& jc, double q,
                                               MechLabelVariant variant);

}  // namespace optodistill
