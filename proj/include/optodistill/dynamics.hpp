#pragma once

#include <vector>

#include "optodistill/complex_matrix.hpp"
#include "optodistill/params.hpp"

namespace optodistill {

// Mechanical coherent label picked up by the n-photon branch:
//   phi_n(kappa, t) = i g n (1 - e^{-z t}) / z + alpha e^{-z t},  z = i + kappa/2.
cplx mech_displacement(const ProtocolParams& p, int n);

// Same label at an arbitrary time (dephasing integrand, time-grid tests).
cplx mech_displacement_at(const ProtocolParams& p, int n, double time);

// Dephasing exponent accumulated between the n- and m-photon branches:
//   D_nm = (kappa/2) * Int_0^t ( |phi_n|^2 + |phi_m|^2 - 2 conj(phi_n) phi_m ) dt'
// evaluated in closed form (the integrand is a sum of exponentials in t').
// Exactly zero for kappa == 0 or n == m.  Re D_nm >= 0 always, since the real
// part of the integrand is |phi_n - phi_m|^2; the branch weight e^{-D} decays.
cplx decoherence_exponent(const ProtocolParams& p, int n, int m);

// Same integral by adaptive quadrature; slow, kept as the permanent
// cross-check of the closed form.
cplx decoherence_exponent_quadrature(const ProtocolParams& p, int n, int m);

// Amplitude weight for losing k photons at injection, ket-side n, bra-side m:
//   G_nm^k = sqrt(C(n,k) C(m,k)) cos^{2k}(theta/2) sin^{n-k}(theta/2) sin^{m-k}(theta/2)
// computed through log-binomials.  Requires 0 <= k <= min(n, m).
double loss_weight(double theta, int n, int m, int k);

// Everything needed to evaluate the evolved joint state
//   global_weight * sum_{n,m} C_nm e^{-D_nm} sum_k G_nm^k
//       |n-k, n><m-k, m| (x) |phi_n><phi_m|
// without ever densifying the mechanical factor (kept as coherent labels).
struct JointStateCoefficients {
    ProtocolParams params;
    double global_weight = 1.0;      // 1 - lambda^2
    std::vector<cplx> phi;           // phi[n], n = 0..n_max

    cplx c(int n, int m) const { return c_[idx(n, m)]; }
    cplx d(int n, int m) const { return d_[idx(n, m)]; }
    double g_weight(int n, int m, int k) const { return g_[idx(n, m)][k]; }

    int idx(int n, int m) const { return n * (params.n_max + 1) + m; }

    std::vector<cplx> c_;                  // lambda^{n+m} times unimodular phase
    std::vector<cplx> d_;                  // dephasing exponents
    std::vector<std::vector<double>> g_;   // loss weights, entry (n,m) has min(n,m)+1 values
};

JointStateCoefficients joint_coefficients(const ProtocolParams& p);

// Undamped, lossless pure-state evolution: branch n carries
//   amplitude_n = sqrt(1-lambda^2) lambda^n e^{i g^2 n^2 (t - sin t)} e^{i g n Im[alpha eta]}
//   label_n     = alpha e^{-i t} + g n eta,   eta = 1 - e^{-i t}.
// Independent reference for joint_coefficients at kappa = 0, theta = pi.
struct IdealBranch {
    int n;
    cplx amplitude;
    cplx label;
};
std::vector<IdealBranch> ideal_evolution_oracle(double lambda, double g, cplx alpha,
                                                double t, int n_max);

// Dense two-photon-mode operator with the mechanical factor traced out
// (overlap <phi_m|phi_n> applied).  Unnormalized; trace = 1 - lambda^{2(n_max+1)}.
TwoModeDensityMatrix traced_joint_state(const JointStateCoefficients& jc);

}  // namespace optodistill
