#pragma once

#include <vector>

#include "optodistill/types.hpp"

namespace optodistill {

// Physicists' Hermite polynomial H_n(x) via the three-term recurrence
// H_{n+1} = 2 x H_n - 2 n H_{n-1}.
double hermite_poly(int n, double x);

// Returns H_0(x) ... H_n(x).
std::vector<double> hermite_poly_array(int n, double x);

// Harmonic-oscillator position eigenfunction psi_n(x) for the dimensionless
// quadrature x = (a + a^dag)/sqrt(2), evaluated with the normalized recurrence
// psi_{n+1} = sqrt(2/(n+1)) x psi_n - sqrt(n/(n+1)) psi_{n-1};
// psi_0 = pi^{-1/4} exp(-x^2/2).  Never forms 2^n n!.
double fock_wavefunction(int n, double x);

// Returns psi_0(x) ... psi_n(x).
std::vector<double> fock_wavefunction_array(int n, double x);

// Position wavefunction of the coherent state |xi> = D(xi)|0>:
// <x|xi> = pi^{-1/4} exp(-(x - sqrt(2) Re xi)^2 / 2
//                         + i sqrt(2) x Im xi - i Re xi Im xi).
cplx coherent_wavefunction(cplx xi, double x);

// Overlap <chi|xi> = exp(-|xi|^2/2 - |chi|^2/2 + conj(chi) xi).
cplx coherent_overlap(cplx chi, cplx xi);

// log(n choose k); requires 0 <= k <= n.
double log_binomial(int n, int k);

// sqrt(n choose k) evaluated through log_binomial for stability.
double sqrt_binomial(int n, int k);

}  // namespace optodistill
