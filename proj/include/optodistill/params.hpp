#pragma once

#include <cmath>

#include "optodistill/types.hpp"

namespace optodistill {

// All dimensionless knobs of the protocol plus the numerical cutoff.
// Defaults are the headline operating point of the study.
struct ProtocolParams {
    double lambda = 0.3;            // two-mode squeezing weight, in [0, 1)
    double g = 0.2;                 // scaled coupling, >= 0
    double kappa = 0.01;            // scaled mechanical damping, >= 0
    double theta = 2.0 * std::acos(0.1);  // injection angle; loss amplitude r = cos(theta/2)
    double t = M_PI;                // scaled interaction time, >= 0
    double delta_q = 0.11;          // position-measurement resolution, > 0
    cplx alpha = 0.0;               // initial mechanical coherent amplitude
    int n_max = 12;                 // photon-number cutoff per mode, >= 1
    double truncation_tol = 1e-8;   // bound on the lambda^(2(n_max+1)) weight tail

    double reflectivity() const { return std::cos(0.5 * theta); }
    void set_reflectivity(double r);  // theta = 2*acos(r); requires r in [0, 1]

    // Throws ConfigError on domain violations, TruncationError when the
    // neglected photon-number tail exceeds truncation_tol.
    void validate() const;
};

}  // namespace optodistill
