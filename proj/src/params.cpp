#include "optodistill/params.hpp"

#include <cmath>
#include <string>

#include "optodistill/errors.hpp"

namespace optodistill {

void ProtocolParams::set_reflectivity(double r) {
    if (!(r >= 0.0 && r <= 1.0))
        throw ConfigError("reflectivity must lie in [0, 1], got " + std::to_string(r));
    theta = 2.0 * std::acos(r);
}

void ProtocolParams::validate() const {
    if (!(lambda >= 0.0 && lambda < 1.0))
        throw ConfigError("lambda must lie in [0, 1), got " + std::to_string(lambda));
    if (!(g >= 0.0)) throw ConfigError("g must be >= 0, got " + std::to_string(g));
    if (!(kappa >= 0.0)) throw ConfigError("kappa must be >= 0, got " + std::to_string(kappa));
    if (!(theta >= 0.0 && theta <= M_PI))
        throw ConfigError("theta must lie in [0, pi], got " + std::to_string(theta));
    if (!(t >= 0.0)) throw ConfigError("t must be >= 0, got " + std::to_string(t));
    if (!(delta_q > 0.0))
        throw ConfigError("delta_q must be > 0, got " + std::to_string(delta_q));
    if (n_max < 1) throw ConfigError("n_max must be >= 1, got " + std::to_string(n_max));
    if (!(truncation_tol > 0.0))
        throw ConfigError("truncation_tol must be > 0, got " + std::to_string(truncation_tol));
    if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()))
        throw ConfigError("alpha must be finite");
    // Weight of the discarded photon-number branches: lambda^(2(n_max+1)).
    const double tail = std::pow(lambda, 2.0 * (n_max + 1));
    if (tail >= truncation_tol)
        throw TruncationError("photon-number tail " + std::to_string(tail) +
                              " exceeds truncation_tol " + std::to_string(truncation_tol) +
                              "; raise n_max or truncation_tol");
}

}  // namespace optodistill
