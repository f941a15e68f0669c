#pragma once

#include <functional>
#include <vector>

#include "optodistill/types.hpp"

namespace optodistill {

// Globally adaptive Gauss-Kronrod 7/15 quadrature on [a, b].  Subdivides the
// interval with the largest error estimate until
//   sum(err) <= max(abs_tol, rel_tol * |integral|)
// or the interval budget is exhausted (throws QuadratureNotConverged).
double adaptive_quadrature(const std::function<double(double)>& f, double a, double b,
                           double rel_tol = 1e-10, double abs_tol = 1e-14,
                           int max_intervals = 4000);

cplx adaptive_quadrature_complex(const std::function<cplx(double)>& f, double a, double b,
                                 double rel_tol = 1e-10, double abs_tol = 1e-14,
                                 int max_intervals = 4000);

// Nodes/weights of N-point Gauss-Legendre quadrature on [a, b], computed by
// Newton iteration on the Legendre recurrence.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};
GaussLegendre gauss_legendre(int n, double a, double b);

}  // namespace optodistill
