#pragma once

#include <limits>
#include <vector>

#include "optodistill/complex_matrix.hpp"
#include "optodistill/dynamics.hpp"
#include "optodistill/params.hpp"

namespace optodistill {

// Measurement geometry shared by every path in this module: the input
// coherent state |beta> (slot a) and resource mode 1 (slot b) mix on a
// balanced beam splitter with
//   U^dag a U = (a - b)/sqrt2,   U^dag b U = (a + b)/sqrt2;
// the position quadrature x_bar is read on the difference port, the momentum
// quadrature p_bar on the sum port, with <p|n> = (-i)^n psi_n(p).  The
// displacement correction consistent with this geometry is
// gamma = x_bar + i p_bar (gain one in the measured port variables).

// Projection amplitudes A(N) = (<x_bar| ⊗ <p_bar|) U (|beta> ⊗ |N>) for
// N = 0..n_support, via the exact photon-redistribution coefficients
//   T_s(N, n') = [z^s] (1-z)^N (1+z)^{n'} * sqrt(s! (N+n'-s)! / (N! n'!)) / 2^{(N+n')/2}
// (a unitary matrix element, |T| <= 1), built with the stable recurrence
//   T_s(N, n') = ( sqrt((N+n'-s)/n') T_s(N, n'-1) + sqrt(s/n') T_{s-1}(N, n'-1) ) / sqrt2
// from T_s(N, 0) = (-1)^s sqrt(C(N, s)) 2^{-N/2}.  Rows satisfy
// sum_s T_s^2 = 1 exactly.  The coherent series stops at the smallest M with
// |beta|^{2M}/M! below series_tol (SeriesNotConverged past the cap of 64).
class BellAmplitudes {
  public:
    BellAmplitudes(int n_support, cplx beta, double series_tol = 1e-12);

    int n_support() const { return n_support_; }
    int series_cutoff() const { return n_beta_; }
    cplx beta() const { return beta_; }

    // Precomputes the x-dependent cache; amplitudes() then varies p_bar cheaply.
    void set_x(double x_bar);
    void amplitudes(double p_bar, std::vector<cplx>& out) const;

    // T_s(N, n'); exposed for the unitarity property tests.
    double t_coefficient(int n_resource, int n_input, int s) const;

  private:
    int n_support_;
    int n_beta_;
    cplx beta_;
    std::vector<cplx> coef_;  // e^{-|beta|^2/2} beta^{n'} / sqrt(n'!)
    std::vector<std::vector<std::vector<double>>> t_;  // [N][n'][s]
    std::vector<std::vector<cplx>> qcache_;            // [N][s], depends on x_bar
    double x_bar_ = std::numeric_limits<double>::quiet_NaN();
};

// Mode-2 operator left after the Bell projection on the given resource:
//   M[n2, m2] = sum_{n1, m1} resource[(n1,n2),(m1,m2)] A(n1) conj(A(m1)).
// Unnormalized; its trace is the joint outcome density p(x_bar, p_bar).
ComplexMatrix bell_state(const TwoModeDensityMatrix& resource, BellAmplitudes& bell,
                         double x_bar, double p_bar);

// Fully independent reference: the balanced beam splitter as a dense unitary
// e^{i (pi/4) H}, H = i(a^dag b - a b^dag), built by eigendecomposition on a
// Fock grid large enough that every photon-number-conserving block reachable
// from the inputs is complete.  Slot 0 holds the input coherent state, slot 1
// resource mode 1; slot 0 is projected on <x_bar|, slot 1 on <p_bar|.
class BsOracle {
  public:
    BsOracle(int n1_support, cplx beta, double series_tol = 1e-12);

    ComplexMatrix project(const TwoModeDensityMatrix& resource, double x_bar,
                          double p_bar) const;
    const ComplexMatrix& unitary() const { return u_; }
    int slot_dim() const { return dim_; }

  private:
    int n1_support_;
    int n_beta_;
    int dim_;
    std::vector<cplx> beta_coef_;
    ComplexMatrix u_;
};

// One-call convenience wrapper around BsOracle.
ComplexMatrix bs_projection_oracle(const TwoModeDensityMatrix& resource, cplx beta,
                                   double x_bar, double p_bar);

// Single coefficient of the eq6 expansion:
//   C(N, j) C(n', j') e^{i pi (2j'-n')/2} H_{j+j'}(x_bar) H_{N+n'-j-j'}(p_bar).
struct BellCoefficient {
    int n_minus_k = 0, j = 0, n_prime = 0, j_prime = 0;
    cplx value;
};
BellCoefficient bell_coefficient_eq6(int n_minus_k, int j, int n_prime, int j_prime,
                                     double x_bar, double p_bar);

// The eq6 form of the joint-measurement state, with its i^{2j'-n'} phase
// convention; kept for the diagnose-eq6 comparison against the oracle.
// Unnormalized mode-2 matrix.
ComplexMatrix bell_state_eq6(const ProtocolParams& p, double q, cplx beta, double x_bar,
                             double p_bar);

// f = <beta - gamma| rho |beta - gamma> with gamma = x_bar + i p_bar;
// rho must be normalized.  Exact sandwich (rho has finite photon support).
double teleport_fidelity(const ComplexMatrix& outcome_state, cplx beta, double x_bar,
                         double p_bar);

struct TeleportationOutcome {
    double x_bar = 0.0, p_bar = 0.0;
    cplx beta;
    double joint_pdf = 0.0;
    ComplexMatrix output_state;  // normalized
    double fidelity = 0.0;
};
TeleportationOutcome teleport_outcome(const TwoModeDensityMatrix& resource, cplx beta,
                                      double x_bar, double p_bar);

// <F>_beta = Int f(x,p) p(x,p) dx dp by nested adaptive quadrature (outer
// x_bar, inner p_bar) over [Re beta +- L] x [Im beta +- L], L auto-enlarged
// from the resource's photon content so the analytic outcome mass inside the
// box exceeds 1 - 1e-6.  The captured mass is integrated alongside as a
// safety net; if it falls below 1 - 1e-4 the domain is widened once by 1.5x,
// then QuadratureNotConverged.
double average_fidelity_resource(const TwoModeDensityMatrix& resource, cplx beta,
                                 double rel_tol = 1e-5, double domain_half_width = 6.0);

// Same, with the resource taken as the conditional state at outcome q.
double average_fidelity(const ProtocolParams& p, double q, cplx beta);

// Same integral on a fixed Gauss-Legendre tensor grid through the dense
// beam-splitter oracle; deterministic reference for the adaptive path.
double average_fidelity_oracle(const TwoModeDensityMatrix& resource, cplx beta,
                               int gl_points = 48, double domain_half_width = 6.0);

// Reference resource for the fidelity comparison: the untouched two-mode
// squeezed input by default, or the injected-but-unmeasured state.
enum class BaselineResource { pristine_tmsv, lossy_unmeasured };
double baseline_average_fidelity(const ProtocolParams& p, cplx beta,
                                 BaselineResource which = BaselineResource::pristine_tmsv);

struct FidelityMapRow {
    double beta_mag = 0.0;
    double beta_phase = 0.0;
    double f_d = 0.0;
    double f_0 = 0.0;
    double ratio = 0.0;
    int status = 0;  // same codes as SweepResultRow
};

// <F_distilled>, <F_baseline> and their ratio over a (|beta|, phase) grid,
// row-major with |beta| as the slow index; per-cell failures land in status.
std::vector<FidelityMapRow> fidelity_ratio_map(const ProtocolParams& p, double q,
                                               const std::vector<double>& beta_magnitudes,
                                               const std::vector<double>& beta_phases,
                                               double rel_tol = 1e-5);

struct Eq6ComparisonPoint {
    double x_bar = 0.0, p_bar = 0.0;
    double dev_verbatim = 0.0;    // max-entry deviation vs oracle, both trace-normalized
    double dev_production = 0.0;  // same for the production bell_state
};

struct Eq6Diagnosis {
    double max_dev_verbatim = 0.0;
    double max_dev_production = 0.0;
    int first_diff_n = -1, first_diff_m = -1;  // first entry off at the worst point
    bool verbatim_agrees = false;              // max_dev_verbatim <= 1e-6
    std::vector<Eq6ComparisonPoint> points;
};

// Compares the eq6 expansion and the production path against the dense
// oracle on a grid of (x_bar, p_bar) in [-half_range, half_range]^2.
Eq6Diagnosis diagnose_eq6(const ProtocolParams& p, double q, cplx beta,
                          int grid_per_axis = 5, double half_range = 2.0);

}  // namespace optodistill
