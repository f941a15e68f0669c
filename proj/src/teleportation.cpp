#include "optodistill/teleportation.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <utility>

#include "optodistill/eigen_hermitian.hpp"
#include "optodistill/entanglement.hpp"
#include "optodistill/errors.hpp"
#include "optodistill/measurement.hpp"
#include "optodistill/quadrature.hpp"
#include "optodistill/special_functions.hpp"

namespace optodistill {

namespace {

// Smallest M with |beta|^{2M}/M! < tol, i.e. the index where the coherent
// series tail drops below tol in probability weight.
int coherent_series_cutoff(cplx beta, double tol) {
    const double b2 = std::norm(beta);
    double term = 1.0;
    for (int m = 0; m <= 64; ++m) {
        if (term < tol) return m;
        term *= b2 / (m + 1.0);
    }
    throw SeriesNotConverged("coherent series needs more than 64 terms for |beta| = " +
                             std::to_string(std::abs(beta)));
}

// i^e for any integer e.
cplx ipow(int e) {
    switch (((e % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

// (-i)^e for any integer e.
cplx neg_ipow(int e) { return ipow(-e); }

// Coefficients of |xi> in the Fock basis, indices 0..dim-1.
void coherent_vector(cplx xi, int dim, std::vector<cplx>& out) {
    out.assign(static_cast<size_t>(dim), cplx(0.0, 0.0));
    cplx c = std::exp(cplx(-0.5 * std::norm(xi), 0.0));
    for (int n = 0; n < dim; ++n) {
        out[static_cast<size_t>(n)] = c;
        c *= xi / std::sqrt(n + 1.0);
    }
}

// Pascal triangle rows 0..n_max as doubles (exact up to rounding).
std::vector<std::vector<double>> binomial_rows(int n_max) {
    std::vector<std::vector<double>> rows(static_cast<size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) {
        rows[static_cast<size_t>(n)].assign(static_cast<size_t>(n) + 1, 1.0);
        for (int k = 1; k < n; ++k)
            rows[static_cast<size_t>(n)][static_cast<size_t>(k)] =
                rows[static_cast<size_t>(n) - 1][static_cast<size_t>(k) - 1] +
                rows[static_cast<size_t>(n) - 1][static_cast<size_t>(k)];
    }
    return rows;
}

struct ResourceEntry {
    int n1, n2, m1, m2;
    cplx w;
};

// Sparse view of the resource matrix: entries above cut * max|entry|.
std::vector<ResourceEntry> nonzero_entries(const TwoModeDensityMatrix& rho, double cut) {
    const double threshold = cut * std::max(rho.mat.max_abs(), 1e-300);
    const int d = rho.mode_dim();
    std::vector<ResourceEntry> out;
    for (int n1 = 0; n1 < d; ++n1)
        for (int n2 = 0; n2 < d; ++n2)
            for (int m1 = 0; m1 < d; ++m1)
                for (int m2 = 0; m2 < d; ++m2) {
                    const cplx w = rho.at(n1, n2, m1, m2);
                    if (std::abs(w) > threshold) out.push_back({n1, n2, m1, m2, w});
                }
    return out;
}

}  // namespace

BellAmplitudes::BellAmplitudes(int n_support, cplx beta, double series_tol)
    : n_support_(n_support), beta_(beta) {
    if (n_support < 0) throw IndexError("BellAmplitudes: negative support");
    if (!(series_tol > 0.0)) throw ConfigError("BellAmplitudes: series_tol must be positive");
    n_beta_ = coherent_series_cutoff(beta, series_tol);

    coef_.resize(static_cast<size_t>(n_beta_) + 1);
    cplx c = std::exp(cplx(-0.5 * std::norm(beta), 0.0));
    for (int k = 0; k <= n_beta_; ++k) {
        coef_[static_cast<size_t>(k)] = c;
        c *= beta / std::sqrt(k + 1.0);
    }

    t_.resize(static_cast<size_t>(n_support_) + 1);
    for (int n = 0; n <= n_support_; ++n) {
        auto& tn = t_[static_cast<size_t>(n)];
        tn.resize(static_cast<size_t>(n_beta_) + 1);
        tn[0].assign(static_cast<size_t>(n) + 1, 0.0);
        const double scale = std::pow(0.5, 0.5 * n);
        for (int s = 0; s <= n; ++s)
            tn[0][static_cast<size_t>(s)] = ((s & 1) ? -1.0 : 1.0) * sqrt_binomial(n, s) * scale;
        for (int np = 1; np <= n_beta_; ++np) {
            const auto& prev = tn[static_cast<size_t>(np) - 1];
            auto& cur = tn[static_cast<size_t>(np)];
            cur.assign(static_cast<size_t>(n + np) + 1, 0.0);
            for (int s = 0; s <= n + np; ++s) {
                double v = 0.0;
                if (s <= n + np - 1) v += std::sqrt((n + np - s) / double(np)) * prev[static_cast<size_t>(s)];
                if (s >= 1) v += std::sqrt(s / double(np)) * prev[static_cast<size_t>(s) - 1];
                cur[static_cast<size_t>(s)] = v * M_SQRT1_2;
            }
        }
    }
    qcache_.assign(static_cast<size_t>(n_support_) + 1, {});
}

double BellAmplitudes::t_coefficient(int n_resource, int n_input, int s) const {
    if (n_resource < 0 || n_resource > n_support_ || n_input < 0 || n_input > n_beta_ ||
        s < 0 || s > n_resource + n_input)
        throw IndexError("t_coefficient: index out of range");
    return t_[static_cast<size_t>(n_resource)][static_cast<size_t>(n_input)]
             [static_cast<size_t>(s)];
}

void BellAmplitudes::set_x(double x_bar) {
    if (x_bar == x_bar_) return;
    x_bar_ = x_bar;
    const std::vector<double> psi_x = fock_wavefunction_array(n_support_ + n_beta_, x_bar);
    for (int n = 0; n <= n_support_; ++n) {
        auto& qn = qcache_[static_cast<size_t>(n)];
        qn.assign(static_cast<size_t>(n + n_beta_) + 1, cplx(0.0, 0.0));
        for (int np = 0; np <= n_beta_; ++np) {
            const auto& t_row = t_[static_cast<size_t>(n)][static_cast<size_t>(np)];
            const cplx cf = coef_[static_cast<size_t>(np)];
            for (int s = 0; s <= n + np; ++s)
                qn[static_cast<size_t>(s)] +=
                    cf * t_row[static_cast<size_t>(s)] * psi_x[static_cast<size_t>(n + np - s)];
        }
    }
}

void BellAmplitudes::amplitudes(double p_bar, std::vector<cplx>& out) const {
    if (std::isnan(x_bar_)) throw ComputeError("BellAmplitudes: amplitudes() before set_x()");
    const std::vector<double> psi_p = fock_wavefunction_array(n_support_ + n_beta_, p_bar);
    out.assign(static_cast<size_t>(n_support_) + 1, cplx(0.0, 0.0));
    for (int n = 0; n <= n_support_; ++n) {
        const auto& qn = qcache_[static_cast<size_t>(n)];
        cplx acc(0.0, 0.0);
        for (int s = 0; s <= n + n_beta_; ++s)
            acc += neg_ipow(s) * psi_p[static_cast<size_t>(s)] * qn[static_cast<size_t>(s)];
        out[static_cast<size_t>(n)] = (n & 1) ? -acc : acc;
    }
}

ComplexMatrix bell_state(const TwoModeDensityMatrix& resource, BellAmplitudes& bell,
                         double x_bar, double p_bar) {
    if (bell.n_support() < resource.n_max)
        throw IndexError("bell_state: amplitude support below resource n_max");
    bell.set_x(x_bar);
    std::vector<cplx> amp;
    bell.amplitudes(p_bar, amp);
    const int d = resource.mode_dim();
    ComplexMatrix out(d);
    for (int n2 = 0; n2 < d; ++n2)
        for (int m2 = 0; m2 < d; ++m2) {
            cplx acc(0.0, 0.0);
            for (int n1 = 0; n1 < d; ++n1)
                for (int m1 = 0; m1 < d; ++m1)
                    acc += resource.at(n1, n2, m1, m2) * amp[static_cast<size_t>(n1)] *
                           std::conj(amp[static_cast<size_t>(m1)]);
            out.at(n2, m2) = acc;
        }
    return out;
}

BsOracle::BsOracle(int n1_support, cplx beta, double series_tol)
    : n1_support_(n1_support) {
    if (n1_support < 0) throw IndexError("BsOracle: negative support");
    n_beta_ = coherent_series_cutoff(beta, series_tol);
    dim_ = n_beta_ + n1_support_ + 1;

    beta_coef_.resize(static_cast<size_t>(n_beta_) + 1);
    cplx c = std::exp(cplx(-0.5 * std::norm(beta), 0.0));
    for (int k = 0; k <= n_beta_; ++k) {
        beta_coef_[static_cast<size_t>(k)] = c;
        c *= beta / std::sqrt(k + 1.0);
    }

    // H = i (a^dag b - a b^dag) on the two-slot Fock grid; U = e^{i (pi/4) H}.
    const int nn = dim_ * dim_;
    auto idx = [&](int i, int j) { return i * dim_ + j; };
    ComplexMatrix h(nn);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) {
            if (i + 1 < dim_ && j >= 1)
                h.at(idx(i + 1, j - 1), idx(i, j)) = cplx(0.0, std::sqrt((i + 1.0) * j));
            if (i >= 1 && j + 1 < dim_)
                h.at(idx(i - 1, j + 1), idx(i, j)) = cplx(0.0, -std::sqrt(i * (j + 1.0)));
        }
    const EigenDecomposition eig = hermitian_eigensystem(h);
    u_ = ComplexMatrix(nn);
    std::vector<cplx> phase(static_cast<size_t>(nn));
    for (int t = 0; t < nn; ++t)
        phase[static_cast<size_t>(t)] =
            std::polar(1.0, M_PI / 4.0 * eig.values[static_cast<size_t>(t)]);
    for (int r = 0; r < nn; ++r)
        for (int cidx = 0; cidx < nn; ++cidx) {
            cplx acc(0.0, 0.0);
            for (int t = 0; t < nn; ++t)
                acc += eig.vectors.at(r, t) * phase[static_cast<size_t>(t)] *
                       std::conj(eig.vectors.at(cidx, t));
            u_.at(r, cidx) = acc;
        }
}

ComplexMatrix BsOracle::project(const TwoModeDensityMatrix& resource, double x_bar,
                                double p_bar) const {
    if (resource.n_max > n1_support_)
        throw IndexError("BsOracle: resource support exceeds oracle capacity");
    const int nn = dim_ * dim_;
    auto idx = [&](int i, int j) { return i * dim_ + j; };

    // Row vector <x_bar| ⊗ <p_bar| in the output Fock grid, then w = r U.
    const std::vector<double> psi_x = fock_wavefunction_array(dim_ - 1, x_bar);
    const std::vector<double> psi_p = fock_wavefunction_array(dim_ - 1, p_bar);
    std::vector<cplx> row(static_cast<size_t>(nn));
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
            row[static_cast<size_t>(idx(i, j))] =
                psi_x[static_cast<size_t>(i)] * neg_ipow(j) * psi_p[static_cast<size_t>(j)];
    std::vector<cplx> w(static_cast<size_t>(nn), cplx(0.0, 0.0));
    for (int r = 0; r < nn; ++r) {
        const cplx rv = row[static_cast<size_t>(r)];
        if (rv == cplx(0.0, 0.0)) continue;
        for (int cidx = 0; cidx < nn; ++cidx) w[static_cast<size_t>(cidx)] += rv * u_.at(r, cidx);
    }

    // Contract the input coherent slot: c(n1) = sum_k beta_k w[(k, n1)].
    std::vector<cplx> amp(static_cast<size_t>(n1_support_) + 1, cplx(0.0, 0.0));
    for (int n1 = 0; n1 <= n1_support_; ++n1) {
        cplx acc(0.0, 0.0);
        for (int k = 0; k <= n_beta_; ++k)
            acc += beta_coef_[static_cast<size_t>(k)] * w[static_cast<size_t>(idx(k, n1))];
        amp[static_cast<size_t>(n1)] = acc;
    }

    const int d = resource.mode_dim();
    ComplexMatrix out(d);
    for (int n2 = 0; n2 < d; ++n2)
        for (int m2 = 0; m2 < d; ++m2) {
            cplx acc(0.0, 0.0);
            for (int n1 = 0; n1 < d; ++n1)
                for (int m1 = 0; m1 < d; ++m1)
                    acc += resource.at(n1, n2, m1, m2) * amp[static_cast<size_t>(n1)] *
                           std::conj(amp[static_cast<size_t>(m1)]);
            out.at(n2, m2) = acc;
        }
    return out;
}

ComplexMatrix bs_projection_oracle(const TwoModeDensityMatrix& resource, cplx beta,
                                   double x_bar, double p_bar) {
    const BsOracle oracle(resource.n_max, beta);
    return oracle.project(resource, x_bar, p_bar);
}

BellCoefficient bell_coefficient_eq6(int n_minus_k, int j, int n_prime, int j_prime,
                                     double x_bar, double p_bar) {
    if (n_minus_k < 0 || n_prime < 0 || j < 0 || j > n_minus_k || j_prime < 0 ||
        j_prime > n_prime)
        throw IndexError("bell_coefficient_eq6: index out of range");
    const int deg = n_minus_k + n_prime;
    const std::vector<double> hx = hermite_poly_array(deg, x_bar);
    const std::vector<double> hp = hermite_poly_array(deg, p_bar);
    BellCoefficient out;
    out.n_minus_k = n_minus_k;
    out.j = j;
    out.n_prime = n_prime;
    out.j_prime = j_prime;
    out.value = std::exp(log_binomial(n_minus_k, j) + log_binomial(n_prime, j_prime)) *
                ipow(2 * j_prime - n_prime) * hx[static_cast<size_t>(j + j_prime)] *
                hp[static_cast<size_t>(n_minus_k + n_prime - j - j_prime)];
    return out;
}

ComplexMatrix bell_state_eq6(const ProtocolParams& p, double q, cplx beta, double x_bar,
                             double p_bar) {
    p.validate();
    // Precondition: the input series tail must already be negligible at the
    // Fock cutoff, |beta|^{2 n_max} / n_max! < 1e-12.
    const double tail =
        std::exp(2.0 * p.n_max * std::log(std::max(std::abs(beta), 1e-300)) -
                 std::lgamma(p.n_max + 1.0));
    if (std::abs(beta) > 0.0 && tail >= 1e-12)
        throw SeriesNotConverged("bell_state_eq6: |beta| too large for the cutoff n_max = " +
                                 std::to_string(p.n_max));
    const JointStateCoefficients jc = joint_coefficients(p);
    const int d = p.n_max + 1;
    const int n_beta = coherent_series_cutoff(beta, 1e-12);
    const int deg = p.n_max + n_beta;

    const std::vector<double> hx = hermite_poly_array(deg, x_bar);
    const std::vector<double> hp = hermite_poly_array(deg, p_bar);
    const std::vector<std::vector<double>> binom = binomial_rows(std::max(p.n_max, n_beta));

    // Input-series weights beta^{n'} / (2^{n'} n'!).
    std::vector<cplx> series(static_cast<size_t>(n_beta) + 1);
    cplx sw(1.0, 0.0);
    for (int np = 0; np <= n_beta; ++np) {
        series[static_cast<size_t>(np)] = sw;
        sw *= beta / (2.0 * (np + 1.0));
    }

    // S(N) = sum_{n'} series(n') sum_{j, j'} C(N,j) C(n',j') i^{2j'-n'}
    //        H_{j+j'}(x_bar) H_{N+n'-j-j'}(p_bar); the i^{2j'-n'} phase kept as is.
    std::vector<cplx> s_leg(static_cast<size_t>(p.n_max) + 1, cplx(0.0, 0.0));
    for (int n_mk = 0; n_mk <= p.n_max; ++n_mk) {
        cplx acc(0.0, 0.0);
        for (int np = 0; np <= n_beta; ++np) {
            cplx inner(0.0, 0.0);
            for (int j = 0; j <= n_mk; ++j)
                for (int jp = 0; jp <= np; ++jp)
                    inner += binom[static_cast<size_t>(n_mk)][static_cast<size_t>(j)] *
                             binom[static_cast<size_t>(np)][static_cast<size_t>(jp)] *
                             ipow(2 * jp - np) * hx[static_cast<size_t>(j + jp)] *
                             hp[static_cast<size_t>(n_mk + np - j - jp)];
            acc += series[static_cast<size_t>(np)] * inner;
        }
        s_leg[static_cast<size_t>(n_mk)] = acc;
    }

    const double pdf = outcome_pdf(jc, q);
    if (pdf < 1e-300) throw DegenerateOutcome("bell_state_eq6: outcome density underflow");
    const double pref = jc.global_weight *
                        std::exp(-(x_bar * x_bar + p_bar * p_bar) - std::norm(beta)) /
                        (M_PI * pdf * std::sqrt(2.0 * M_PI * p.delta_q * p.delta_q));

    ComplexMatrix out(d);
    for (int n = 0; n < d; ++n)
        for (int m = 0; m < d; ++m) {
            const cplx head = jc.c(n, m) * std::exp(-jc.d(n, m)) *
                              povm_overlap_labels(p.delta_q, q, jc.phi[static_cast<size_t>(n)],
                                                  jc.phi[static_cast<size_t>(m)]) /
                              std::pow(2.0, n + m);
            cplx acc(0.0, 0.0);
            for (int k = 0; k <= std::min(n, m); ++k) {
                const double fact =
                    std::exp(-0.5 * (std::lgamma(n - k + 1.0) + std::lgamma(m - k + 1.0)));
                acc += jc.g_weight(n, m, k) * std::pow(4.0, k) * fact *
                       s_leg[static_cast<size_t>(n - k)] *
                       std::conj(s_leg[static_cast<size_t>(m - k)]);
            }
            out.at(n, m) = pref * head * acc;
        }
    return out;
}

double teleport_fidelity(const ComplexMatrix& outcome_state, cplx beta, double x_bar,
                         double p_bar) {
    const cplx target = beta - cplx(x_bar, p_bar);
    std::vector<cplx> v;
    coherent_vector(target, outcome_state.dim(), v);
    cplx f(0.0, 0.0);
    for (int n = 0; n < outcome_state.dim(); ++n)
        for (int m = 0; m < outcome_state.dim(); ++m)
            f += std::conj(v[static_cast<size_t>(n)]) * outcome_state.at(n, m) *
                 v[static_cast<size_t>(m)];
    return f.real();
}

TeleportationOutcome teleport_outcome(const TwoModeDensityMatrix& resource, cplx beta,
                                      double x_bar, double p_bar) {
    BellAmplitudes bell(resource.n_max, beta);
    ComplexMatrix m = bell_state(resource, bell, x_bar, p_bar);
    const cplx tr = m.trace();
    if (!(tr.real() > 1e-300))
        throw DegenerateOutcome("teleport_outcome: joint outcome density underflow");
    TeleportationOutcome out;
    out.x_bar = x_bar;
    out.p_bar = p_bar;
    out.beta = beta;
    out.joint_pdf = tr.real();
    m.scale(1.0 / tr.real());
    out.fidelity = teleport_fidelity(m, beta, x_bar, p_bar);
    out.output_state = std::move(m);
    return out;
}

double average_fidelity_resource(const TwoModeDensityMatrix& resource, cplx beta,
                                 double rel_tol, double domain_half_width) {
    if (!(rel_tol > 0.0) || !(domain_half_width > 0.0))
        throw ConfigError("average_fidelity: tolerances must be positive");
    const std::vector<ResourceEntry> entries = nonzero_entries(resource, 1e-18);
    BellAmplitudes bell(resource.n_max, beta);
    const int dim = resource.mode_dim();

    // Auto-size the domain so its analytic outcome mass exceeds 1 - 1e-6:
    // each measured quadrature has variance <= (1/2 + <x_1^2>)/2 with the
    // operator bound x^2 <= 2 n + 1 on resource mode 1; 5.5 of those sigmas
    // leave well under 1e-6 outside on all four sides.
    double n1_mean = 0.0;
    for (int n1 = 0; n1 <= resource.n_max; ++n1)
        for (int n2 = 0; n2 <= resource.n_max; ++n2)
            n1_mean += n1 * resource.at(n1, n2, n1, n2).real();
    const double sigma_bound = std::sqrt((0.5 + 2.0 * std::max(n1_mean, 0.0) + 1.0) / 2.0);
    double half = std::max(domain_half_width, 5.5 * sigma_bound);
    for (int attempt = 0; attempt < 2; ++attempt) {
        const double xlo = beta.real() - half, xhi = beta.real() + half;
        const double plo = beta.imag() - half, phi = beta.imag() + half;
        std::vector<cplx> amp, v;
        // Packs <beta-gamma|M|beta-gamma> into Re and tr M into Im so a single
        // nested quadrature returns the fidelity numerator and outcome mass.
        auto point = [&](double xb, double pb) -> cplx {
            bell.amplitudes(pb, amp);
            coherent_vector(beta - cplx(xb, pb), dim, v);
            cplx sandwich(0.0, 0.0), tr(0.0, 0.0);
            for (const auto& e : entries) {
                const cplx t = e.w * amp[static_cast<size_t>(e.n1)] *
                               std::conj(amp[static_cast<size_t>(e.m1)]);
                sandwich += t * std::conj(v[static_cast<size_t>(e.n2)]) *
                            v[static_cast<size_t>(e.m2)];
                if (e.n2 == e.m2) tr += t;
            }
            return {sandwich.real(), tr.real()};
        };
        auto outer = [&](double xb) -> cplx {
            bell.set_x(xb);
            return adaptive_quadrature_complex([&](double pb) { return point(xb, pb); }, plo,
                                               phi, rel_tol, 1e-10);
        };
        const cplx total = adaptive_quadrature_complex(outer, xlo, xhi, rel_tol, 1e-10);
        if (total.imag() >= 1.0 - 1e-4) return total.real();
        half *= 1.5;  // domain too small for the outcome mass: widen once
    }
    throw QuadratureNotConverged("average_fidelity: outcome mass stayed below 1 - 1e-4");
}

double average_fidelity(const ProtocolParams& p, double q, cplx beta) {
    const MeasurementRecord rec = conditional_state(p, q);
    return average_fidelity_resource(rec.conditional_state, beta);
}

double average_fidelity_oracle(const TwoModeDensityMatrix& resource, cplx beta,
                               int gl_points, double domain_half_width) {
    const BsOracle oracle(resource.n_max, beta);
    const GaussLegendre gx =
        gauss_legendre(gl_points, beta.real() - domain_half_width, beta.real() + domain_half_width);
    const GaussLegendre gp =
        gauss_legendre(gl_points, beta.imag() - domain_half_width, beta.imag() + domain_half_width);
    double acc = 0.0;
    for (size_t i = 0; i < gx.nodes.size(); ++i)
        for (size_t j = 0; j < gp.nodes.size(); ++j) {
            const ComplexMatrix m = oracle.project(resource, gx.nodes[i], gp.nodes[j]);
            acc += gx.weights[i] * gp.weights[j] *
                   teleport_fidelity(m, beta, gx.nodes[i], gp.nodes[j]);
        }
    return acc;
}

double baseline_average_fidelity(const ProtocolParams& p, cplx beta, BaselineResource which) {
    p.validate();
    if (which == BaselineResource::pristine_tmsv)
        return average_fidelity_resource(tmsv_state(p.lambda, p.n_max), beta);
    const JointStateCoefficients jc = joint_coefficients(p);
    TwoModeDensityMatrix rho = traced_joint_state(jc);
    rho.normalize();
    return average_fidelity_resource(rho, beta);
}

std::vector<FidelityMapRow> fidelity_ratio_map(const ProtocolParams& p, double q,
                                               const std::vector<double>& beta_magnitudes,
                                               const std::vector<double>& beta_phases,
                                               double rel_tol) {
    if (beta_magnitudes.empty() || beta_phases.empty())
        throw ConfigError("fidelity_ratio_map: empty grid");
    p.validate();
    const MeasurementRecord rec = conditional_state(p, q);
    const TwoModeDensityMatrix base = tmsv_state(p.lambda, p.n_max);
    std::vector<FidelityMapRow> rows;
    rows.reserve(beta_magnitudes.size() * beta_phases.size());
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (double mag : beta_magnitudes)
        for (double phase : beta_phases) {
            FidelityMapRow row;
            row.beta_mag = mag;
            row.beta_phase = phase;
            try {
                if (mag < 0.0) throw ConfigError("fidelity_ratio_map: negative |beta|");
                const cplx beta = std::polar(mag, phase);
                row.f_d = average_fidelity_resource(rec.conditional_state, beta, rel_tol);
                row.f_0 = average_fidelity_resource(base, beta, rel_tol);
                if (!(row.f_0 > 0.0))
                    throw ZeroBaseline("fidelity_ratio_map: baseline fidelity is zero");
                row.ratio = row.f_d / row.f_0;
            } catch (...) {
                row.status = current_exception_status();
                row.f_d = row.f_0 = row.ratio = nan;
            }
            rows.push_back(row);
        }
    return rows;
}

Eq6Diagnosis diagnose_eq6(const ProtocolParams& p, double q, cplx beta, int grid_per_axis,
                          double half_range) {
    if (grid_per_axis < 2 || !(half_range > 0.0))
        throw ConfigError("diagnose_eq6: need at least a 2x2 grid and positive range");
    p.validate();
    const MeasurementRecord rec = conditional_state(p, q);
    const TwoModeDensityMatrix& resource = rec.conditional_state;
    BellAmplitudes bell(resource.n_max, beta);
    const BsOracle oracle(resource.n_max, beta);
    const int d = resource.mode_dim();

    // Both candidates and the oracle are normalized to unit trace before
    // comparing, so overall scale conventions drop out.
    auto normalized = [&](ComplexMatrix m) {
        const double tr = m.trace().real();
        if (std::abs(tr) < 1e-120) throw DegenerateOutcome("diagnose_eq6: trace underflow");
        m.scale(1.0 / tr);
        return m;
    };

    Eq6Diagnosis diag;
    for (int ix = 0; ix < grid_per_axis; ++ix)
        for (int ip = 0; ip < grid_per_axis; ++ip) {
            const double xb = -half_range + 2.0 * half_range * ix / (grid_per_axis - 1);
            const double pb = -half_range + 2.0 * half_range * ip / (grid_per_axis - 1);
            const ComplexMatrix ref = normalized(oracle.project(resource, xb, pb));
            const ComplexMatrix verb = normalized(bell_state_eq6(p, q, beta, xb, pb));
            const ComplexMatrix prod = normalized(bell_state(resource, bell, xb, pb));
            const double scale = std::max(ref.max_abs(), 1e-300);
            double dev_v = 0.0, dev_p = 0.0;
            int worst_n = -1, worst_m = -1;
            for (int n = 0; n < d; ++n)
                for (int m = 0; m < d; ++m) {
                    const double ev = std::abs(verb.at(n, m) - ref.at(n, m)) / scale;
                    const double ep = std::abs(prod.at(n, m) - ref.at(n, m)) / scale;
                    if (ev > dev_v) {
                        dev_v = ev;
                        worst_n = n;
                        worst_m = m;
                    }
                    dev_p = std::max(dev_p, ep);
                }
            diag.points.push_back({xb, pb, dev_v, dev_p});
            if (dev_v > diag.max_dev_verbatim) {
                diag.max_dev_verbatim = dev_v;
                diag.first_diff_n = worst_n;
                diag.first_diff_m = worst_m;
            }
            diag.max_dev_production = std::max(diag.max_dev_production, dev_p);
        }
    diag.verbatim_agrees = diag.max_dev_verbatim <= 1e-6;
    return diag;
}

}  // namespace optodistill
