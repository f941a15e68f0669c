#include "optodistill/eigen_hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "optodistill/errors.hpp"

namespace optodistill {
namespace {

// Householder reduction of a Hermitian matrix to real symmetric tridiagonal
// form. a is overwritten; d receives the diagonal, e the subdiagonal
// (e[k] = T[k+1][k], e[n-1] unused). When q is non-null it accumulates the
// reduction unitary so that a_in = Q * T * Q^dagger.
void tridiagonalize(ComplexMatrix& a, std::vector<double>& d, std::vector<double>& e,
                    ComplexMatrix* q) {
    const int n = a.dim();
    d.assign(n, 0.0);
    e.assign(n, 0.0);
    if (q) {
        *q = ComplexMatrix(n);
        for (int i = 0; i < n; ++i) q->at(i, i) = 1.0;
    }
    // Columns whose squared norms would underflow are dropped outright; with
    // the caller pre-scaling the matrix to unit max this is far below eps.
    const double drop = std::sqrt(std::numeric_limits<double>::min());
    std::vector<cplx> v(n), p(n);
    for (int k = 0; k + 1 < n; ++k) {
        const int m = n - 1 - k;  // order of the reflector (rows k+1..n-1)
        cplx alpha = a.at(k + 1, k);
        double xnorm2 = 0.0;
        double colmax = std::max(std::abs(alpha.real()), std::abs(alpha.imag()));
        for (int i = k + 2; i < n; ++i) {
            xnorm2 += std::norm(a.at(i, k));
            colmax = std::max({colmax, std::abs(a.at(i, k).real()),
                               std::abs(a.at(i, k).imag())});
        }
        if (colmax < drop) {
            e[k] = 0.0;
            a.at(k + 1, k) = 0.0;
            for (int i = k + 2; i < n; ++i) a.at(i, k) = 0.0;
            continue;
        }
        if (xnorm2 == 0.0 && alpha.imag() == 0.0) {
            e[k] = alpha.real();
            continue;
        }
        double beta = std::sqrt(std::norm(alpha) + xnorm2);
        if (alpha.real() >= 0.0) beta = -beta;
        const cplx tau = (beta - alpha) / beta;
        const cplx inv = 1.0 / (alpha - beta);
        v[0] = 1.0;
        for (int i = 1; i < m; ++i) v[i] = a.at(k + 1 + i, k) * inv;
        e[k] = beta;
        a.at(k + 1, k) = beta;
        for (int i = k + 2; i < n; ++i) a.at(i, k) = 0.0;

        // two-sided update of the trailing block S = a[k+1.., k+1..]:
        // p = tau*S*v, w = p - (tau/2)(p^dag v) v, S <- S - v w^dag - w v^dag
        for (int r = 0; r < m; ++r) {
            cplx acc = 0.0;
            for (int c = 0; c < m; ++c) acc += a.at(k + 1 + r, k + 1 + c) * v[c];
            p[r] = tau * acc;
        }
        cplx pv = 0.0;
        for (int i = 0; i < m; ++i) pv += std::conj(p[i]) * v[i];
        const cplx corr = 0.5 * tau * pv;
        for (int i = 0; i < m; ++i) p[i] -= corr * v[i];
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < m; ++c)
                a.at(k + 1 + r, k + 1 + c) -=
                    v[r] * std::conj(p[c]) + p[r] * std::conj(v[c]);

        if (q) {
            // Q <- Q * H with H = I - tau v v^dag acting on columns k+1..n-1
            for (int r = 0; r < n; ++r) {
                cplx acc = 0.0;
                for (int c = 0; c < m; ++c) acc += q->at(r, k + 1 + c) * v[c];
                acc *= tau;
                for (int c = 0; c < m; ++c)
                    q->at(r, k + 1 + c) -= acc * std::conj(v[c]);
            }
        }
    }
    for (int i = 0; i < n; ++i) d[i] = a.at(i, i).real();
}

// Implicit-shift QL on a real symmetric tridiagonal matrix. Rotations are
// accumulated into the (complex) columns of q when it is non-null.
void ql_implicit(std::vector<double>& d, std::vector<double>& e, ComplexMatrix* q) {
    const int n = static_cast<int>(d.size());
    const double eps = std::numeric_limits<double>::epsilon();
    if (n > 0) e[n - 1] = 0.0;
    // Absolute deflation floor at matrix scale: keeps the split test alive
    // when a diagonal pair underflows to zero while the coupling is denormal.
    double anorm = 0.0;
    for (int i = 0; i < n; ++i) anorm = std::max(anorm, std::abs(d[i]) + std::abs(e[i]));
    const double tiny = std::max(eps * anorm, std::numeric_limits<double>::min());
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd + tiny) break;
            }
            if (m != l) {
                if (iter++ == 60)
                    throw ComputeError("hermitian_eigenvalues: QL iteration limit");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, pshift = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= pshift;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - pshift;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    pshift = s * r;
                    d[i + 1] = g + pshift;
                    g = c * r - b;
                    if (q) {
                        for (int row = 0; row < n; ++row) {
                            const cplx t = q->at(row, i + 1);
                            q->at(row, i + 1) = s * q->at(row, i) + c * t;
                            q->at(row, i) = c * q->at(row, i) - s * t;
                        }
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= pshift;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

void check_input(const ComplexMatrix& m) {
    if (!m.is_finite()) throw ComputeError("hermitian_eigenvalues: non-finite input");
    const double scale = std::max(m.max_abs(), 1e-300);
    if (m.hermiticity_defect() > 1e-12 * scale)
        throw NotHermitian("hermitian_eigenvalues: hermiticity defect too large");
}

ComplexMatrix symmetrized(const ComplexMatrix& m) {
    const int n = m.dim();
    ComplexMatrix a(n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            a.at(r, c) = 0.5 * (m.at(r, c) + std::conj(m.at(c, r)));
    return a;
}

}  // namespace

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
    check_input(m);
    ComplexMatrix a = symmetrized(m);
    // Clamp below by the smallest normal double so the reciprocal stays
    // finite even when every entry is denormal.
    const double scale = std::max(a.max_abs(), std::numeric_limits<double>::min());
    a.scale(1.0 / scale);
    std::vector<double> d, e;
    tridiagonalize(a, d, e, nullptr);
    ql_implicit(d, e, nullptr);
    std::sort(d.begin(), d.end());
    for (double& x : d) x *= scale;
    return d;
}

EigenDecomposition hermitian_eigensystem(const ComplexMatrix& m) {
    check_input(m);
    ComplexMatrix a = symmetrized(m);
    const double scale = std::max(a.max_abs(), std::numeric_limits<double>::min());
    a.scale(1.0 / scale);
    std::vector<double> d, e;
    ComplexMatrix q(m.dim());
    tridiagonalize(a, d, e, &q);
    ql_implicit(d, e, &q);
    for (double& x : d) x *= scale;
    const int n = m.dim();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) { return d[i] < d[j]; });
    EigenDecomposition out;
    out.values.resize(n);
    out.vectors = ComplexMatrix(n);
    for (int j = 0; j < n; ++j) {
        out.values[j] = d[order[j]];
        for (int r = 0; r < n; ++r) out.vectors.at(r, j) = q.at(r, order[j]);
    }
    return out;
}

}  // namespace optodistill
