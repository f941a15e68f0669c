#include "optodistill/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "optodistill/errors.hpp"

namespace optodistill {

namespace {

// Gauss-Kronrod 7/15 abscissae and weights (positive half; symmetric).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename T>
struct Panel {
    double a, b;
    T value;
    double error;
};

// One Gauss-Kronrod 7/15 evaluation; error estimate |K15 - G7|.
template <typename T, typename F>
Panel<T> gk15(const F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    T fc = f(c);
    T kron = kWgk[7] * fc;
    T gauss = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        T fsum = f(c - dx) + f(c + dx);
        kron += kWgk[j] * fsum;
        if (j % 2 == 1) gauss += kWg[j / 2] * fsum;
    }
    kron *= h;
    gauss *= h;
    return Panel<T>{a, b, kron, std::abs(kron - gauss)};
}

template <typename T, typename F>
T adaptive_impl(const F& f, double a, double b, double rel_tol, double abs_tol,
                int max_intervals) {
    // Worst-error-first refinement; ties broken by insertion order so that the
    // subdivision sequence (and hence the result) is deterministic.
    std::multimap<double, Panel<T>, std::greater<double>> panels;
    Panel<T> first = gk15<T>(f, a, b);
    panels.insert({first.error, first});
    T total = first.value;
    double total_err = first.error;
    int n_panels = 1;
    while (true) {
        const double target = std::max(abs_tol, rel_tol * std::abs(total));
        if (total_err <= target) return total;
        if (n_panels >= max_intervals)
            throw QuadratureNotConverged("adaptive_quadrature: interval budget exhausted (err=" +
                                         std::to_string(total_err) + ")");
        auto worst_it = panels.begin();
        Panel<T> worst = worst_it->second;
        panels.erase(worst_it);
        const double mid = 0.5 * (worst.a + worst.b);
        Panel<T> left = gk15<T>(f, worst.a, mid);
        Panel<T> right = gk15<T>(f, mid, worst.b);
        total = total - worst.value + left.value + right.value;
        total_err = total_err - worst.error + left.error + right.error;
        panels.insert({left.error, left});
        panels.insert({right.error, right});
        ++n_panels;
    }
}

}  // namespace

double adaptive_quadrature(const std::function<double(double)>& f, double a, double b,
                           double rel_tol, double abs_tol, int max_intervals) {
    return adaptive_impl<double>(f, a, b, rel_tol, abs_tol, max_intervals);
}

cplx adaptive_quadrature_complex(const std::function<cplx(double)>& f, double a, double b,
                                 double rel_tol, double abs_tol, int max_intervals) {
    return adaptive_impl<cplx>(f, a, b, rel_tol, abs_tol, max_intervals);
}

GaussLegendre gauss_legendre(int n, double a, double b) {
    GaussLegendre gl;
    gl.nodes.resize(n);
    gl.weights.resize(n);
    const int m = (n + 1) / 2;
    const double xm = 0.5 * (b + a), xl = 0.5 * (b - a);
    for (int i = 0; i < m; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) < 1e-15) break;
        }
        gl.nodes[i] = xm - xl * z;
        gl.nodes[n - 1 - i] = xm + xl * z;
        gl.weights[i] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
        gl.weights[n - 1 - i] = gl.weights[i];
    }
    return gl;
}

}  // namespace optodistill
