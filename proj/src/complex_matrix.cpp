#include "optodistill/complex_matrix.hpp"

#include <cmath>

#include "optodistill/errors.hpp"

namespace optodistill {

cplx ComplexMatrix::trace() const {
    cplx t = 0.0;
    for (int i = 0; i < dim_; ++i) t += at(i, i);
    return t;
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const cplx& v : data_) m = std::max(m, std::abs(v));
    return m;
}

double ComplexMatrix::hermiticity_defect() const {
    double d = 0.0;
    for (int r = 0; r < dim_; ++r)
        for (int c = r; c < dim_; ++c)
            d = std::max(d, std::abs(at(r, c) - std::conj(at(c, r))));
    return d;
}

bool ComplexMatrix::is_finite() const {
    for (const cplx& v : data_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

void ComplexMatrix::scale(cplx s) {
    for (cplx& v : data_) v *= s;
}

void TwoModeDensityMatrix::normalize() {
    const cplx t = mat.trace();
    if (!(t.real() > 0.0) || std::abs(t.imag()) > 1e-10 * std::abs(t))
        throw ComputeError("TwoModeDensityMatrix::normalize: trace not real positive");
    mat.scale(1.0 / t.real());
    if (!mat.is_finite())
        throw ComputeError("TwoModeDensityMatrix::normalize: non-finite entries");
}

TwoModeDensityMatrix partial_transpose(const TwoModeDensityMatrix& rho) {
    const int d = rho.mode_dim();
    TwoModeDensityMatrix out(rho.n_max);
    for (int n1 = 0; n1 < d; ++n1)
        for (int n2 = 0; n2 < d; ++n2)
            for (int m1 = 0; m1 < d; ++m1)
                for (int m2 = 0; m2 < d; ++m2)
                    out.at(n1, n2, m1, m2) = rho.at(m1, n2, n1, m2);
    return out;
}

}  // namespace optodistill
