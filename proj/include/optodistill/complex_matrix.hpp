#pragma once

#include <vector>

#include "optodistill/types.hpp"

namespace optodistill {

// Dense square complex matrix, row-major.
class ComplexMatrix {
  public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(int dim) : dim_(dim), data_(static_cast<size_t>(dim) * dim) {}

    int dim() const { return dim_; }
    cplx& at(int r, int c) { return data_[static_cast<size_t>(r) * dim_ + c]; }
    const cplx& at(int r, int c) const { return data_[static_cast<size_t>(r) * dim_ + c]; }
    cplx* data() { return data_.data(); }
    const cplx* data() const { return data_.data(); }

    cplx trace() const;
    double max_abs() const;
    // Largest |M - M^dag| entry.
    double hermiticity_defect() const;
    bool is_finite() const;
    void scale(cplx s);

  private:
    int dim_ = 0;
    std::vector<cplx> data_;
};

// Density operator of two bosonic modes truncated at n_max photons each;
// basis index (n1, n2) -> n1 * (n_max + 1) + n2.
struct TwoModeDensityMatrix {
    int n_max = 0;
    ComplexMatrix mat;

    TwoModeDensityMatrix() = default;
    explicit TwoModeDensityMatrix(int n_max_)
        : n_max(n_max_), mat((n_max_ + 1) * (n_max_ + 1)) {}

    int mode_dim() const { return n_max + 1; }
    int index(int n1, int n2) const { return n1 * (n_max + 1) + n2; }
    cplx& at(int n1, int n2, int m1, int m2) { return mat.at(index(n1, n2), index(m1, m2)); }
    const cplx& at(int n1, int n2, int m1, int m2) const {
        return mat.at(index(n1, n2), index(m1, m2));
    }

    // Divides by the trace; requires the trace to be real and positive.
    void normalize();
};

// Transpose with respect to mode 1 only:
// <n1 n2| rho^T1 |m1 m2> = <m1 n2| rho |n1 m2>.  Exact index permutation.
TwoModeDensityMatrix partial_transpose(const TwoModeDensityMatrix& rho);

}  // namespace optodistill
