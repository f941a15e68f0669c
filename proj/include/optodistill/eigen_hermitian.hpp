#pragma once

#include <vector>

#include "optodistill/complex_matrix.hpp"

namespace optodistill {

// Eigenvalues of a Hermitian matrix, ascending. Unitary reduction to real
// tridiagonal form (Householder reflectors) followed by implicit-shift QL.
// Throws NotHermitian when the hermiticity defect exceeds 1e-12 * max|entry|.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m);

struct EigenDecomposition {
    std::vector<double> values;  // ascending
    ComplexMatrix vectors;       // column j is the unit eigenvector for values[j]
};

// Full eigensystem; same reduction with the unitary accumulated.
EigenDecomposition hermitian_eigensystem(const ComplexMatrix& m);

}  // namespace optodistill
