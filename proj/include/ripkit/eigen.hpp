#pragma once

#include <optional>
#include <utility>

#include "ripkit/matrix.hpp"

namespace ripkit {

struct EigenResult {
    Vec eigenvalues;                          // ascending
    std::optional<DenseMatrix> eigenvectors;  // columns aligned with eigenvalues
};

// Full spectrum of a symmetric/Hermitian matrix by cyclic Jacobi sweeps.
// Rejects non-square input and input that is not Hermitian within 1e-10
// relative to its largest entry.
EigenResult symmetric_eig(const DenseMatrix& a, bool want_vectors);

// Raw-kernel entry points for internal callers that already hold a
// (near-)symmetric matrix; the input is symmetrized before iterating.
Vec sym_eigenvalues(RMat a);
Vec herm_eigenvalues(CMat a);
std::pair<Vec, RMat> sym_eigensystem(RMat a);
std::pair<Vec, CMat> herm_eigensystem(CMat a);

} // namespace ripkit
