#pragma once

#include <optional>

#include "ripkit/matrix.hpp"

namespace ripkit {

struct SvdResult {
    Vec singular_values;            // descending, length min(rows, cols)
    std::optional<DenseMatrix> u;   // rows x rows
    std::optional<DenseMatrix> v;   // cols x cols, columns are right singular vectors
};

// Singular value decomposition via the eigensystem of the smaller Gram
// matrix. Factors, when requested, are full square and orthonormal; the
// reconstruction A = U diag(s) V* holds to 1e-9 relative.
SvdResult svd(const DenseMatrix& a, bool want_factors);

// Orthonormal basis of ker(A) as columns, dimension cols - rank. Rank is
// counted by singular values exceeding rank_tol times the largest one.
RMat null_space_basis(const RMat& a, double rank_tol = 1e-10);

// Moore-Penrose pseudoinverse of a full-row-rank wide matrix (rows <= cols).
// Throws SingularityError when the smallest singular value falls at or below
// rank_tol times the largest.
DenseMatrix pseudoinverse(const DenseMatrix& a, double rank_tol = 1e-10);

// Largest singular value (spectral norm).
double spectral_norm(const RMat& a);

} // namespace ripkit
