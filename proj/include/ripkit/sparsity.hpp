#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "ripkit/matrix.hpp"

namespace ripkit {

// Sparse vector with strictly increasing indices and nonzero stored values.
class SparseVector {
public:
    SparseVector(std::size_t dim, std::vector<std::size_t> indices, Vec values);
    SparseVector(std::size_t dim, std::vector<std::size_t> indices, CVec values);

    std::size_t dim() const { return dim_; }
    Field field() const { return field_; }
    bool is_real() const { return field_ == Field::real; }
    const std::vector<std::size_t>& indices() const { return indices_; }
    const Vec& values() const;
    const CVec& cvalues() const;

    Vec to_dense() const;  // real vectors only

private:
    std::size_t dim_;
    Field field_;
    std::vector<std::size_t> indices_;
    std::variant<Vec, CVec> values_;
};

// Number of stored (nonzero) entries.
std::size_t l0_norm(const SparseVector& x);

// Keeps the s largest-magnitude entries; magnitude ties keep the lower index.
// Zero entries are never stored, so the result can have fewer than s entries.
SparseVector hard_threshold(const Vec& x, std::size_t s);
SparseVector hard_threshold(const CVec& x, std::size_t s);

// lp distance from x to its best s-sparse approximation; p in [1, inf],
// infinity selects the max norm.
double best_s_term_error(const Vec& x, std::size_t s, double p);

} // namespace ripkit
