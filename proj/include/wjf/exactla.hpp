#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "wjf/numtheory.hpp"

namespace wjf {

using IntVector = std::vector<Integer>;

/// Dense row-major matrix of arbitrary-precision integers.
class ExactMatrix {
public:
    ExactMatrix() = default;
    ExactMatrix(std::size_t rows, std::size_t cols);

    static ExactMatrix from_rows(const std::vector<IntVector>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Integer& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Integer& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    IntVector row(std::size_t i) const;

    /// Appends a row; the first row fixes the column count of an empty matrix.
    void append_row(const IntVector& r);

    ExactMatrix transpose() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Integer> data_;
};

IntVector mat_vec(const ExactMatrix& a, const IntVector& v);

/// Divides out the content and makes the first nonzero entry positive.
void make_primitive(IntVector& v);

/// Exact rank. Small matrices use fraction-free elimination, large ones the
/// certified multi-modular kernel (see nullspace).
std::size_t rank(const ExactMatrix& a);

/// Basis of {x : A x = 0}. Vector k has a 1 (before clearing) in the k-th
/// non-pivot column and zeros in the other non-pivot columns, then is scaled
/// to a primitive integer vector with positive leading entry. The basis is
/// therefore canonical: both elimination routes return identical output.
std::vector<IntVector> nullspace(const ExactMatrix& a);

/// True iff f . v != 0 for some v in the nullspace of A.
bool functional_on_nullspace(const ExactMatrix& a, const IntVector& f);

/// Fraction-free (Bareiss) elimination routes.
std::size_t rank_bareiss(const ExactMatrix& a);
std::vector<IntVector> nullspace_bareiss(const ExactMatrix& a);

/// Rank over Z/pZ for a prime p < 2^62. Never exceeds the rank over Q.
std::size_t rank_mod_p(const ExactMatrix& a, std::uint64_t p);

/// Kernel over Q from reductions modulo 62-bit primes, rational reconstruction
/// and an exact A v = 0 check of every vector. Since the rank modulo a prime
/// never exceeds the rank over Q, a verified kernel of the modular nullity is
/// the full kernel.
std::vector<IntVector> nullspace_multimodular(const ExactMatrix& a);

}  // namespace wjf
