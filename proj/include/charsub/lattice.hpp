#pragma once

// Integer lattices: kernels of integer matrices and LLL reduction.

#include <vector>

#include "charsub/common.hpp"
#include "charsub/finite_abelian.hpp"

namespace charsub {

using IntVector = std::vector<Int>;

/// Basis of {n in Z^cols : M n = 0}.
std::vector<IntVector> integer_kernel(const IntMatrix& m, std::size_t cols);

/// LLL-reduced basis (exact rational Gram-Schmidt), delta in (1/4, 1).
std::vector<IntVector> lll_reduce(std::vector<IntVector> basis, const Rat& delta = Rat(3, 4));

Int dot(const IntVector& a, const IntVector& b);
Int linf_norm(const IntVector& v);
}  // namespace charsub
