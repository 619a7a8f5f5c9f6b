#pragma once

#include <vector>

namespace wet {

/// All real roots of the polynomial with ascending coefficients
/// coeffs[0] + coeffs[1] x + ... + coeffs[d] x^d, via companion-matrix
/// eigenvalues followed by Newton polishing on the polynomial. Near-real
/// eigenvalue pairs are collapsed; duplicates are deduplicated.
/// Throws RootFindingFailure if the eigen decomposition does not converge.
std::vector<double> real_polynomial_roots(std::vector<double> coeffs);

/// Horner evaluation of the same ascending-coefficient polynomial.
double polynomial_eval(const std::vector<double>& coeffs, double x);

} // namespace wet
