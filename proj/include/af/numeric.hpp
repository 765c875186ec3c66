#pragma once

#include <Eigen/Dense>
#include <complex>

#include "af/scalar.hpp"

namespace af {

using ComplexValue = std::complex<double>;

// e^{i 2 pi t}.  The argument is reduced mod 1 before scaling by 2*pi so the
// result is 1-periodic to full precision even for |t| ~ 1e6; the rational
// overload reduces exactly first.
ComplexValue unit_exponential(double t);
ComplexValue unit_exponential(const Rational& t);

using HermitianMatrix = Eigen::MatrixXcd;

// Validates that a is Hermitian up to 1e-10 * max(1, ||a||_inf) and returns the
// symmetrized (a + a^*)/2.
HermitianMatrix make_hermitian(const Eigen::MatrixXcd& a);

// Ascending real eigenvalues of a (near-)Hermitian matrix.  Residual
// ||A v - lambda v|| stays below 1e-10 * ||A|| for the sizes used here.
Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& a);

}  // namespace af
