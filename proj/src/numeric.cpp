#include "af/numeric.hpp"

#include <cmath>
#include <numbers>

namespace af {

ComplexValue unit_exponential(double t) {
    if (!std::isfinite(t))
        throw NumericDomainError("numeric.nonfinite-phase", "non-finite phase argument");
    double r = t - std::round(t);  // reduce first; 2*pi*t would lose ulps
    double a = 2.0 * std::numbers::pi * r;
    return {std::cos(a), std::sin(a)};
}

ComplexValue unit_exponential(const Rational& t) {
    return unit_exponential(to_double(rational_frac(t)));
}

HermitianMatrix make_hermitian(const Eigen::MatrixXcd& a) {
    if (a.rows() != a.cols())
        throw ArgumentError("numeric.not-square", "matrix must be square");
    double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    double asym = (a - a.adjoint()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * scale)
        throw NumericDomainError("numeric.not-hermitian",
                                 "matrix is not Hermitian within tolerance");
    return (a + a.adjoint()) / 2.0;
}

Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& a) {
    HermitianMatrix h = make_hermitian(a);
    if (h.rows() == 0) return Eigen::VectorXd(0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw NumericDomainError("numeric.eigen-failure",
                                 "Hermitian eigenvalue iteration did not converge");
    return solver.eigenvalues();  // ascending
}

}  // namespace af
