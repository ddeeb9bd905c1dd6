#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace krein {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

// (X - X*) / 2i, exactly Hermitian.
inline ComplexMatrix imag_part(const ComplexMatrix& x) {
    ComplexMatrix h = (x - x.adjoint()) * Complex(0.0, -0.5);
    return (h + h.adjoint()) * 0.5;
}

inline ComplexMatrix real_part(const ComplexMatrix& x) {
    ComplexMatrix h = (x + x.adjoint()) * 0.5;
    return (h + h.adjoint()) * 0.5;
}

inline ComplexMatrix hermitize(const ComplexMatrix& x) { return (x + x.adjoint()) * 0.5; }

// Spectral norm.
double norm2(const ComplexMatrix& x);

// Smallest eigenvalue of a Hermitian matrix (+inf for an empty matrix).
double min_eigenvalue(const ComplexMatrix& hermitian);

// Largest singular value (0 for an empty matrix).
double max_singular_value(const ComplexMatrix& x);

// Determinant with det of a 0x0 matrix equal to 1.
Complex det(const ComplexMatrix& x);

// Inverse that throws SingularError when sigma_min / sigma_max < rcond_min.
ComplexMatrix checked_inverse(const ComplexMatrix& x, const char* what, double rcond_min = 1e-12);

// ||S* S - I|| in the spectral norm (0 for an empty matrix).
double unitarity_defect(const ComplexMatrix& s);

}  // namespace krein
