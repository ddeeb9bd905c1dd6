#pragma once

#include "krein/linalg.hpp"

namespace krein {

inline constexpr double kDefaultRankTol = 1e-10;

// Orthonormal basis of the range of a Hermitian matrix, restricted to the
// eigendirections whose eigenvalue exceeds `tol`.
struct SpectralSubspace {
    int ambient_dim = 0;
    ComplexMatrix basis;          // ambient_dim x rank, orthonormal columns
    Eigen::VectorXd eigenvalues;  // retained eigenvalues, descending
    int rank = 0;
    double tol = 0.0;             // absolute eigenvalue cutoff actually used

    ComplexMatrix projector() const { return basis * basis.adjoint(); }
};

enum class LogMethod {
    Auto,      // eigen path for normal T, integral otherwise
    Integral,  // always the half-line integral
    Eigen,     // Schur-based; only exact for normal T
};

// log T := -i int_0^inf ((T + it)^-1 - (1 + it)^-1 I) dt for Im T >= 0 and
// 0 not in sigma(T). The eigenvalue arguments of the branch lie in [0, pi],
// so a negative real eigenvalue -x maps to ln x + i pi.
//
// Throws DomainError if Im T has an eigenvalue below -1e-10 ||T||, and
// SingularError if sigma_min(T) / sigma_max(T) < 1e-12.
ComplexMatrix upper_log(const ComplexMatrix& t, LogMethod method = LogMethod::Auto);

// tr(upper_log(T)); Im part in [0, pi dim].
Complex tr_log(const ComplexMatrix& t, LogMethod method = LogMethod::Auto);

// (1/pi) Im tr log T for T whose imaginary part is PSD up to rounding, such
// as M(lambda + i0) - Theta. Im T may dip to -1e-10 max(scale, |T|), where
// `scale` bounds the size of the terms T was assembled from. Computed from the
// eigenvalues of T, so no matrix logarithm is formed.
double log_phase(const ComplexMatrix& t, double scale);

// Hermitian square root of a PSD matrix; eigenvalues in [-1e-10 ||H||, 0) are
// clamped to zero, anything more negative raises DomainError.
ComplexMatrix psd_sqrt(const ComplexMatrix& h);

// Eigenvectors of H with eigenvalue > tol_rel * max(1, ||H||), ordered by
// descending eigenvalue; each vector's first non-negligible component is made
// real positive.
SpectralSubspace range_projection(const ComplexMatrix& h, double tol_rel = kDefaultRankTol);

}  // namespace krein
