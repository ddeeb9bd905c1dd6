#include "krein/linalg.hpp"

#include <limits>

#include "krein/errors.hpp"

namespace krein {

double norm2(const ComplexMatrix& x) {
    if (x.size() == 0) return 0.0;
    return Eigen::JacobiSVD<ComplexMatrix>(x).singularValues()(0);
}

double max_singular_value(const ComplexMatrix& x) { return norm2(x); }

double min_eigenvalue(const ComplexMatrix& hermitian) {
    if (hermitian.size() == 0) return std::numeric_limits<double>::infinity();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitize(hermitian), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

Complex det(const ComplexMatrix& x) {
    if (x.size() == 0) return Complex(1.0, 0.0);
    return x.partialPivLu().determinant();
}

ComplexMatrix checked_inverse(const ComplexMatrix& x, const char* what, double rcond_min) {
    if (x.rows() != x.cols()) throw DimensionError(std::string(what) + ": matrix is not square");
    if (x.size() == 0) return x;
    Eigen::JacobiSVD<ComplexMatrix> svd(x);
    const auto& sv = svd.singularValues();
    const double smax = sv(0);
    const double smin = sv(sv.size() - 1);
    if (!(smax > 0.0) || !(smin >= rcond_min * smax)) {
        throw SingularError(std::string(what) + " is numerically singular (sigma_min/sigma_max = " +
                            std::to_string(smax > 0.0 ? smin / smax : 0.0) + ")");
    }
    return x.partialPivLu().inverse();
}

double unitarity_defect(const ComplexMatrix& s) {
    if (s.size() == 0) return 0.0;
    return norm2(s.adjoint() * s - ComplexMatrix::Identity(s.cols(), s.cols()));
}

}  // namespace krein
