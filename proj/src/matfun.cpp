#include "krein/matfun.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "krein/errors.hpp"
#include "krein/quadrature.hpp"

namespace krein {
namespace {

constexpr double kImagTolRel = 1e-10;
constexpr double kNormalTolRel = 1e-12;
constexpr double kRcondMin = 1e-12;

// Scalar log with argument forced into [0, pi]. Eigenvalues of T lie in the
// closed upper half-plane up to rounding, so a negative argument is noise on
// either the positive or the negative real axis.
Complex scalar_upper_log(Complex z) {
    double arg = std::arg(z);
    if (arg < 0.0) arg = arg < -0.5 * kPi ? kPi : 0.0;
    return Complex(std::log(std::abs(z)), arg);
}

void check_log_domain(const ComplexMatrix& t, double norm) {
    if (t.rows() != t.cols()) throw DimensionError("upper_log: matrix is not square");
    if (!t.allFinite()) throw DomainError("upper_log: non-finite entries");
    const double lowest = min_eigenvalue(imag_part(t));
    if (lowest < -kImagTolRel * norm) {
        std::ostringstream os;
        os << "upper_log: Im T has eigenvalue " << lowest << " < 0";
        throw DomainError(os.str());
    }
    Eigen::JacobiSVD<ComplexMatrix> svd(t);
    const auto& sv = svd.singularValues();
    if (!(sv(0) > 0.0) || sv(sv.size() - 1) < kRcondMin * sv(0)) {
        throw SingularError("upper_log: T is numerically singular");
    }
}

bool is_normal(const ComplexMatrix& t, double norm) {
    return norm2(t * t.adjoint() - t.adjoint() * t) <= kNormalTolRel * norm * norm;
}

ComplexMatrix eigen_log(const ComplexMatrix& t) {
    Eigen::ComplexSchur<ComplexMatrix> schur(t);
    const ComplexMatrix& u = schur.matrixU();
    const ComplexMatrix& r = schur.matrixT();
    ComplexVector logs(r.rows());
    for (Eigen::Index k = 0; k < r.rows(); ++k) logs(k) = scalar_upper_log(r(k, k));
    return u * logs.asDiagonal() * u.adjoint();
}

ComplexMatrix integral_log(const ComplexMatrix& t) {
    const Eigen::Index n = t.rows();
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    const ComplexMatrix one_minus_t = id - t;
    // (T + is)^-1 - (1 + is)^-1 I == (T + is)^-1 (I - T) (1 + is)^-1, which
    // avoids cancellation for large s.
    auto integrand = [&](double s) -> ComplexVector {
        ComplexMatrix shifted = t;
        shifted.diagonal().array() += Complex(0.0, s);
        ComplexMatrix g = shifted.partialPivLu().solve(one_minus_t);
        g *= Complex(0.0, -1.0) / Complex(1.0, s);
        return Eigen::Map<ComplexVector>(g.data(), g.size());
    };
    QuadratureOptions opts;
    opts.abs_tol = 1e-12;
    opts.rel_tol = 1e-12;
    opts.max_subdivisions = 2000;
    const auto r = integrate_halfline(integrand, static_cast<std::size_t>(n * n), opts);
    return Eigen::Map<const ComplexMatrix>(r.value.data(), n, n);
}

}  // namespace

ComplexMatrix upper_log(const ComplexMatrix& t, LogMethod method) {
    if (t.size() == 0) return t;
    const double norm = norm2(t);
    check_log_domain(t, norm);
    switch (method) {
        case LogMethod::Eigen:
            return eigen_log(t);
        case LogMethod::Integral:
            return integral_log(t);
        case LogMethod::Auto:
            break;
    }
    return is_normal(t, norm) ? eigen_log(t) : integral_log(t);
}

Complex tr_log(const ComplexMatrix& t, LogMethod method) {
    if (t.size() == 0) return Complex(0.0, 0.0);
    return upper_log(t, method).trace();
}

double log_phase(const ComplexMatrix& t, double scale) {
    if (t.size() == 0) return 0.0;
    check_log_domain(t, std::max(scale, norm2(t)));
    // Im tr log T is the sum of the eigenvalue arguments, all in [0, pi].
    Eigen::ComplexSchur<ComplexMatrix> schur(t, false);
    const ComplexMatrix& r = schur.matrixT();
    double sum = 0.0;
    for (Eigen::Index k = 0; k < r.rows(); ++k) sum += scalar_upper_log(r(k, k)).imag();
    return sum / kPi;
}

ComplexMatrix psd_sqrt(const ComplexMatrix& h) {
    if (h.rows() != h.cols()) throw DimensionError("psd_sqrt: matrix is not square");
    if (h.size() == 0) return h;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitize(h));
    Eigen::VectorXd ev = es.eigenvalues();
    const double norm = ev.cwiseAbs().maxCoeff();
    for (Eigen::Index k = 0; k < ev.size(); ++k) {
        if (ev(k) < -kImagTolRel * norm) {
            std::ostringstream os;
            os << "psd_sqrt: eigenvalue " << ev(k) << " is negative";
            throw DomainError(os.str());
        }
        ev(k) = std::sqrt(std::max(ev(k), 0.0));
    }
    const ComplexMatrix& v = es.eigenvectors();
    return hermitize(v * ev.cast<Complex>().asDiagonal() * v.adjoint());
}

SpectralSubspace range_projection(const ComplexMatrix& h, double tol_rel) {
    if (h.rows() != h.cols()) throw DimensionError("range_projection: matrix is not square");
    SpectralSubspace out;
    out.ambient_dim = static_cast<int>(h.rows());
    out.basis = ComplexMatrix::Zero(h.rows(), 0);
    out.eigenvalues = Eigen::VectorXd(0);
    if (h.size() == 0) return out;

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitize(h));
    const Eigen::VectorXd& ev = es.eigenvalues();
    const double norm = ev.cwiseAbs().maxCoeff();
    out.tol = tol_rel * std::max(1.0, norm);

    std::vector<Eigen::Index> keep;
    for (Eigen::Index k = ev.size() - 1; k >= 0; --k) {
        if (ev(k) > out.tol) keep.push_back(k);
    }
    out.rank = static_cast<int>(keep.size());
    out.basis.resize(h.rows(), out.rank);
    out.eigenvalues.resize(out.rank);
    for (int j = 0; j < out.rank; ++j) {
        ComplexVector v = es.eigenvectors().col(keep[j]);
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            if (std::abs(v(i)) > 1e-10) {
                v *= std::conj(v(i)) / std::abs(v(i));
                v(i) = Complex(v(i).real(), 0.0);
                break;
            }
        }
        out.basis.col(j) = v;
        out.eigenvalues(j) = ev(keep[j]);
    }
    return out;
}

}  // namespace krein
