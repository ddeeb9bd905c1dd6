#include "krein/dissipative.hpp"

#include <cmath>
#include <optional>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "krein/errors.hpp"
#include "krein/sweep.hpp"

namespace krein {
namespace {

void check_dims(const NevanlinnaModel& model, const DissipativeParameter& dp) {
    if (model.dim() != dp.dim()) {
        std::ostringstream os;
        os << "dissipative parameter dimension " << dp.dim() << " does not match model dimension "
           << model.dim();
        throw DimensionError(os.str());
    }
}

double input_scale(const NevanlinnaModel& model, const DissipativeParameter& dp, double lambda) {
    return model.coefficient_scale() + std::abs(lambda) + norm2(dp.d());
}

// Pieces shared by every real-axis quantity.
struct BoundaryData {
    ComplexMatrix w;         // M(lambda + i0)
    ComplexMatrix resolvent; // (D - M(lambda + i0))^-1
};

BoundaryData boundary_data(const NevanlinnaModel& model, const DissipativeParameter& dp, double lambda) {
    check_dims(model, dp);
    BoundaryData b;
    b.w = model.boundary_value(lambda);
    b.resolvent = checked_inverse(dp.d() - b.w, "D - M(lambda + i0)");
    return b;
}

// sqrt(-Im D) restricted to H_D: dim x rank_D.
ComplexMatrix channel_factor(const DissipativeParameter& dp) { return dp.sqrt_neg_im() * dp.hd().basis; }

ComplexMatrix dilation_weight(const DissipativeParameter& dp) {
    const ComplexMatrix p = dp.projector();
    const auto n = p.rows();
    return (ComplexMatrix::Identity(n, n) - p) + p / std::sqrt(2.0);
}

}  // namespace

DissipativeParameter::DissipativeParameter(ComplexMatrix d, double tol_rel, double im_tol_rel) : d_(std::move(d)) {
    if (d_.rows() != d_.cols() || d_.rows() < 1) throw DimensionError("D must be a non-empty square matrix");
    if (!d_.allFinite()) throw ValidationError("D has non-finite entries");
    const ComplexMatrix neg_im = -imag_part(d_);
    const double top = -min_eigenvalue(neg_im);
    if (top > im_tol_rel * norm2(d_)) {
        std::ostringstream os;
        os << "D is not dissipative: Im D has eigenvalue " << top << " > 0";
        throw ValidationError(os.str());
    }
    hd_ = range_projection(neg_im, tol_rel);
    // Eigenvalues accepted by the check above may be slightly negative.
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(neg_im);
    const Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    sqrt_neg_im_ = hermitize(es.eigenvectors() * root.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint());
}

DilationScatterValue dilation_scattering(const NevanlinnaModel& model, const DissipativeParameter& dp,
                                         double lambda, double tol_rel) {
    const BoundaryData b = boundary_data(model, dp, lambda);
    DilationScatterValue out;
    out.lambda = lambda;
    const ComplexMatrix im_w = imag_part(b.w);
    out.hm = range_projection(im_w, tol_rel);
    const ComplexMatrix qm = psd_sqrt(im_w) * out.hm.basis;  // dim x rank_M
    const ComplexMatrix qd = channel_factor(dp);              // dim x rank_D

    out.t11 = qm.adjoint() * b.resolvent * qm;
    out.t12 = qm.adjoint() * b.resolvent * qd;
    out.t21 = qd.adjoint() * b.resolvent * qm;
    out.t22 = qd.adjoint() * b.resolvent * qd;

    const auto rm = qm.cols();
    const auto rd = qd.cols();
    out.s_full = ComplexMatrix::Identity(rm + rd, rm + rd);
    const Complex two_i(0.0, 2.0);
    out.s_full.topLeftCorner(rm, rm) += two_i * out.t11;
    out.s_full.topRightCorner(rm, rd) += two_i * out.t12;
    out.s_full.bottomLeftCorner(rd, rm) += two_i * out.t21;
    out.s_full.bottomRightCorner(rd, rd) += two_i * out.t22;
    out.s_d = out.s_full.topLeftCorner(rm, rm);
    out.s_lp = out.s_full.bottomRightCorner(rd, rd);

    const ComplexMatrix shifted = b.w - dp.d();
    const double scale = input_scale(model, dp, lambda);
    out.eta_d = log_phase(shifted, scale);
    const ComplexMatrix v = dilation_weight(dp);
    out.xi_dilation = log_phase(v * shifted * v, scale);
    return out;
}

ComplexMatrix dissipative_scattering(const NevanlinnaModel& model, const DissipativeParameter& dp, double lambda,
                                     double tol_rel) {
    const BoundaryData b = boundary_data(model, dp, lambda);
    const ComplexMatrix im_w = imag_part(b.w);
    const SpectralSubspace hm = range_projection(im_w, tol_rel);
    const ComplexMatrix qm = psd_sqrt(im_w) * hm.basis;
    return ComplexMatrix::Identity(hm.rank, hm.rank) + Complex(0.0, 2.0) * qm.adjoint() * b.resolvent * qm;
}

ComplexMatrix lax_phillips_scattering(const NevanlinnaModel& model, const DissipativeParameter& dp, double lambda) {
    const BoundaryData b = boundary_data(model, dp, lambda);
    const ComplexMatrix qd = channel_factor(dp);
    return ComplexMatrix::Identity(dp.rank(), dp.rank()) + Complex(0.0, 2.0) * qd.adjoint() * b.resolvent * qd;
}

namespace {

ComplexMatrix characteristic_from(const DissipativeParameter& dp, const ComplexMatrix& m_lower) {
    const ComplexMatrix resolvent = checked_inverse(dp.d().adjoint() - m_lower, "D* - M(mu)");
    const ComplexMatrix qd = channel_factor(dp);
    return ComplexMatrix::Identity(dp.rank(), dp.rank()) - Complex(0.0, 2.0) * qd.adjoint() * resolvent * qd;
}

}  // namespace

ComplexMatrix characteristic_function(const NevanlinnaModel& model, const DissipativeParameter& dp, Complex mu) {
    check_dims(model, dp);
    if (!(mu.imag() < 0.0)) throw DomainError("characteristic_function requires Im mu < 0");
    return characteristic_from(dp, model.eval(mu));
}

ComplexMatrix characteristic_function_boundary(const NevanlinnaModel& model, const DissipativeParameter& dp,
                                               double mu) {
    check_dims(model, dp);
    return characteristic_from(dp, model.boundary_value(mu).adjoint());
}

double eta_d(const NevanlinnaModel& model, const DissipativeParameter& dp, double lambda) {
    check_dims(model, dp);
    return log_phase(model.boundary_value(lambda) - dp.d(), input_scale(model, dp, lambda));
}

double dilation_ssf(const NevanlinnaModel& model, const DissipativeParameter& dp, double lambda) {
    check_dims(model, dp);
    const ComplexMatrix v = dilation_weight(dp);
    return log_phase(v * (model.boundary_value(lambda) - dp.d()) * v, input_scale(model, dp, lambda));
}

Complex dissipative_resolvent_trace(const NevanlinnaModel& model, const DissipativeParameter& dp, Complex z) {
    check_dims(model, dp);
    if (!(z.imag() > 0.0)) throw DomainError("dissipative_resolvent_trace requires Im z > 0");
    const ComplexMatrix resolvent = checked_inverse(dp.d() - model.eval(z), "D - M(z)");
    return (resolvent * model.derivative(z)).trace();
}

Complex dissipative_adjoint_resolvent_trace(const NevanlinnaModel& model, const DissipativeParameter& dp,
                                            Complex z) {
    check_dims(model, dp);
    if (!(z.imag() < 0.0)) throw DomainError("dissipative_adjoint_resolvent_trace requires Im z < 0");
    const ComplexMatrix resolvent = checked_inverse(dp.d().adjoint() - model.eval(z), "D* - M(z)");
    return (resolvent * model.derivative(z)).trace();
}

ModifiedBkReport verify_modified_bk(const NevanlinnaModel& model, const DissipativeParameter& dp,
                                    std::span<const double> grid, double tol_rel) {
    const auto records = sweep_dissipative(model, dp, grid, tol_rel);
    return ModifiedBkReport{
        collect(records, [](const DissipativeRecord& r) { return r.residual_bk; }),
        collect(records, [](const DissipativeRecord& r) { return r.residual_bk_dual; }),
    };
}

TraceCheck verify_dissipative_trace_formula(const NevanlinnaModel& model, const DissipativeParameter& dp,
                                            Complex z, double tol) {
    TraceCheck out;
    out.z = z;
    out.lhs = z.imag() > 0.0 ? dissipative_resolvent_trace(model, dp, z)
                             : dissipative_adjoint_resolvent_trace(model, dp, z);
    auto ssf = [&](double t) -> std::optional<double> {
        try {
            return eta_d(model, dp, t);
        } catch (const ExceptionalPointError&) {
            return std::nullopt;
        } catch (const SingularError&) {
            return std::nullopt;
        }
    };
    const auto breaks = model.exceptional_points();
    out.quadrature = integrate_ssf_kernel(ssf, z, static_cast<double>(dp.dim()), tol, breaks);
    out.rhs = out.quadrature.value;
    out.residual = std::abs(out.lhs - out.rhs);
    return out;
}

}  // namespace krein
