#include "krein/selfadjoint.hpp"

#include <cmath>
#include <optional>
#include <sstream>

#include "krein/errors.hpp"
#include "krein/sweep.hpp"

namespace krein {
namespace {

constexpr double kParamTol = 1e-10;

void check_dims(const NevanlinnaModel& model, const SelfAdjointParameter& theta) {
    if (model.dim() != theta.dim()) {
        std::ostringstream os;
        os << "parameter dimension " << theta.dim() << " does not match model dimension " << model.dim();
        throw DimensionError(os.str());
    }
}

double input_scale(const NevanlinnaModel& model, const SelfAdjointParameter& theta, double lambda) {
    return model.coefficient_scale() + std::abs(lambda) + norm2(theta.theta_op());
}

}  // namespace

SelfAdjointParameter::SelfAdjointParameter(int dim, ComplexMatrix op_basis, ComplexMatrix theta_op)
    : dim_(dim), op_basis_(std::move(op_basis)), theta_op_(std::move(theta_op)) {
    if (dim_ < 1) throw DimensionError("parameter dimension must be positive");
    if (op_basis_.rows() != dim_ || op_basis_.cols() > dim_) {
        throw DimensionError("op_basis must be dim x r with r <= dim");
    }
    const auto r = op_basis_.cols();
    if (theta_op_.rows() != r || theta_op_.cols() != r) {
        throw DimensionError("theta_op must be r x r where r is the number of op_basis columns");
    }
    if (r > 0) {
        const double orth = (op_basis_.adjoint() * op_basis_ - ComplexMatrix::Identity(r, r)).norm();
        if (orth > kParamTol) throw ValidationError("op_basis columns are not orthonormal");
        if ((theta_op_ - theta_op_.adjoint()).norm() > kParamTol * std::max(1.0, theta_op_.norm())) {
            throw ValidationError("theta_op is not Hermitian");
        }
        theta_op_ = hermitize(theta_op_);
    }
}

SelfAdjointParameter SelfAdjointParameter::matrix(const ComplexMatrix& theta) {
    const auto n = theta.rows();
    return SelfAdjointParameter(static_cast<int>(n), ComplexMatrix::Identity(n, n), theta);
}

SelfAdjointParameter SelfAdjointParameter::relation(int dim) {
    return SelfAdjointParameter(dim, ComplexMatrix::Zero(dim, 0), ComplexMatrix::Zero(0, 0));
}

ComplexMatrix compress_weyl(const ComplexMatrix& m, const SelfAdjointParameter& theta) {
    if (m.rows() != theta.dim() || m.cols() != theta.dim()) {
        throw DimensionError("compress_weyl: matrix size does not match parameter dimension");
    }
    return theta.op_basis().adjoint() * m * theta.op_basis();
}

ScatterValue scattering_matrix(const NevanlinnaModel& model, const SelfAdjointParameter& theta, double lambda,
                               double tol_rel) {
    check_dims(model, theta);
    ScatterValue out;
    out.lambda = lambda;
    const ComplexMatrix w = model.boundary_value(lambda);
    const ComplexMatrix im_w = imag_part(w);
    out.subspace = range_projection(im_w, tol_rel);

    const int r = theta.op_rank();
    ComplexMatrix shifted;  // M_op - Theta_op
    ComplexMatrix resolvent;  // (Theta_op - M_op)^-1
    if (r > 0) {
        shifted = compress_weyl(w, theta) - theta.theta_op();
        resolvent = checked_inverse(-shifted, "Theta_op - M_op(lambda + i0)");
    }

    const int rank = out.subspace.rank;
    out.s_matrix = ComplexMatrix::Identity(rank, rank);
    if (rank > 0 && r > 0) {
        const ComplexMatrix qb = psd_sqrt(im_w) * out.subspace.basis;  // dim x rank
        const ComplexMatrix left = theta.op_basis().adjoint() * qb;    // r x rank
        out.s_matrix += Complex(0.0, 2.0) * left.adjoint() * resolvent * left;
    }
    out.det_s = det(out.s_matrix);
    out.ssf = r > 0 ? log_phase(shifted, input_scale(model, theta, lambda)) : 0.0;
    return out;
}

double spectral_shift(const NevanlinnaModel& model, const SelfAdjointParameter& theta, double lambda) {
    check_dims(model, theta);
    if (theta.op_rank() == 0) return 0.0;
    const ComplexMatrix shifted = compress_weyl(model.boundary_value(lambda), theta) - theta.theta_op();
    return log_phase(shifted, input_scale(model, theta, lambda));
}

Complex resolvent_trace(const NevanlinnaModel& model, const SelfAdjointParameter& theta, Complex z) {
    check_dims(model, theta);
    if (theta.op_rank() == 0) return Complex(0.0, 0.0);
    const ComplexMatrix shifted = compress_weyl(model.eval(z), theta) - theta.theta_op();
    const ComplexMatrix dm = compress_weyl(model.derivative(z), theta);
    return -(checked_inverse(shifted, "M_op(z) - Theta_op") * dm).trace();
}

IdentityReport verify_birman_krein(const NevanlinnaModel& model, const SelfAdjointParameter& theta,
                                   std::span<const double> grid, double tol_rel) {
    const auto records = sweep_selfadjoint(model, theta, grid, tol_rel);
    return collect(records, [](const SelfAdjointRecord& r) { return r.residual_bk; });
}

TraceCheck verify_trace_formula(const NevanlinnaModel& model, const SelfAdjointParameter& theta, Complex z,
                                double tol) {
    TraceCheck out;
    out.z = z;
    out.lhs = resolvent_trace(model, theta, z);
    auto ssf = [&](double t) -> std::optional<double> {
        try {
            return spectral_shift(model, theta, t);
        } catch (const ExceptionalPointError&) {
            return std::nullopt;
        } catch (const SingularError&) {
            return std::nullopt;
        }
    };
    const auto breaks = model.exceptional_points();
    out.quadrature = integrate_ssf_kernel(ssf, z, static_cast<double>(theta.op_rank()), tol, breaks);
    out.rhs = out.quadrature.value;
    out.residual = std::abs(out.lhs - out.rhs);
    return out;
}

}  // namespace krein
