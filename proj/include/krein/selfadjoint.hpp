#pragma once

#include <span>

#include "krein/matfun.hpp"
#include "krein/nevanlinna.hpp"
#include "krein/verification.hpp"

namespace krein {

// Selfadjoint relation Theta = Theta_op (+) Theta_inf: a Hermitian operator
// part on span(op_basis) and the multivalued part on its orthogonal
// complement. op_rank == dim is an ordinary Hermitian matrix, op_rank == 0
// the purely multivalued relation.
class SelfAdjointParameter {
public:
    // Checks orthonormal columns and Hermitian theta_op to 1e-10; throws
    // ValidationError / DimensionError.
    SelfAdjointParameter(int dim, ComplexMatrix op_basis, ComplexMatrix theta_op);

    static SelfAdjointParameter matrix(const ComplexMatrix& theta);
    static SelfAdjointParameter relation(int dim);

    int dim() const { return dim_; }
    int op_rank() const { return static_cast<int>(op_basis_.cols()); }
    const ComplexMatrix& op_basis() const { return op_basis_; }
    const ComplexMatrix& theta_op() const { return theta_op_; }

private:
    int dim_;
    ComplexMatrix op_basis_;
    ComplexMatrix theta_op_;
};

struct ScatterValue {
    double lambda = 0.0;
    SpectralSubspace subspace;  // ran Im M(lambda + i0)
    ComplexMatrix s_matrix;     // rank x rank, in subspace.basis
    Complex det_s{1.0, 0.0};
    double ssf = 0.0;
};

// op_basis* M op_basis.
ComplexMatrix compress_weyl(const ComplexMatrix& m, const SelfAdjointParameter& theta);

// S(lambda) = I + 2i sqrt(Im M) iota_op (Theta_op - M_op)^-1 P_op sqrt(Im M)
// on ran Im M(lambda + i0), together with its determinant and the spectral
// shift function at lambda.
ScatterValue scattering_matrix(const NevanlinnaModel& model, const SelfAdjointParameter& theta, double lambda,
                               double tol_rel = kDefaultRankTol);

// xi(lambda) = Im tr log(M_op(lambda + i0) - Theta_op) / pi.
double spectral_shift(const NevanlinnaModel& model, const SelfAdjointParameter& theta, double lambda);

// tr((A_Theta - z)^-1 - (A_0 - z)^-1) = -tr((M_op(z) - Theta_op)^-1 M_op'(z)).
Complex resolvent_trace(const NevanlinnaModel& model, const SelfAdjointParameter& theta, Complex z);

// |det S(lambda) - exp(-2 pi i xi(lambda))| over the grid.
IdentityReport verify_birman_krein(const NevanlinnaModel& model, const SelfAdjointParameter& theta,
                                   std::span<const double> grid, double tol_rel = kDefaultRankTol);

// resolvent_trace(z) against -int xi(t) / (t - z)^2 dt.
TraceCheck verify_trace_formula(const NevanlinnaModel& model, const SelfAdjointParameter& theta, Complex z,
                                double tol = 1e-7);

}  // namespace krein
