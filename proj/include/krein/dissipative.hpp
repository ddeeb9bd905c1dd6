#pragma once

#include <span>

#include "krein/matfun.hpp"
#include "krein/nevanlinna.hpp"
#include "krein/verification.hpp"

namespace krein {

// Dissipative boundary matrix D (Im D <= 0) together with the subspace
// H_D = ran(-Im D) and the square root sqrt(-Im D).
class DissipativeParameter {
public:
    // Throws ValidationError if the largest eigenvalue of Im D exceeds
    // 1e-12 * ||D|| (or `im_tol_rel` when given).
    explicit DissipativeParameter(ComplexMatrix d, double tol_rel = kDefaultRankTol, double im_tol_rel = 1e-12);

    int dim() const { return static_cast<int>(d_.rows()); }
    const ComplexMatrix& d() const { return d_; }
    const SpectralSubspace& hd() const { return hd_; }
    int rank() const { return hd_.rank; }
    // P_D as a dim x dim orthogonal projector.
    ComplexMatrix projector() const { return hd_.projector(); }
    const ComplexMatrix& sqrt_neg_im() const { return sqrt_neg_im_; }

private:
    ComplexMatrix d_;
    SpectralSubspace hd_;
    ComplexMatrix sqrt_neg_im_;
};

struct DilationScatterValue {
    double lambda = 0.0;
    SpectralSubspace hm;  // ran Im M(lambda + i0)
    ComplexMatrix t11, t12, t21, t22;
    ComplexMatrix s_full;  // (rank_M + rank_D) square, order (H_M, H_D)
    ComplexMatrix s_d;     // upper-left corner
    ComplexMatrix s_lp;    // lower-right corner
    double eta_d = 0.0;
    double xi_dilation = 0.0;
};

// Scattering matrix of the selfadjoint dilation, built from M(lambda + i0)
// and D alone, with its corners and both spectral shift functions.
DilationScatterValue dilation_scattering(const NevanlinnaModel& model, const DissipativeParameter& dp,
                                         double lambda, double tol_rel = kDefaultRankTol);

// S_D(lambda) = I + 2i sqrt(Im M) (D - M)^-1 sqrt(Im M) on ran Im M(lambda + i0).
ComplexMatrix dissipative_scattering(const NevanlinnaModel& model, const DissipativeParameter& dp, double lambda,
                                     double tol_rel = kDefaultRankTol);

// S_LP(lambda) = I + 2i sqrt(-Im D) (D - M)^-1 sqrt(-Im D) on H_D.
ComplexMatrix lax_phillips_scattering(const NevanlinnaModel& model, const DissipativeParameter& dp, double lambda);

// W(mu) = I - 2i sqrt(-Im D) (D* - M(mu))^-1 sqrt(-Im D) on H_D, Im mu < 0.
ComplexMatrix characteristic_function(const NevanlinnaModel& model, const DissipativeParameter& dp, Complex mu);

// Boundary limit W(mu - i0), using M(mu - i0) = M(mu + i0)*.
ComplexMatrix characteristic_function_boundary(const NevanlinnaModel& model, const DissipativeParameter& dp,
                                               double mu);

// eta_D(lambda) = Im tr log(M(lambda + i0) - D) / pi.
double eta_d(const NevanlinnaModel& model, const DissipativeParameter& dp, double lambda);

// Spectral shift of the dilation pair: Im tr log(V (M - D) V) / pi with
// V = (I - P_D) + P_D / sqrt(2). Differs from eta_D by an even integer.
double dilation_ssf(const NevanlinnaModel& model, const DissipativeParameter& dp, double lambda);

// tr((A_D - z)^-1 - (A_0 - z)^-1) = tr((D - M(z))^-1 M'(z)), Im z > 0.
Complex dissipative_resolvent_trace(const NevanlinnaModel& model, const DissipativeParameter& dp, Complex z);

// Same for the adjoint A_D* (parameter D*), Im z < 0.
Complex dissipative_adjoint_resolvent_trace(const NevanlinnaModel& model, const DissipativeParameter& dp,
                                            Complex z);

struct ModifiedBkReport {
    IdentityReport forward;  // det S_D = conj(det S_LP) exp(-2 pi i eta_D)
    IdentityReport dual;     // det S_LP = conj(det S_D) exp(-2 pi i eta_D)
};

ModifiedBkReport verify_modified_bk(const NevanlinnaModel& model, const DissipativeParameter& dp,
                                    std::span<const double> grid, double tol_rel = kDefaultRankTol);

// Im z > 0 checks A_D, Im z < 0 checks A_D*; both against -int eta_D / (t - z)^2.
TraceCheck verify_dissipative_trace_formula(const NevanlinnaModel& model, const DissipativeParameter& dp,
                                            Complex z, double tol = 1e-7);

}  // namespace krein
