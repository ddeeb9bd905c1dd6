#pragma once

#include <span>

#include "krein/matfun.hpp"
#include "krein/nevanlinna.hpp"
#include "krein/verification.hpp"

namespace krein {

// Inner system with Weyl function M and exit channel with Weyl function tau,
// coupled through the relation whose operator part is zero on {(v, v)}.
class CoupledSystem {
public:
    // Throws DimensionError for unequal dimensions and ValidationError if
    // either model fails validate().
    CoupledSystem(NevanlinnaModel model_h, NevanlinnaModel model_g);

    int dim() const { return model_h_.dim(); }
    const NevanlinnaModel& model_h() const { return model_h_; }
    const NevanlinnaModel& model_g() const { return model_g_; }

    // Roles of M and tau exchanged.
    CoupledSystem swapped() const;

    std::vector<double> exceptional_points() const;

private:
    struct Unchecked {};
    CoupledSystem(NevanlinnaModel model_h, NevanlinnaModel model_g, Unchecked);

    NevanlinnaModel model_h_;
    NevanlinnaModel model_g_;
};

struct ChannelScatterValue {
    double lambda = 0.0;
    SpectralSubspace hm;  // ran Im M(lambda + i0)
    SpectralSubspace hg;  // ran Im tau(lambda + i0)
    ComplexMatrix t11, t12, t21, t22;
    ComplexMatrix s_full;  // order (H_M, H_tau)
    ComplexMatrix s_h;
    ComplexMatrix s_g;
    double xi_tilde = 0.0;
    double eta_tau = 0.0;  // eta_{-tau(lambda)}(lambda)
    double eta_m = 0.0;    // eta_{-M(lambda)}(lambda)
};

// S(lambda) = I - 2i [T_ij] with T built from (M + tau)^-1 and the two
// square roots sqrt(Im M), sqrt(Im tau).
ChannelScatterValue coupled_scattering(const CoupledSystem& sys, double lambda, double tol_rel = kDefaultRankTol);

// k = 0 representative Im tr log(M(lambda + i0) + tau(lambda + i0)) / pi.
double coupled_ssf(const CoupledSystem& sys, double lambda);

struct StrausTraces {
    Complex h;  // -tr((M + tau)^-1 M')
    Complex g;  // -tr((M + tau)^-1 tau')
};

StrausTraces straus_traces(const CoupledSystem& sys, Complex z);

enum class Channel { H, G };

// Channel H: Im tr log(M(lambda + i0) + tau(mu + i0)) / pi.
// Channel G: Im tr log(tau(lambda + i0) + M(mu + i0)) / pi.
double eta_channel(const CoupledSystem& sys, Channel which, double mu, double lambda);

struct CoupledBkReport {
    IdentityReport forward;  // det S_H = conj(det S_G) exp(-2 pi i xi)
    IdentityReport dual;     // det S_G = conj(det S_H) exp(-2 pi i xi)
};

CoupledBkReport verify_coupled_bk(const CoupledSystem& sys, std::span<const double> grid,
                                  double tol_rel = kDefaultRankTol);

// straus h + g against -int xi_tilde / (t - z)^2 dt.
TraceCheck verify_coupled_trace_formula(const CoupledSystem& sys, Complex z, double tol = 1e-7);

}  // namespace krein
