#include "krein/coupled.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "krein/errors.hpp"
#include "krein/sweep.hpp"

namespace krein {

namespace {

double input_scale(const CoupledSystem& sys, double mu, double lambda) {
    return sys.model_h().coefficient_scale() + sys.model_g().coefficient_scale() + std::abs(mu) + std::abs(lambda);
}

}  // namespace

CoupledSystem::CoupledSystem(NevanlinnaModel model_h, NevanlinnaModel model_g, Unchecked)
    : model_h_(std::move(model_h)), model_g_(std::move(model_g)) {}

CoupledSystem::CoupledSystem(NevanlinnaModel model_h, NevanlinnaModel model_g)
    : CoupledSystem(std::move(model_h), std::move(model_g), Unchecked{}) {
    if (model_h_.dim() != model_g_.dim()) {
        std::ostringstream os;
        os << "coupled models must have equal dimension (" << model_h_.dim() << " vs " << model_g_.dim() << ")";
        throw DimensionError(os.str());
    }
    for (const auto* m : {&model_h_, &model_g_}) {
        const auto issues = m->validate();
        if (!issues.empty()) throw ValidationError("model '" + m->name() + "': " + issues.front());
    }
}

CoupledSystem CoupledSystem::swapped() const { return CoupledSystem(model_g_, model_h_, Unchecked{}); }

std::vector<double> CoupledSystem::exceptional_points() const {
    auto pts = model_h_.exceptional_points();
    const auto more = model_g_.exceptional_points();
    pts.insert(pts.end(), more.begin(), more.end());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

ChannelScatterValue coupled_scattering(const CoupledSystem& sys, double lambda, double tol_rel) {
    ChannelScatterValue out;
    out.lambda = lambda;
    const ComplexMatrix wm = sys.model_h().boundary_value(lambda);
    const ComplexMatrix wt = sys.model_g().boundary_value(lambda);
    const ComplexMatrix sum = wm + wt;
    const ComplexMatrix resolvent = checked_inverse(sum, "M(lambda + i0) + tau(lambda + i0)");

    const ComplexMatrix im_m = imag_part(wm);
    const ComplexMatrix im_t = imag_part(wt);
    out.hm = range_projection(im_m, tol_rel);
    out.hg = range_projection(im_t, tol_rel);
    const ComplexMatrix qm = psd_sqrt(im_m) * out.hm.basis;
    const ComplexMatrix qg = psd_sqrt(im_t) * out.hg.basis;

    out.t11 = qm.adjoint() * resolvent * qm;
    out.t12 = qm.adjoint() * resolvent * qg;
    out.t21 = qg.adjoint() * resolvent * qm;
    out.t22 = qg.adjoint() * resolvent * qg;

    const auto rh = qm.cols();
    const auto rg = qg.cols();
    const Complex minus_two_i(0.0, -2.0);
    out.s_full = ComplexMatrix::Identity(rh + rg, rh + rg);
    out.s_full.topLeftCorner(rh, rh) += minus_two_i * out.t11;
    out.s_full.topRightCorner(rh, rg) += minus_two_i * out.t12;
    out.s_full.bottomLeftCorner(rg, rh) += minus_two_i * out.t21;
    out.s_full.bottomRightCorner(rg, rg) += minus_two_i * out.t22;
    out.s_h = out.s_full.topLeftCorner(rh, rh);
    out.s_g = out.s_full.bottomRightCorner(rg, rg);

    out.xi_tilde = log_phase(sum, input_scale(sys, lambda, lambda));
    out.eta_tau = eta_channel(sys, Channel::H, lambda, lambda);
    out.eta_m = eta_channel(sys, Channel::G, lambda, lambda);
    return out;
}

double coupled_ssf(const CoupledSystem& sys, double lambda) {
    return log_phase(sys.model_h().boundary_value(lambda) + sys.model_g().boundary_value(lambda),
                     input_scale(sys, lambda, lambda));
}

StrausTraces straus_traces(const CoupledSystem& sys, Complex z) {
    if (z.imag() == 0.0) throw DomainError("straus_traces requires Im z != 0");
    const ComplexMatrix resolvent =
        checked_inverse(sys.model_h().eval(z) + sys.model_g().eval(z), "M(z) + tau(z)");
    return StrausTraces{
        -(resolvent * sys.model_h().derivative(z)).trace(),
        -(resolvent * sys.model_g().derivative(z)).trace(),
    };
}

double eta_channel(const CoupledSystem& sys, Channel which, double mu, double lambda) {
    const NevanlinnaModel& moving = which == Channel::H ? sys.model_h() : sys.model_g();
    const NevanlinnaModel& frozen = which == Channel::H ? sys.model_g() : sys.model_h();
    return log_phase(moving.boundary_value(lambda) + frozen.boundary_value(mu), input_scale(sys, mu, lambda));
}

CoupledBkReport verify_coupled_bk(const CoupledSystem& sys, std::span<const double> grid, double tol_rel) {
    const auto records = sweep_coupled(sys, grid, tol_rel);
    return CoupledBkReport{
        collect(records, [](const CoupledRecord& r) { return r.residual_bk; }),
        collect(records, [](const CoupledRecord& r) { return r.residual_bk_dual; }),
    };
}

TraceCheck verify_coupled_trace_formula(const CoupledSystem& sys, Complex z, double tol) {
    TraceCheck out;
    out.z = z;
    const auto traces = straus_traces(sys, z);
    out.lhs = traces.h + traces.g;
    auto ssf = [&](double t) -> std::optional<double> {
        try {
            return coupled_ssf(sys, t);
        } catch (const ExceptionalPointError&) {
            return std::nullopt;
        } catch (const SingularError&) {
            return std::nullopt;
        }
    };
    const auto breaks = sys.exceptional_points();
    out.quadrature = integrate_ssf_kernel(ssf, z, static_cast<double>(sys.dim()), tol, breaks);
    out.rhs = out.quadrature.value;
    out.residual = std::abs(out.lhs - out.rhs);
    return out;
}

}  // namespace krein
