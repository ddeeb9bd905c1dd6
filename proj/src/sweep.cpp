#include "krein/sweep.hpp"

#include <charconv>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "krein/errors.hpp"

namespace krein {
namespace {

// exp(-2 pi i x)
Complex phase(double x) { return std::polar(1.0, -2.0 * kPi * x); }

template <class Record, class Compute>
Record guarded(double lambda, Compute&& compute) {
    Record rec;
    rec.lambda = lambda;
    try {
        compute(rec);
    } catch (const ExceptionalPointError& e) {
        rec = Record{};
        rec.lambda = lambda;
        rec.status = PointStatus::Skipped;
        rec.reason = e.what();
    } catch (const SingularError& e) {
        rec = Record{};
        rec.lambda = lambda;
        rec.status = PointStatus::Skipped;
        rec.reason = e.what();
    } catch (const Error& e) {
        rec = Record{};
        rec.lambda = lambda;
        rec.status = PointStatus::Failed;
        rec.reason = e.what();
    }
    return rec;
}

double parse_double(std::string_view text, std::string_view what) {
    double v = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    if (!text.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || first == last) {
        throw ParseError("grid: cannot parse " + std::string(what) + " '" + std::string(text) + "'");
    }
    return v;
}

}  // namespace

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body, Execution exec) {
    if (exec == Execution::Serial) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::exception_ptr first_error;
    std::mutex guard;
    const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard<std::mutex> lock(guard);
            if (!first_error) first_error = std::current_exception();
        }
    }
    if (first_error) std::rethrow_exception(first_error);
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

std::vector<double> GridSpec::points() const {
    std::vector<double> pts(static_cast<std::size_t>(count));
    if (count == 1) {
        pts[0] = start;
        return pts;
    }
    const double step = (stop - start) / (count - 1);
    for (int k = 0; k < count; ++k) pts[static_cast<std::size_t>(k)] = start + k * step;
    pts.back() = stop;
    return pts;
}

GridSpec GridSpec::parse(std::string_view text) {
    const auto c1 = text.find(':');
    const auto c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
    if (c1 == std::string_view::npos || c2 == std::string_view::npos ||
        text.find(':', c2 + 1) != std::string_view::npos) {
        throw ParseError("grid must have the form A:B:N, got '" + std::string(text) + "'");
    }
    GridSpec g;
    g.start = parse_double(text.substr(0, c1), "start");
    g.stop = parse_double(text.substr(c1 + 1, c2 - c1 - 1), "stop");
    const auto count_text = text.substr(c2 + 1);
    const auto [ptr, ec] = std::from_chars(count_text.data(), count_text.data() + count_text.size(), g.count);
    if (ec != std::errc() || ptr != count_text.data() + count_text.size() || count_text.empty()) {
        throw ParseError("grid: cannot parse count '" + std::string(count_text) + "'");
    }
    if (g.count < 1) throw ValidationError("grid: count must be at least 1");
    if (g.count > 1 && !(g.start < g.stop)) throw ValidationError("grid: start < stop required when count > 1");
    return g;
}

SelfAdjointRecord evaluate_selfadjoint(const NevanlinnaModel& model, const SelfAdjointParameter& theta,
                                       double lambda, double tol_rel) {
    return guarded<SelfAdjointRecord>(lambda, [&](SelfAdjointRecord& rec) {
        const ScatterValue v = scattering_matrix(model, theta, lambda, tol_rel);
        rec.rank = v.subspace.rank;
        rec.det = v.det_s;
        rec.ssf = v.ssf;
        rec.residual_bk = std::abs(v.det_s - phase(v.ssf));
        rec.unitarity = unitarity_defect(v.s_matrix);
    });
}

DissipativeRecord evaluate_dissipative(const NevanlinnaModel& model, const DissipativeParameter& dp,
                                       double lambda, double tol_rel) {
    return guarded<DissipativeRecord>(lambda, [&](DissipativeRecord& rec) {
        const DilationScatterValue v = dilation_scattering(model, dp, lambda, tol_rel);
        rec.rank_m = v.hm.rank;
        rec.rank_d = dp.rank();
        rec.det_sd = det(v.s_d);
        rec.det_slp = det(v.s_lp);
        rec.det_full = det(v.s_full);
        rec.eta = v.eta_d;
        rec.xi_dilation = v.xi_dilation;
        const Complex eta_phase = phase(v.eta_d);
        rec.residual_bk = std::abs(rec.det_sd - std::conj(rec.det_slp) * eta_phase);
        rec.residual_bk_dual = std::abs(rec.det_slp - std::conj(rec.det_sd) * eta_phase);
        rec.residual_full_bk = std::abs(rec.det_full - phase(v.xi_dilation));
        rec.residual_dilation_ssf = std::abs(phase(v.xi_dilation) - eta_phase);
        const ComplexMatrix w = characteristic_function_boundary(model, dp, lambda);
        rec.residual_adamyan_arov = v.s_lp.size() == 0 ? 0.0 : norm2(v.s_lp - w.adjoint());
        rec.unitarity = unitarity_defect(v.s_full);
        rec.sigma_max_sd = max_singular_value(v.s_d);
        rec.sigma_max_slp = max_singular_value(v.s_lp);
    });
}

CoupledRecord evaluate_coupled(const CoupledSystem& sys, double lambda, double tol_rel) {
    return guarded<CoupledRecord>(lambda, [&](CoupledRecord& rec) {
        const ChannelScatterValue v = coupled_scattering(sys, lambda, tol_rel);
        rec.rank_h = v.hm.rank;
        rec.rank_g = v.hg.rank;
        rec.det_sh = det(v.s_h);
        rec.det_sg = det(v.s_g);
        rec.det_full = det(v.s_full);
        rec.xi = v.xi_tilde;
        rec.eta_tau = v.eta_tau;
        rec.eta_m = v.eta_m;
        const Complex xi_phase = phase(v.xi_tilde);
        rec.residual_bk = std::abs(rec.det_sh - std::conj(rec.det_sg) * xi_phase);
        rec.residual_bk_dual = std::abs(rec.det_sg - std::conj(rec.det_sh) * xi_phase);
        rec.residual_full_bk = std::abs(rec.det_full - xi_phase);
        rec.residual_eta_h = std::abs(phase(v.eta_tau) - xi_phase);
        rec.residual_eta_g = std::abs(phase(v.eta_m) - xi_phase);
        rec.unitarity = unitarity_defect(v.s_full);
        rec.sigma_max_sh = max_singular_value(v.s_h);
        rec.sigma_max_sg = max_singular_value(v.s_g);
    });
}

std::vector<SelfAdjointRecord> sweep_selfadjoint(const NevanlinnaModel& model, const SelfAdjointParameter& theta,
                                                 std::span<const double> grid, double tol_rel, Execution exec) {
    std::vector<SelfAdjointRecord> out(grid.size());
    for_each_index(
        grid.size(), [&](std::size_t i) { out[i] = evaluate_selfadjoint(model, theta, grid[i], tol_rel); }, exec);
    return out;
}

std::vector<DissipativeRecord> sweep_dissipative(const NevanlinnaModel& model, const DissipativeParameter& dp,
                                                 std::span<const double> grid, double tol_rel, Execution exec) {
    std::vector<DissipativeRecord> out(grid.size());
    for_each_index(
        grid.size(), [&](std::size_t i) { out[i] = evaluate_dissipative(model, dp, grid[i], tol_rel); }, exec);
    return out;
}

std::vector<CoupledRecord> sweep_coupled(const CoupledSystem& sys, std::span<const double> grid, double tol_rel,
                                         Execution exec) {
    std::vector<CoupledRecord> out(grid.size());
    for_each_index(
        grid.size(), [&](std::size_t i) { out[i] = evaluate_coupled(sys, grid[i], tol_rel); }, exec);
    return out;
}

}  // namespace krein
