#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "krein/coupled.hpp"
#include "krein/dissipative.hpp"
#include "krein/parallel.hpp"
#include "krein/selfadjoint.hpp"

namespace krein {

// Uniform inclusive grid "A:B:N".
struct GridSpec {
    double start = 0.0;
    double stop = 0.0;
    int count = 1;

    std::vector<double> points() const;
    // Throws ParseError on malformed text, ValidationError on start >= stop
    // with count > 1 or count < 1.
    static GridSpec parse(std::string_view text);
};

enum class PointStatus { Ok, Skipped, Failed };

struct SelfAdjointRecord {
    double lambda = 0.0;
    PointStatus status = PointStatus::Ok;
    std::string reason;
    int rank = 0;
    Complex det{1.0, 0.0};
    double ssf = 0.0;
    double residual_bk = 0.0;  // |det S - exp(-2 pi i xi)|
    double unitarity = 0.0;    // ||S* S - I||
};

struct DissipativeRecord {
    double lambda = 0.0;
    PointStatus status = PointStatus::Ok;
    std::string reason;
    int rank_m = 0;
    int rank_d = 0;
    Complex det_sd{1.0, 0.0};
    Complex det_slp{1.0, 0.0};
    Complex det_full{1.0, 0.0};
    double eta = 0.0;
    double xi_dilation = 0.0;
    double residual_bk = 0.0;          // det S_D vs conj(det S_LP) exp(-2 pi i eta)
    double residual_bk_dual = 0.0;     // det S_LP vs conj(det S_D) exp(-2 pi i eta)
    double residual_full_bk = 0.0;     // det S_full vs exp(-2 pi i xi_dilation)
    double residual_dilation_ssf = 0.0;  // |exp(-2 pi i xi_dilation) - exp(-2 pi i eta)|
    double residual_adamyan_arov = 0.0;  // ||S_LP - W(lambda - i0)*||
    double unitarity = 0.0;            // s_full
    double sigma_max_sd = 0.0;
    double sigma_max_slp = 0.0;
};

struct CoupledRecord {
    double lambda = 0.0;
    PointStatus status = PointStatus::Ok;
    std::string reason;
    int rank_h = 0;
    int rank_g = 0;
    Complex det_sh{1.0, 0.0};
    Complex det_sg{1.0, 0.0};
    Complex det_full{1.0, 0.0};
    double xi = 0.0;
    double eta_tau = 0.0;
    double eta_m = 0.0;
    double residual_bk = 0.0;       // det S_H vs conj(det S_G) exp(-2 pi i xi)
    double residual_bk_dual = 0.0;  // det S_G vs conj(det S_H) exp(-2 pi i xi)
    double residual_full_bk = 0.0;  // det S_full vs exp(-2 pi i xi)
    double residual_eta_h = 0.0;    // exp-level eta_{-tau(lambda)}(lambda) vs xi
    double residual_eta_g = 0.0;    // exp-level eta_{-M(lambda)}(lambda) vs xi
    double unitarity = 0.0;
    double sigma_max_sh = 0.0;
    double sigma_max_sg = 0.0;
};

// Per-point kernels. They never throw krein::Error: exceptional and singular
// points come back Skipped, other numerical failures Failed.
SelfAdjointRecord evaluate_selfadjoint(const NevanlinnaModel& model, const SelfAdjointParameter& theta,
                                       double lambda, double tol_rel = kDefaultRankTol);
DissipativeRecord evaluate_dissipative(const NevanlinnaModel& model, const DissipativeParameter& dp,
                                       double lambda, double tol_rel = kDefaultRankTol);
CoupledRecord evaluate_coupled(const CoupledSystem& sys, double lambda, double tol_rel = kDefaultRankTol);

std::vector<SelfAdjointRecord> sweep_selfadjoint(const NevanlinnaModel& model, const SelfAdjointParameter& theta,
                                                 std::span<const double> grid, double tol_rel = kDefaultRankTol,
                                                 Execution exec = Execution::Parallel);
std::vector<DissipativeRecord> sweep_dissipative(const NevanlinnaModel& model, const DissipativeParameter& dp,
                                                 std::span<const double> grid, double tol_rel = kDefaultRankTol,
                                                 Execution exec = Execution::Parallel);
std::vector<CoupledRecord> sweep_coupled(const CoupledSystem& sys, std::span<const double> grid,
                                         double tol_rel = kDefaultRankTol, Execution exec = Execution::Parallel);

// Collects one residual column of a sweep into an IdentityReport.
template <class Record, class Field>
IdentityReport collect(const std::vector<Record>& records, Field field) {
    IdentityReport report;
    for (const auto& r : records) {
        switch (r.status) {
            case PointStatus::Ok:
                report.residuals.push_back({r.lambda, field(r)});
                break;
            case PointStatus::Skipped:
                report.skipped.push_back({r.lambda, r.reason});
                break;
            case PointStatus::Failed:
                report.failed.push_back({r.lambda, r.reason});
                break;
        }
    }
    return report;
}

}  // namespace krein
