#include "krein/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <sstream>

#include "krein/errors.hpp"

namespace krein {
namespace {

// Kronrod 15-point abscissae on [-1, 1] (positive half, descending) and
// weights; every second abscissa is a Gauss 7-point node.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a;
    double b;
    ComplexVector value;
    double error;
};

struct PanelOrder {
    bool operator()(const Panel& x, const Panel& y) const {
        if (x.error != y.error) return x.error < y.error;
        return x.a > y.a;
    }
};

Panel gauss_kronrod(const VectorIntegrand& f, std::size_t dim, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    ComplexVector fc = f(center);
    ComplexVector kronrod = kWgk[7] * fc;
    ComplexVector gauss = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const ComplexVector f1 = f(center - dx);
        const ComplexVector f2 = f(center + dx);
        kronrod += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
    }
    kronrod *= half;
    gauss *= half;
    const double err = dim == 0 ? 0.0 : (kronrod - gauss).cwiseAbs().maxCoeff();
    return Panel{a, b, std::move(kronrod), err};
}

double max_abs(const ComplexVector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

}  // namespace

VectorQuadratureResult integrate_panels(const VectorIntegrand& f, std::size_t dim,
                                        std::span<const double> breakpoints,
                                        const QuadratureOptions& opts) {
    if (breakpoints.size() < 2) throw QuadratureError("integrate_panels needs at least two breakpoints");
    std::priority_queue<Panel, std::vector<Panel>, PanelOrder> queue;
    std::vector<Panel> settled;
    long evaluations = 0;
    for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
        if (!(breakpoints[k] < breakpoints[k + 1])) continue;
        queue.push(gauss_kronrod(f, dim, breakpoints[k], breakpoints[k + 1]));
        evaluations += 15;
    }

    // Running sums are only used for the stopping test; the reported value is
    // re-summed in left-to-right panel order.
    ComplexVector running = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
    double running_err = 0.0;
    {
        auto copy = queue;
        while (!copy.empty()) {
            running += copy.top().value;
            running_err += copy.top().error;
            copy.pop();
        }
    }

    int subdivisions = 0;
    bool converged = false;
    while (true) {
        const double target = std::max(opts.abs_tol, opts.rel_tol * max_abs(running));
        if (running_err <= target) {
            converged = true;
            break;
        }
        if (queue.empty() || subdivisions >= opts.max_subdivisions) break;
        Panel worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b) ||
            (worst.b - worst.a) <= 1e-15 * std::max(std::abs(worst.a), std::abs(worst.b))) {
            // Cannot be split further in double precision.
            settled.push_back(std::move(worst));
            continue;
        }
        Panel left = gauss_kronrod(f, dim, worst.a, mid);
        Panel right = gauss_kronrod(f, dim, mid, worst.b);
        evaluations += 30;
        ++subdivisions;
        running += left.value + right.value - worst.value;
        running_err += left.error + right.error - worst.error;
        queue.push(std::move(left));
        queue.push(std::move(right));
    }

    while (!queue.empty()) {
        settled.push_back(queue.top());
        queue.pop();
    }
    std::sort(settled.begin(), settled.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    VectorQuadratureResult result;
    result.value = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
    for (const auto& p : settled) {
        result.value += p.value;
        result.abs_error_estimate += p.error;
    }
    result.evaluations = evaluations;
    const double target = std::max(opts.abs_tol, opts.rel_tol * max_abs(result.value));
    result.converged = converged || result.abs_error_estimate <= target;
    if (!result.converged) {
        std::ostringstream os;
        os << "adaptive quadrature did not converge after " << subdivisions
           << " subdivisions (error estimate " << result.abs_error_estimate << ", target " << target << ")";
        throw QuadratureError(os.str());
    }
    return result;
}

VectorQuadratureResult integrate_halfline(const VectorIntegrand& f, std::size_t dim,
                                          const QuadratureOptions& opts) {
    auto mapped = [&](double u) -> ComplexVector {
        const double one_minus = 1.0 - u;
        const double t = u / one_minus;
        return f(t) / (one_minus * one_minus);
    };
    // Geometric refinement towards both ends: near-singular integrands peak at
    // t ~ |smallest eigenvalue| and slow tails live close to u = 1.
    static constexpr std::array<double, 12> kBreaks = {0.0,  1e-8, 1e-6, 1e-4,   1e-2,     0.1,
                                                       0.5,  0.9,  0.99, 0.9999, 0.999999, 1.0};
    return integrate_panels(mapped, dim, kBreaks, opts);
}

QuadratureResult integrate_halfline(const ScalarIntegrand& f, double tol) {
    QuadratureOptions opts;
    opts.abs_tol = tol;
    opts.rel_tol = tol;
    auto vf = [&](double t) {
        ComplexVector v(1);
        v(0) = f(t);
        return v;
    };
    const auto r = integrate_halfline(vf, 1, opts);
    return QuadratureResult{r.value(0), r.abs_error_estimate, r.evaluations, r.converged, {}};
}

namespace {

constexpr int kJumpSamples = 16;
constexpr std::size_t kMaxJumps = 512;
constexpr double kJumpWidth = 1e-12;

void bisect_jump(const SsfFunction& ssf, double a, double fa, double b, double fb, std::vector<double>& out) {
    if (std::abs(fa - fb) < 0.5 || out.size() >= kMaxJumps) return;
    const double m = 0.5 * (a + b);
    if (b - a <= kJumpWidth * std::max(1.0, std::abs(m))) {
        out.push_back(m);
        return;
    }
    std::optional<double> fm;
    try {
        fm = ssf(m);
    } catch (const Error&) {
        // Too close to the jump for ssf to be evaluated.
    }
    if (!fm) {
        out.push_back(m);
        return;
    }
    bisect_jump(ssf, a, fa, m, *fm, out);
    bisect_jump(ssf, m, *fm, b, fb, out);
}

std::vector<double> locate_jumps(const SsfFunction& ssf, const std::vector<double>& points) {
    std::vector<double> out;
    std::optional<double> prev_t, prev_v;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        const double a = points[i];
        const double h = (points[i + 1] - a) / kJumpSamples;
        for (int k = 0; k < kJumpSamples; ++k) {
            const double t = a + (k + 0.5) * h;
            const auto v = ssf(t);
            if (!v) continue;
            if (prev_v) bisect_jump(ssf, *prev_t, *prev_v, t, *v, out);
            prev_t = t;
            prev_v = v;
        }
    }
    return out;
}

}  // namespace

QuadratureResult integrate_ssf_kernel(const SsfFunction& ssf, Complex z, double bound, double tol,
                                      std::span<const double> breakpoints) {
    if (z.imag() == 0.0) throw DomainError("integrate_ssf_kernel requires Im z != 0");
    if (!(tol > 0.0)) throw DomainError("integrate_ssf_kernel requires tol > 0");
    const double center = z.real();
    bound = std::max(bound, 0.0);

    double t_max = std::max(64.0, 4.0 * std::abs(z));
    while (2.0 * bound / (t_max - std::abs(center)) > 0.5 * tol) t_max *= 2.0;

    std::vector<double> points = {-t_max, t_max, center};
    const double width = 0.5 * std::max(std::abs(z.imag()), 1.0);
    for (double step = width; step < t_max; step *= 2.0) {
        if (center - step > -t_max) points.push_back(center - step);
        if (center + step < t_max) points.push_back(center + step);
    }
    for (double p : breakpoints) {
        if (p > -t_max && p < t_max) points.push_back(p);
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    const auto jumps = locate_jumps(ssf, points);
    points.insert(points.end(), jumps.begin(), jumps.end());
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());

    std::vector<double> skipped;
    auto sample = [&](double t) -> double {
        if (auto v = ssf(t)) return *v;
        if (skipped.size() >= 16) {
            throw QuadratureError("spectral shift function undefined at more than 16 quadrature nodes");
        }
        skipped.push_back(t);
        const double delta = 1e-9 * std::max(1.0, std::abs(t));
        auto lo = ssf(t - delta);
        auto hi = ssf(t + delta);
        if (!lo || !hi) {
            std::ostringstream os;
            os.precision(17);
            os << "spectral shift function undefined in a neighbourhood of t = " << t;
            throw QuadratureError(os.str());
        }
        return 0.5 * (*lo + *hi);
    };
    auto integrand = [&](double t) {
        ComplexVector v(1);
        const Complex d = t - z;
        v(0) = -sample(t) / (d * d);
        return v;
    };
    QuadratureOptions opts;
    opts.abs_tol = 0.5 * tol;
    opts.rel_tol = 0.0;
    opts.max_subdivisions = 2000;
    const auto r = integrate_panels(integrand, 1, points, opts);
    QuadratureResult out;
    out.value = r.value(0);
    out.abs_error_estimate = r.abs_error_estimate + 2.0 * bound / (t_max - std::abs(center));
    out.evaluations = r.evaluations;
    out.converged = r.converged;
    out.skipped_points = std::move(skipped);
    return out;
}

}  // namespace krein
