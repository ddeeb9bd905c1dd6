#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "krein/linalg.hpp"

namespace krein {

struct QuadratureOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    int max_subdivisions = 2000;
};

struct QuadratureResult {
    Complex value;
    double abs_error_estimate = 0.0;
    long evaluations = 0;
    bool converged = false;
    std::vector<double> skipped_points;
};

struct VectorQuadratureResult {
    ComplexVector value;
    double abs_error_estimate = 0.0;
    long evaluations = 0;
    bool converged = false;
};

using VectorIntegrand = std::function<ComplexVector(double)>;
using ScalarIntegrand = std::function<Complex(double)>;

// A spectral shift function sampled pointwise; nullopt marks a point where it
// is undefined (exceptional point, singular M - Theta).
using SsfFunction = std::function<std::optional<double>(double)>;

// Global adaptive Gauss-Kronrod (G7K15) over the panels defined by the sorted
// breakpoints. The error estimate is the sum of |K15 - G7| (max-norm) over
// panels. Subdivision order is fixed, so results are bitwise reproducible.
// Throws QuadratureError when the tolerance is not met within
// max_subdivisions bisections.
VectorQuadratureResult integrate_panels(const VectorIntegrand& f, std::size_t dim,
                                        std::span<const double> breakpoints,
                                        const QuadratureOptions& opts = {});

// Integral over (0, inf) via t = u / (1 - u). f must decay like O(t^-2).
VectorQuadratureResult integrate_halfline(const VectorIntegrand& f, std::size_t dim,
                                          const QuadratureOptions& opts = {});
QuadratureResult integrate_halfline(const ScalarIntegrand& f, double tol);

// -int_R ssf(t) / (t - z)^2 dt for Im z != 0.
//
// The domain is truncated to [-T, T] with T grown until the tail bound
// 2 * bound / (T - |Re z|) is at most tol / 2, where bound is a uniform bound
// on |ssf|. Breakpoints (jumps of ssf, exceptional points) become panel
// boundaries; further integer jumps (eigenvalues in spectral gaps) are found by
// sampling each initial panel and bisecting between samples whose values
// differ by at least 1/2. A node where ssf is undefined is replaced by the mean of two
// valid evaluations at node -/+ delta and recorded in skipped_points; more than
// 16 such nodes raises QuadratureError.
QuadratureResult integrate_ssf_kernel(const SsfFunction& ssf, Complex z, double bound, double tol,
                                      std::span<const double> breakpoints = {});

}  // namespace krein
