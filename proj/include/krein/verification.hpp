#pragma once

#include <string>
#include <vector>

#include "krein/linalg.hpp"
#include "krein/quadrature.hpp"

namespace krein {

struct PointResidual {
    double lambda;
    double residual;
};

struct PointIssue {
    double lambda;
    std::string reason;
};

// Residuals of one pointwise identity over a grid. Exceptional and singular
// points are skipped (the identities hold almost everywhere); any other
// numerical failure is recorded in `failed`.
struct IdentityReport {
    std::vector<PointResidual> residuals;
    std::vector<PointIssue> skipped;
    std::vector<PointIssue> failed;

    double max_residual() const {
        double m = 0.0;
        for (const auto& r : residuals) m = r.residual > m ? r.residual : m;
        return m;
    }
    bool passes(double tol) const { return failed.empty() && !residuals.empty() && max_residual() <= tol; }
};

// Both sides of a trace formula at one spectral point z.
struct TraceCheck {
    Complex z;
    Complex lhs;  // closed form through the Weyl function
    Complex rhs;  // -int xi(t) / (t - z)^2 dt by quadrature
    double residual = 0.0;
    QuadratureResult quadrature;
};

}  // namespace krein
