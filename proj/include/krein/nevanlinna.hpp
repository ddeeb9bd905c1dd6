#pragma once

#include <string>
#include <variant>
#include <vector>

#include "krein/linalg.hpp"

namespace krein {

// Closed-form Herglotz building blocks. Each evaluates exactly off the real
// axis and has an exact boundary value M(lambda + i0) away from its
// exceptional points.

// C for Im lambda > 0, C* for Im lambda < 0. Requires Im C >= 0.
struct ConstantTerm {
    ComplexMatrix C;
};

// A + lambda B with A Hermitian, B >= 0.
struct AffineTerm {
    ComplexMatrix A;
    ComplexMatrix B;
};

// G / (t - lambda), G >= 0.
struct PoleTerm {
    double t = 0.0;
    ComplexMatrix G;
};

// R Log((b - lambda) / (a - lambda)), R >= 0, a < b. Im of the boundary value
// is pi R on (a, b) and zero outside.
struct AcBoxTerm {
    double a = 0.0;
    double b = 1.0;
    ComplexMatrix R;
};

// G i sqrt(lambda) on the branch Im sqrt(lambda) >= 0, G >= 0.
struct SqrtTerm {
    ComplexMatrix G;
};

using HerglotzTerm = std::variant<ConstantTerm, AffineTerm, PoleTerm, AcBoxTerm, SqrtTerm>;

const char* term_kind(const HerglotzTerm& term);

// Matrix-valued Nevanlinna function given as a finite sum of Herglotz terms.
// Immutable after construction; all members are safe to call concurrently.
//
// The constructor only checks shapes. Use validate() (or the model_io loader,
// which calls it) to check the Nevanlinna invariants.
class NevanlinnaModel {
public:
    NevanlinnaModel(int dim, std::vector<HerglotzTerm> terms, std::string name = {});

    int dim() const { return dim_; }
    const std::vector<HerglotzTerm>& terms() const { return terms_; }
    const std::string& name() const { return name_; }

    // M(lambda) for Im lambda != 0. Throws DomainError on the real axis.
    ComplexMatrix eval(Complex lambda) const;

    // M(lambda + i0). Throws ExceptionalPointError within 1e-12 * scale of a
    // pole, box endpoint or (for sqrt terms) zero.
    ComplexMatrix boundary_value(double lambda) const;

    // dM/dlambda for Im lambda != 0.
    ComplexMatrix derivative(Complex lambda) const;

    // Poles, box endpoints and branch points, sorted and deduplicated.
    std::vector<double> exceptional_points() const;

    // 1 + max coefficient norm over all terms; |lambda| is added per query.
    double coefficient_scale() const { return coefficient_scale_; }

    // Human-readable invariant violations; empty iff the model is valid.
    std::vector<std::string> validate() const;

private:
    int dim_;
    std::vector<HerglotzTerm> terms_;
    std::string name_;
    double coefficient_scale_ = 1.0;
};

// Block-diagonal model diag(m1, m2). Poles with equal location are merged.
NevanlinnaModel direct_sum(const NevanlinnaModel& m1, const NevanlinnaModel& m2);

}  // namespace krein
