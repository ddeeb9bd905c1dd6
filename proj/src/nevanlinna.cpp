#include "krein/nevanlinna.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "krein/errors.hpp"

namespace krein {
namespace {

constexpr double kExceptionalRel = 1e-12;
constexpr double kPsdRel = 1e-12;
constexpr double kNevanlinnaRel = 1e-12;

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// sqrt on the branch Im >= 0.
Complex upper_sqrt(Complex z) {
    Complex s = std::sqrt(z);
    if (s.imag() < 0.0) s = -s;
    return s;
}

double coefficient_norm(const HerglotzTerm& term) {
    return std::visit(Overloaded{
                          [](const ConstantTerm& c) { return norm2(c.C); },
                          [](const AffineTerm& c) { return std::max(norm2(c.A), norm2(c.B)); },
                          [](const PoleTerm& c) { return std::max(norm2(c.G), std::abs(c.t)); },
                          [](const AcBoxTerm& c) {
                              return std::max({norm2(c.R), std::abs(c.a), std::abs(c.b)});
                          },
                          [](const SqrtTerm& c) { return norm2(c.G); },
                      },
                      term);
}

void check_shape(const ComplexMatrix& m, int dim, std::size_t index, const char* field) {
    if (m.rows() != dim || m.cols() != dim) {
        std::ostringstream os;
        os << "term " << index << ": " << field << " is " << m.rows() << "x" << m.cols()
           << ", expected " << dim << "x" << dim;
        throw DimensionError(os.str());
    }
}

bool hermitian(const ComplexMatrix& m) {
    return (m - m.adjoint()).norm() <= kPsdRel * std::max(1.0, norm2(m));
}

bool psd(const ComplexMatrix& m) {
    return hermitian(m) && min_eigenvalue(m) >= -kPsdRel * norm2(m);
}

bool finite(const ComplexMatrix& m) { return m.allFinite(); }

ComplexMatrix pad(const ComplexMatrix& m, int total, int offset) {
    ComplexMatrix out = ComplexMatrix::Zero(total, total);
    out.block(offset, offset, m.rows(), m.cols()) = m;
    return out;
}

}  // namespace

const char* term_kind(const HerglotzTerm& term) {
    return std::visit(Overloaded{
                          [](const ConstantTerm&) { return "constant"; },
                          [](const AffineTerm&) { return "affine"; },
                          [](const PoleTerm&) { return "pole"; },
                          [](const AcBoxTerm&) { return "acbox"; },
                          [](const SqrtTerm&) { return "sqrt"; },
                      },
                      term);
}

NevanlinnaModel::NevanlinnaModel(int dim, std::vector<HerglotzTerm> terms, std::string name)
    : dim_(dim), terms_(std::move(terms)), name_(std::move(name)) {
    if (dim_ < 1) throw DimensionError("model dimension must be positive");
    for (std::size_t k = 0; k < terms_.size(); ++k) {
        std::visit(Overloaded{
                       [&](const ConstantTerm& c) { check_shape(c.C, dim_, k, "C"); },
                       [&](const AffineTerm& c) {
                           check_shape(c.A, dim_, k, "A");
                           check_shape(c.B, dim_, k, "B");
                       },
                       [&](const PoleTerm& c) { check_shape(c.G, dim_, k, "G"); },
                       [&](const AcBoxTerm& c) { check_shape(c.R, dim_, k, "R"); },
                       [&](const SqrtTerm& c) { check_shape(c.G, dim_, k, "G"); },
                   },
                   terms_[k]);
        coefficient_scale_ = std::max(coefficient_scale_, 1.0 + coefficient_norm(terms_[k]));
    }
}

ComplexMatrix NevanlinnaModel::eval(Complex lambda) const {
    if (lambda.imag() == 0.0) {
        throw DomainError("eval requires Im lambda != 0; use boundary_value on the real axis");
    }
    const bool upper = lambda.imag() > 0.0;
    ComplexMatrix m = ComplexMatrix::Zero(dim_, dim_);
    for (const auto& term : terms_) {
        std::visit(Overloaded{
                       [&](const ConstantTerm& c) { m += upper ? c.C : ComplexMatrix(c.C.adjoint()); },
                       [&](const AffineTerm& c) { m += c.A + lambda * c.B; },
                       [&](const PoleTerm& c) { m += c.G / (c.t - lambda); },
                       [&](const AcBoxTerm& c) { m += std::log((c.b - lambda) / (c.a - lambda)) * c.R; },
                       [&](const SqrtTerm& c) { m += (kI * upper_sqrt(lambda)) * c.G; },
                   },
                   term);
    }
    return m;
}

ComplexMatrix NevanlinnaModel::boundary_value(double lambda) const {
    const double guard = kExceptionalRel * (coefficient_scale_ + std::abs(lambda));
    auto check = [&](double point, const char* what) {
        if (std::abs(lambda - point) <= guard) {
            std::ostringstream os;
            os.precision(17);
            os << "lambda = " << lambda << " is an exceptional point (" << what << " at " << point
               << ") of model '" << name_ << "'";
            throw ExceptionalPointError(os.str());
        }
    };
    ComplexMatrix m = ComplexMatrix::Zero(dim_, dim_);
    for (const auto& term : terms_) {
        std::visit(Overloaded{
                       [&](const ConstantTerm& c) { m += c.C; },
                       [&](const AffineTerm& c) { m += c.A + lambda * c.B; },
                       [&](const PoleTerm& c) {
                           check(c.t, "pole");
                           m += c.G / (c.t - lambda);
                       },
                       [&](const AcBoxTerm& c) {
                           check(c.a, "box endpoint");
                           check(c.b, "box endpoint");
                           if (lambda > c.a && lambda < c.b) {
                               m += Complex(std::log((c.b - lambda) / (lambda - c.a)), kPi) * c.R;
                           } else {
                               m += std::log((c.b - lambda) / (c.a - lambda)) * c.R;
                           }
                       },
                       [&](const SqrtTerm& c) {
                           check(0.0, "branch point");
                           if (lambda > 0.0) {
                               m += Complex(0.0, std::sqrt(lambda)) * c.G;
                           } else {
                               m += -std::sqrt(-lambda) * c.G;
                           }
                       },
                   },
                   term);
    }
    return m;
}

ComplexMatrix NevanlinnaModel::derivative(Complex lambda) const {
    if (lambda.imag() == 0.0) throw DomainError("derivative requires Im lambda != 0");
    ComplexMatrix m = ComplexMatrix::Zero(dim_, dim_);
    for (const auto& term : terms_) {
        std::visit(Overloaded{
                       [&](const ConstantTerm&) {},
                       [&](const AffineTerm& c) { m += c.B; },
                       [&](const PoleTerm& c) { m += c.G / ((c.t - lambda) * (c.t - lambda)); },
                       [&](const AcBoxTerm& c) {
                           m += (1.0 / (c.a - lambda) - 1.0 / (c.b - lambda)) * c.R;
                       },
                       [&](const SqrtTerm& c) { m += (kI / (2.0 * upper_sqrt(lambda))) * c.G; },
                   },
                   term);
    }
    return m;
}

std::vector<double> NevanlinnaModel::exceptional_points() const {
    std::vector<double> pts;
    for (const auto& term : terms_) {
        std::visit(Overloaded{
                       [](const ConstantTerm&) {},
                       [](const AffineTerm&) {},
                       [&](const PoleTerm& c) { pts.push_back(c.t); },
                       [&](const AcBoxTerm& c) {
                           pts.push_back(c.a);
                           pts.push_back(c.b);
                       },
                       [&](const SqrtTerm&) { pts.push_back(0.0); },
                   },
                   term);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

std::vector<std::string> NevanlinnaModel::validate() const {
    std::vector<std::string> out;
    auto report = [&](std::size_t k, const HerglotzTerm& term, const std::string& what) {
        std::ostringstream os;
        os << "term " << k << " (" << term_kind(term) << "): " << what;
        out.push_back(os.str());
    };
    std::vector<double> poles;
    for (std::size_t k = 0; k < terms_.size(); ++k) {
        const auto& term = terms_[k];
        std::visit(Overloaded{
                       [&](const ConstantTerm& c) {
                           if (!finite(c.C)) return report(k, term, "non-finite coefficient");
                           const ComplexMatrix im = imag_part(c.C);
                           if (min_eigenvalue(im) < -kPsdRel * norm2(c.C)) {
                               report(k, term, "Im C ⪰ 0 fails");
                           }
                       },
                       [&](const AffineTerm& c) {
                           if (!finite(c.A) || !finite(c.B)) return report(k, term, "non-finite coefficient");
                           if (!hermitian(c.A)) report(k, term, "A = A* fails");
                           if (!psd(c.B)) report(k, term, "B ⪰ 0 fails");
                       },
                       [&](const PoleTerm& c) {
                           if (!finite(c.G) || !std::isfinite(c.t)) {
                               return report(k, term, "non-finite coefficient");
                           }
                           if (!psd(c.G)) report(k, term, "G ⪰ 0 fails");
                           poles.push_back(c.t);
                       },
                       [&](const AcBoxTerm& c) {
                           if (!finite(c.R) || !std::isfinite(c.a) || !std::isfinite(c.b)) {
                               return report(k, term, "non-finite coefficient");
                           }
                           if (!(c.a < c.b)) report(k, term, "a < b fails");
                           if (!psd(c.R)) report(k, term, "R ⪰ 0 fails");
                       },
                       [&](const SqrtTerm& c) {
                           if (!finite(c.G)) return report(k, term, "non-finite coefficient");
                           if (!psd(c.G)) report(k, term, "G ⪰ 0 fails");
                       },
                   },
                   term);
    }
    std::sort(poles.begin(), poles.end());
    for (std::size_t k = 1; k < poles.size(); ++k) {
        if (poles[k] == poles[k - 1]) {
            std::ostringstream os;
            os << "pole locations not distinct (t = " << poles[k] << " repeated)";
            out.push_back(os.str());
        }
    }
    if (!out.empty()) return out;

    // Sample the Nevanlinna property on a fixed pseudorandom set in C+.
    std::mt19937_64 rng(0x5eed5eedULL);
    std::uniform_real_distribution<double> re(-10.0, 10.0);
    std::uniform_real_distribution<double> log_im(-2.0, 1.0);
    for (int k = 0; k < 32; ++k) {
        const Complex lambda(re(rng), std::pow(10.0, log_im(rng)));
        const ComplexMatrix m = eval(lambda);
        if (!m.allFinite() || min_eigenvalue(imag_part(m)) < -kNevanlinnaRel * norm2(m)) {
            std::ostringstream os;
            os.precision(6);
            os << "Nevanlinna property Im M(lambda) ⪰ 0 fails at lambda = " << lambda.real() << "+"
               << lambda.imag() << "i";
            out.push_back(os.str());
            break;
        }
    }
    return out;
}

NevanlinnaModel direct_sum(const NevanlinnaModel& m1, const NevanlinnaModel& m2) {
    const int n = m1.dim() + m2.dim();
    std::vector<HerglotzTerm> terms;
    std::map<double, std::size_t> pole_index;
    auto add = [&](const HerglotzTerm& term, int offset) {
        std::visit(Overloaded{
                       [&](const ConstantTerm& c) { terms.push_back(ConstantTerm{pad(c.C, n, offset)}); },
                       [&](const AffineTerm& c) {
                           terms.push_back(AffineTerm{pad(c.A, n, offset), pad(c.B, n, offset)});
                       },
                       [&](const PoleTerm& c) {
                           auto it = pole_index.find(c.t);
                           if (it != pole_index.end()) {
                               std::get<PoleTerm>(terms[it->second]).G += pad(c.G, n, offset);
                           } else {
                               pole_index.emplace(c.t, terms.size());
                               terms.push_back(PoleTerm{c.t, pad(c.G, n, offset)});
                           }
                       },
                       [&](const AcBoxTerm& c) { terms.push_back(AcBoxTerm{c.a, c.b, pad(c.R, n, offset)}); },
                       [&](const SqrtTerm& c) { terms.push_back(SqrtTerm{pad(c.G, n, offset)}); },
                   },
                   term);
    };
    for (const auto& t : m1.terms()) add(t, 0);
    for (const auto& t : m2.terms()) add(t, m1.dim());
    std::string name = m1.name() + "+" + m2.name();
    return NevanlinnaModel(n, std::move(terms), std::move(name));
}

}  // namespace krein
