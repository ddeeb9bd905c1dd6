#pragma once

// Fixture models, parameter sets and seeded random generators shared by the
// unit tests and the acceptance suite.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "krein/coupled.hpp"
#include "krein/dissipative.hpp"
#include "krein/nevanlinna.hpp"
#include "krein/selfadjoint.hpp"

namespace krein::testing {

inline ComplexMatrix scalar(Complex c) { return ComplexMatrix::Constant(1, 1, c); }

inline NevanlinnaModel constant_model(Complex c, std::string name = "constant") {
    return NevanlinnaModel(1, {ConstantTerm{scalar(c)}}, std::move(name));
}

inline NevanlinnaModel constant_i() { return constant_model(Complex(0, 1), "constant-i"); }

inline NevanlinnaModel affine_identity() {
    return NevanlinnaModel(1, {AffineTerm{scalar(0.0), scalar(1.0)}}, "affine");
}

inline NevanlinnaModel halfline() { return NevanlinnaModel(1, {SqrtTerm{scalar(1.0)}}, "halfline"); }

inline NevanlinnaModel pole_model() {
    return NevanlinnaModel(1, {AffineTerm{scalar(0.5), scalar(1.0)}, PoleTerm{1.5, scalar(2.0)}}, "pole");
}

inline NevanlinnaModel acbox_model() {
    ComplexMatrix r(2, 2);
    r << 1.0, Complex(0.3, 0.2), Complex(0.3, -0.2), 0.5;
    ComplexMatrix c(2, 2);
    c << 0.2, 0.0, 0.0, -0.4;
    return NevanlinnaModel(2, {AcBoxTerm{-1.0, 2.0, r}, ConstantTerm{c}}, "acbox");
}

// Every fixture model: the scalar building blocks, the 2x2 ac-box model and
// 2x2 direct sums.
inline std::vector<NevanlinnaModel> fixture_models() {
    return {constant_i(),
            affine_identity(),
            pole_model(),
            acbox_model(),
            halfline(),
            direct_sum(halfline(), constant_i()),
            direct_sum(affine_identity(), halfline()),
            direct_sum(pole_model(), constant_i())};
}

// Full matrix, proper subspace (only for dim >= 2) and pure relation.
inline std::vector<SelfAdjointParameter> fixture_parameters(int dim) {
    std::vector<SelfAdjointParameter> out;
    ComplexMatrix theta = ComplexMatrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
        theta(i, i) = 0.37 - 0.61 * i;
        if (i + 1 < dim) {
            theta(i, i + 1) = Complex(0.2, 0.15);
            theta(i + 1, i) = Complex(0.2, -0.15);
        }
    }
    out.push_back(SelfAdjointParameter::matrix(theta));
    if (dim >= 2) {
        ComplexMatrix basis = ComplexMatrix::Zero(dim, dim - 1);
        for (int j = 0; j < dim - 1; ++j) {
            basis(j, j) = 1.0 / std::sqrt(2.0);
            basis(j + 1, j) = Complex(0.0, 1.0 / std::sqrt(2.0));
        }
        basis = Eigen::HouseholderQR<ComplexMatrix>(basis).householderQ() * ComplexMatrix::Identity(dim, dim - 1);
        ComplexMatrix op = ComplexMatrix::Constant(dim - 1, dim - 1, Complex(-0.23, 0.0));
        out.emplace_back(dim, basis, op);
    }
    out.push_back(SelfAdjointParameter::relation(dim));
    return out;
}

inline std::vector<double> uniform_grid(double a, double b, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = a + (b - a) * i / (n - 1);
    return g;
}

// 64 points on [-3.65, 4.15]: asymmetric so that fixture exceptional points
// (0, +-1, 1.5, 2) are not hit exactly.
inline std::vector<double> fixture_grid() { return uniform_grid(-3.65, 4.15, 64); }

class Random {
public:
    explicit Random(std::uint64_t seed) : rng_(seed) {}

    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
    int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng_); }
    Complex complex() { return Complex(normal(), normal()); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }

    ComplexMatrix matrix(int rows, int cols) {
        ComplexMatrix m(rows, cols);
        for (int j = 0; j < cols; ++j)
            for (int i = 0; i < rows; ++i) m(i, j) = complex();
        return m;
    }

    ComplexMatrix hermitian(int n) {
        const ComplexMatrix x = matrix(n, n);
        return (x + x.adjoint()) / 2.0;
    }

    // PSD with rank drawn from {rank_min..n}.
    ComplexMatrix psd(int n, int rank_min = 1) {
        const int r = integer(rank_min, n);
        const ComplexMatrix x = matrix(n, r) / std::sqrt(static_cast<double>(n));
        return x * x.adjoint();
    }

    ComplexMatrix orthonormal(int n, int r) {
        Eigen::HouseholderQR<ComplexMatrix> qr(matrix(n, n));
        return ComplexMatrix(qr.householderQ()) * ComplexMatrix::Identity(n, r);
    }

private:
    std::mt19937_64 rng_;
};

// Random PSD AcBox + Pole + Constant model; Im C is sometimes rank-deficient.
inline NevanlinnaModel random_model(Random& rnd, int dim, const std::string& name) {
    const double a = rnd.uniform(-3.0, 0.5);
    const double b = a + rnd.uniform(0.5, 3.0);
    const ComplexMatrix c = rnd.hermitian(dim) * 0.5 + Complex(0, 1) * rnd.psd(dim, 0) * 0.5;
    return NevanlinnaModel(dim,
                           {AcBoxTerm{a, b, rnd.psd(dim)}, PoleTerm{rnd.uniform(-3.0, 3.0), rnd.psd(dim)},
                            ConstantTerm{c}},
                           name);
}

inline SelfAdjointParameter random_parameter(Random& rnd, int dim) {
    const int r = rnd.integer(0, dim);
    if (r == 0) return SelfAdjointParameter::relation(dim);
    return SelfAdjointParameter(dim, rnd.orthonormal(dim, r), rnd.hermitian(r));
}

inline DissipativeParameter random_dissipative(Random& rnd, int dim) {
    return DissipativeParameter(rnd.hermitian(dim) - Complex(0, 1) * rnd.psd(dim, 0));
}

struct SelfAdjointCase {
    NevanlinnaModel model;
    SelfAdjointParameter theta;
};

inline std::vector<SelfAdjointCase> random_selfadjoint_cases(int count, std::uint64_t seed) {
    Random rnd(seed);
    std::vector<SelfAdjointCase> out;
    for (int k = 0; k < count; ++k) {
        const int dim = rnd.integer(1, 3);
        auto model = random_model(rnd, dim, "random-" + std::to_string(k));
        auto theta = random_parameter(rnd, dim);
        out.push_back({std::move(model), std::move(theta)});
    }
    return out;
}

struct DissipativeCase {
    NevanlinnaModel model;
    DissipativeParameter dp;
};

inline std::vector<DissipativeCase> fixture_dissipative_cases() {
    ComplexMatrix d2(2, 2);
    d2 << Complex(0.1, -0.8), 0.3, 0.3, -0.2;
    ComplexMatrix d2full(2, 2);
    d2full << Complex(0.0, -1.0), Complex(0.2, -0.1), Complex(0.2, -0.1), Complex(0.5, -0.3);
    return {
        {halfline(), DissipativeParameter(scalar(Complex(0, -0.5)))},
        {halfline(), DissipativeParameter(scalar(Complex(0, -1.0)))},
        {halfline(), DissipativeParameter(scalar(Complex(0.4, 0.0)))},
        {constant_i(), DissipativeParameter(scalar(Complex(0, 0)))},
        {affine_identity(), DissipativeParameter(scalar(Complex(0.3, -0.2)))},
        {pole_model(), DissipativeParameter(scalar(Complex(-0.5, -0.7)))},
        {acbox_model(), DissipativeParameter(d2)},
        {acbox_model(), DissipativeParameter(d2full)},
        {direct_sum(halfline(), constant_i()), DissipativeParameter(d2)},
    };
}

inline std::vector<DissipativeCase> random_dissipative_cases(int count, std::uint64_t seed) {
    Random rnd(seed);
    std::vector<DissipativeCase> out;
    for (int k = 0; k < count; ++k) {
        const int dim = rnd.integer(1, 3);
        auto model = random_model(rnd, dim, "random-" + std::to_string(k));
        auto dp = random_dissipative(rnd, dim);
        out.push_back({std::move(model), std::move(dp)});
    }
    return out;
}

inline std::vector<CoupledSystem> fixture_coupled_systems() {
    ComplexMatrix tau2(2, 2);
    tau2 << Complex(0.3, 1.0), 0.2, 0.2, Complex(0.0, 0.5);
    return {
        CoupledSystem(constant_i(), constant_model(Complex(0, 2), "tau")),
        CoupledSystem(halfline(), constant_i()),
        CoupledSystem(affine_identity(), constant_i()),
        CoupledSystem(affine_identity(), halfline()),
        CoupledSystem(pole_model(), halfline()),
        CoupledSystem(acbox_model(), NevanlinnaModel(2, {ConstantTerm{tau2}}, "tau2")),
        CoupledSystem(acbox_model(), direct_sum(halfline(), pole_model())),
    };
}

inline std::vector<CoupledSystem> random_coupled_systems(int count, std::uint64_t seed) {
    Random rnd(seed);
    std::vector<CoupledSystem> out;
    for (int k = 0; k < count; ++k) {
        const int dim = rnd.integer(1, 3);
        auto h = random_model(rnd, dim, "random-h-" + std::to_string(k));
        auto g = random_model(rnd, dim, "random-g-" + std::to_string(k));
        out.emplace_back(std::move(h), std::move(g));
    }
    return out;
}

// Independent oracle for the upper logarithm: diagonalize and take scalar
// logs with argument in [0, pi]. Returns false if the eigenvector matrix is
// too ill-conditioned for the oracle to be trusted.
inline bool eigen_log_oracle(const ComplexMatrix& t, ComplexMatrix& out, double max_cond = 1e8) {
    Eigen::ComplexEigenSolver<ComplexMatrix> es(t);
    const ComplexMatrix& v = es.eigenvectors();
    Eigen::JacobiSVD<ComplexMatrix> svd(v);
    const auto& s = svd.singularValues();
    if (s(s.size() - 1) <= 0 || s(0) / s(s.size() - 1) > max_cond) return false;
    ComplexVector logs(t.rows());
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
        const Complex e = es.eigenvalues()(i);
        double arg = std::atan2(e.imag(), e.real());
        if (arg < 0) arg = e.real() < 0 ? kPi : 0.0;
        logs(i) = Complex(std::log(std::abs(e)), arg);
    }
    out = v * logs.asDiagonal() * v.inverse();
    return true;
}

}  // namespace krein::testing
