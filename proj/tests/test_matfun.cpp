#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "krein/errors.hpp"
#include "krein/matfun.hpp"
#include "support.hpp"

using namespace krein;
using namespace krein::testing;

TEST_CASE("upper_log examples") {
    for (auto method : {LogMethod::Integral, LogMethod::Eigen, LogMethod::Auto}) {
        CHECK(std::abs(upper_log(scalar(1.0), method)(0, 0)) < 1e-12);
        CHECK(std::abs(upper_log(scalar(Complex(0, 1)), method)(0, 0) - Complex(0, kPi / 2)) < 1e-10);
        CHECK(std::abs(upper_log(scalar(-2.0), method)(0, 0) - Complex(std::log(2.0), kPi)) < 1e-10);
    }
}

TEST_CASE("upper_log on the boundary is the limit from above") {
    const Complex from_above = upper_log(scalar(Complex(-2.0, 1e-9)), LogMethod::Integral)(0, 0);
    CHECK(std::abs(from_above - Complex(std::log(2.0), kPi)) < 1e-8);
}

TEST_CASE("upper_log errors") {
    CHECK_THROWS_AS(upper_log(scalar(Complex(0, -1))), DomainError);
    CHECK_THROWS_AS(upper_log(ComplexMatrix::Zero(2, 2)), SingularError);
    ComplexMatrix nearly(2, 2);
    nearly << 1.0, 1.0, 1.0, 1.0 + 1e-14;
    CHECK_THROWS_AS(upper_log(nearly), SingularError);
}

TEST_CASE("tr_log examples") {
    CHECK(std::abs(tr_log(ComplexMatrix::Identity(2, 2))) < 1e-12);
    CHECK(std::abs(tr_log(ComplexMatrix::Identity(2, 2) * Complex(0, 1)) - Complex(0, kPi)) < 1e-10);
    CHECK(std::abs(tr_log(scalar(-2.0)) - Complex(std::log(2.0), kPi)) < 1e-10);
}

TEST_CASE("property: integral log matches the eigen oracle") {
    Random rnd(0x10c);
    int compared = 0;
    for (int k = 0; k < 100; ++k) {
        const int n = rnd.integer(1, 4);
        const ComplexMatrix t = rnd.hermitian(n) + Complex(0, 1) * rnd.psd(n, 0);
        ComplexMatrix oracle;
        if (!eigen_log_oracle(t, oracle)) continue;
        ++compared;
        const ComplexMatrix l = upper_log(t, LogMethod::Integral);
        CHECK((l - oracle).norm() <= 1e-8 * (1.0 + t.norm()));
        const Complex d = det(t);
        CHECK(std::abs(d - std::exp(l.trace())) <= 1e-9 * std::abs(d));
        const double im = tr_log(t).imag();
        CHECK(im >= -1e-10);
        CHECK(im <= kPi * n + 1e-10);
    }
    CHECK(compared >= 90);
}

TEST_CASE("log_phase matches the eigen oracle") {
    CHECK(log_phase(scalar(-2.0), 1.0) == doctest::Approx(1.0));
    CHECK(log_phase(scalar(Complex(3.0, -1e-14)), 1.0) == doctest::Approx(0.0));
    CHECK(log_phase(scalar(Complex(-3.0, -1e-14)), 1.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(log_phase(scalar(Complex(1.0, -1e-3)), 1.0), DomainError);
    Random rnd(0x1a9);
    for (int k = 0; k < 100; ++k) {
        const int n = rnd.integer(1, 4);
        const ComplexMatrix t = rnd.hermitian(n) + Complex(0, 1) * rnd.psd(n, 0);
        ComplexMatrix oracle;
        if (!eigen_log_oracle(t, oracle)) continue;
        CHECK(std::abs(log_phase(t, 1.0) - oracle.trace().imag() / kPi) <= 1e-9);
    }
}

TEST_CASE("auto path agrees with the integral on normal matrices") {
    Random rnd(77);
    for (int k = 0; k < 20; ++k) {
        const int n = rnd.integer(1, 3);
        const ComplexMatrix u = rnd.orthonormal(n, n);
        ComplexVector ev(n);
        for (int i = 0; i < n; ++i) ev(i) = Complex(rnd.uniform(-3, 3), rnd.uniform(0, 2));
        const ComplexMatrix t = u * ev.asDiagonal() * u.adjoint();
        CHECK((upper_log(t, LogMethod::Auto) - upper_log(t, LogMethod::Integral)).norm() < 1e-9);
    }
}

TEST_CASE("psd_sqrt") {
    CHECK((psd_sqrt(ComplexMatrix::Identity(2, 2)) - ComplexMatrix::Identity(2, 2)).norm() < 1e-14);
    CHECK(std::abs(psd_sqrt(scalar(4.0))(0, 0) - 2.0) < 1e-14);
    ComplexMatrix h(2, 2);
    h << 2.0, 1.0, 1.0, 2.0;
    const ComplexMatrix s = psd_sqrt(h);
    CHECK((s * s - h).norm() <= 1e-12 * h.norm());
    CHECK((s - s.adjoint()).norm() == 0.0);
    CHECK(min_eigenvalue(s) >= 0.0);
    CHECK_THROWS_AS(psd_sqrt(scalar(-1.0)), DomainError);
    ComplexMatrix tiny = ComplexMatrix::Identity(2, 2);
    tiny(1, 1) = -1e-13;
    CHECK(std::abs(psd_sqrt(tiny)(1, 1)) == 0.0);
}

TEST_CASE("range_projection examples") {
    CHECK(range_projection(ComplexMatrix::Zero(2, 2)).rank == 0);
    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = 1.0;
    const auto p = range_projection(d);
    REQUIRE(p.rank == 1);
    CHECK((p.basis.col(0) - ComplexVector::Unit(2, 0)).norm() < 1e-15);
    ComplexMatrix ones = ComplexMatrix::Ones(2, 2);
    const auto q = range_projection(ones);
    REQUIRE(q.rank == 1);
    CHECK(std::abs(q.basis(0, 0) - 1 / std::sqrt(2.0)) < 1e-14);
    CHECK(std::abs(q.basis(1, 0) - 1 / std::sqrt(2.0)) < 1e-14);
}

TEST_CASE("property: psd_sqrt squares back and projectors are idempotent") {
    Random rnd(99);
    for (int k = 0; k < 50; ++k) {
        const int n = rnd.integer(1, 4);
        const ComplexMatrix h = rnd.psd(n, 0);
        const ComplexMatrix s = psd_sqrt(h);
        CHECK((s * s - h).norm() <= 1e-12 * std::max(1.0, h.norm()));
        const auto sub = range_projection(h);
        const ComplexMatrix p = sub.projector();
        CHECK((p * p - p).norm() <= 1e-12);
        CHECK((sub.basis.adjoint() * sub.basis - ComplexMatrix::Identity(sub.rank, sub.rank)).norm() <= 1e-12);
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
        int above = 0;
        for (int i = 0; i < n; ++i) above += es.eigenvalues()(i) > sub.tol ? 1 : 0;
        CHECK(above == sub.rank);
        for (int i = 1; i < sub.rank; ++i) CHECK(sub.eigenvalues(i - 1) >= sub.eigenvalues(i));
    }
}
