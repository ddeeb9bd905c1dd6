#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "krein/errors.hpp"
#include "krein/matfun.hpp"
#include "krein/selfadjoint.hpp"
#include "support.hpp"

using namespace krein;
using namespace krein::testing;

namespace {

SelfAdjointParameter theta_scalar(double t) { return SelfAdjointParameter::matrix(scalar(t)); }

// Number of negative eigenvalues of a Hermitian matrix.
int negative_count(const ComplexMatrix& h) {
    if (h.size() == 0) return 0;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitize(h));
    int n = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) n += es.eigenvalues()(i) < 0 ? 1 : 0;
    return n;
}

}  // namespace

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(SelfAdjointParameter(2, ComplexMatrix::Ones(2, 1), scalar(0.0)), ValidationError);
    CHECK_THROWS_AS(SelfAdjointParameter::matrix(scalar(Complex(0, 1))), ValidationError);
    CHECK_THROWS_AS(SelfAdjointParameter(2, ComplexMatrix::Identity(2, 2), scalar(0.0)), DimensionError);
    CHECK(SelfAdjointParameter::relation(3).op_rank() == 0);
}

TEST_CASE("compress_weyl examples") {
    ComplexMatrix m(2, 2);
    m << 1, 2, 3, 4;
    CHECK((compress_weyl(m, SelfAdjointParameter::matrix(ComplexMatrix::Zero(2, 2))) - m).norm() == 0.0);
    CHECK(compress_weyl(m, SelfAdjointParameter::relation(2)).size() == 0);
    const SelfAdjointParameter corner(2, ComplexVector::Unit(2, 0), scalar(0.0));
    CHECK(std::abs(compress_weyl(m, corner)(0, 0) - 1.0) == 0.0);
    CHECK_THROWS_AS(compress_weyl(ComplexMatrix::Identity(3, 3), corner), DimensionError);
}

TEST_CASE("scattering matrix examples") {
    for (double lambda : {-2.0, 0.5, 7.0}) {
        const auto v = scattering_matrix(constant_i(), theta_scalar(0.0), lambda);
        REQUIRE(v.s_matrix.rows() == 1);
        CHECK(std::abs(v.s_matrix(0, 0) + 1.0) < 1e-15);
    }
    const auto s = scattering_matrix(halfline(), theta_scalar(2.0), 4.0);
    CHECK(std::abs(s.det_s - Complex(0, 1)) < 1e-15);
    CHECK(std::abs(s.ssf - 0.75) < 1e-14);

    const NevanlinnaModel pole(1, {PoleTerm{0.0, scalar(1.0)}});
    const auto g = scattering_matrix(pole, theta_scalar(1.0), 2.0);
    CHECK(g.s_matrix.size() == 0);
    CHECK(g.det_s == Complex(1.0, 0.0));
}

TEST_CASE("singular points raise SingularError") {
    CHECK_THROWS_AS(scattering_matrix(affine_identity(), theta_scalar(0.5), 0.5), SingularError);
    CHECK_THROWS_AS(spectral_shift(affine_identity(), theta_scalar(0.5), 0.5), SingularError);
}

TEST_CASE("spectral shift examples") {
    CHECK(std::abs(spectral_shift(constant_i(), theta_scalar(0.0), 3.0) - 0.5) < 1e-14);
    for (double theta : {-1.0, 0.3}) {
        CHECK(std::abs(spectral_shift(affine_identity(), theta_scalar(theta), theta - 0.7) - 1.0) < 1e-12);
        CHECK(std::abs(spectral_shift(affine_identity(), theta_scalar(theta), theta + 0.7)) < 1e-12);
    }
    CHECK(std::abs(spectral_shift(halfline(), theta_scalar(2.0), 4.0) - 0.75) < 1e-14);
    CHECK(std::abs(spectral_shift(halfline(), theta_scalar(0.0), -3.0) - 1.0) < 1e-12);
    CHECK(std::abs(spectral_shift(halfline(), theta_scalar(0.0), 3.0) - 0.5) < 1e-12);
}

TEST_CASE("resolvent trace examples") {
    CHECK(std::abs(resolvent_trace(constant_i(), theta_scalar(0.4), Complex(1, 2))) == 0.0);
    for (double theta : {-1.0, 0.3}) {
        const Complex z(0, 1);
        CHECK(std::abs(resolvent_trace(affine_identity(), theta_scalar(theta), z) - 1.0 / (theta - z)) < 1e-14);
    }
    const NevanlinnaModel pole(1, {PoleTerm{0.0, scalar(1.0)}});
    const Complex z(0.3, 1.1);
    CHECK(std::abs(resolvent_trace(pole, theta_scalar(0.0), z) - 1.0 / z) < 1e-14);
}

TEST_CASE("Birman-Krein examples") {
    const auto grid = fixture_grid();
    const auto r = verify_birman_krein(constant_i(), theta_scalar(0.0), grid);
    CHECK(r.passes(1e-14));
    const double four[] = {4.0};
    CHECK(verify_birman_krein(halfline(), theta_scalar(2.0), four).passes(1e-14));
    const NevanlinnaModel pole(1, {PoleTerm{0.0, scalar(1.0)}});
    const double gap[] = {2.0, -0.5};
    CHECK(verify_birman_krein(pole, theta_scalar(1.0), gap).passes(1e-14));
}

TEST_CASE("Birman-Krein skips exceptional and singular points") {
    const double pts[] = {0.0, 0.5, 1.0};
    const auto r = verify_birman_krein(affine_identity(), theta_scalar(0.5), pts);
    CHECK(r.skipped.size() == 1);
    CHECK(r.residuals.size() == 2);
    CHECK(r.passes(1e-12));
    const double hp[] = {0.0, 1.0};
    const auto h = verify_birman_krein(halfline(), theta_scalar(2.0), hp);
    CHECK(h.skipped.size() == 1);
}

TEST_CASE("corrupted model surfaces as a failure") {
    const auto bad = constant_model(Complex(0, -1), "corrupt");
    const auto r = verify_birman_krein(bad, theta_scalar(0.0), fixture_grid());
    CHECK(!r.failed.empty());
    CHECK(!r.passes(1.0));
}

TEST_CASE("trace formula examples") {
    CHECK(verify_trace_formula(constant_i(), theta_scalar(0.0), Complex(0, 1), 1e-8).residual <= 1e-8);
    for (double theta : {-1.0, 0.3}) {
        for (Complex z : {Complex(0, 1), Complex(1, 2)}) {
            const auto c = verify_trace_formula(affine_identity(), theta_scalar(theta), z);
            CHECK(c.residual <= 1e-6);
            CHECK(std::abs(c.lhs + 1.0 / (z - theta)) < 1e-14);
            CHECK(std::abs(c.rhs + 1.0 / (z - theta)) <= 1e-6);
        }
    }
    const auto h = verify_trace_formula(halfline(), theta_scalar(0.0), Complex(0, 1));
    CHECK(h.residual <= 1e-6);
    CHECK(std::abs(h.lhs - Complex(0, 0.5)) < 1e-14);
}

TEST_CASE("trace formula on the lower half-plane") {
    const Complex z(0.5, -1.5);
    const auto c = verify_trace_formula(halfline(), theta_scalar(0.7), z);
    CHECK(c.residual <= 1e-6);
    const auto u = verify_trace_formula(halfline(), theta_scalar(0.7), std::conj(z));
    CHECK(std::abs(c.lhs - std::conj(u.lhs)) < 1e-12);
}

TEST_CASE("property: unitarity, SSF range and gap integrality on fixtures") {
    for (const auto& m : fixture_models()) {
        for (const auto& theta : fixture_parameters(m.dim())) {
            for (double lambda : fixture_grid()) {
                ScatterValue v;
                try {
                    v = scattering_matrix(m, theta, lambda);
                } catch (const SingularError&) {
                    continue;
                }
                if (v.subspace.rank > 0) CHECK(unitarity_defect(v.s_matrix) <= 1e-10);
                CHECK(v.ssf >= -1e-10);
                CHECK(v.ssf <= theta.op_rank() + 1e-10);
                CHECK(std::abs(v.det_s - std::exp(Complex(0, -2 * kPi * v.ssf))) <= 1e-8);
                if (v.subspace.rank == 0) {
                    const ComplexMatrix mop = compress_weyl(m.boundary_value(lambda), theta) - theta.theta_op();
                    CHECK(std::abs(v.ssf - negative_count(mop)) <= 1e-8);
                }
            }
        }
    }
}

TEST_CASE("property: Birman-Krein on seeded random models") {
    for (const auto& c : random_selfadjoint_cases(20, 0xb1c0ffee)) {
        const auto r = verify_birman_krein(c.model, c.theta, fixture_grid());
        CHECK(r.failed.empty());
        CHECK(r.max_residual() <= 1e-8);
    }
}

TEST_CASE("property: derivative identity for tr log") {
    const double h = 1e-5;
    Random rnd(0xd1ff);
    for (const auto& m : fixture_models()) {
        for (const auto& theta : fixture_parameters(m.dim())) {
            if (theta.op_rank() == 0) continue;
            for (int k = 0; k < 10; ++k) {
                const Complex z(rnd.uniform(-3, 3), rnd.uniform(0.3, 2.0));
                auto tl = [&](Complex w) { return tr_log(compress_weyl(m.eval(w), theta) - theta.theta_op()); };
                const Complex fd = (tl(z + h) - tl(z - h)) / (2 * h);
                const Complex exact = -resolvent_trace(m, theta, z);
                CHECK(std::abs(fd - exact) <= 1e-6 * std::max(std::abs(exact), 1e-2));
            }
        }
    }
}
