#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <map>
#include <vector>

#include "hslab/hpop.hpp"

using hslab::DifferentialOperator;
using hslab::RealPolynomial;

namespace {

// Coefficient-wise comparison with a mixed absolute/relative band.
void check_close(const RealPolynomial& got, const std::vector<double>& want,
                 double tol = 1e-12) {
    RealPolynomial expect(want);
    REQUIRE(got.degree() == expect.degree());
    for (int i = 0; i <= expect.degree(); ++i) {
        CAPTURE(i);
        CHECK(std::fabs(got.coeff(i) - expect.coeff(i)) <=
              tol * (1.0 + std::fabs(expect.coeff(i))));
    }
}

DifferentialOperator legendre() {
    // (z^2 - 1) f'' + 2 z f'
    return DifferentialOperator({{2, RealPolynomial{-1.0, 0.0, 1.0}},
                                 {1, RealPolynomial{0.0, 2.0}}});
}

DifferentialOperator heun_like() {
    // z(z-1)(z-2) f'' + (z(z-1)(z-2))' f'
    return hslab::classical_operator({0.0, 1.0, 2.0}, {1.0, 1.0, 1.0});
}

}  // namespace

TEST_CASE("operator construction and basic accessors") {
    DifferentialOperator t = legendre();
    CHECK(t.min_order() == 1);
    CHECK(t.max_order() == 2);
    CHECK(t.fuchs_index() == 0);
    CHECK(t.terms().size() == 2);

    // Identically zero coefficients are dropped, not stored.
    DifferentialOperator pruned({{3, RealPolynomial{0.0, 0.0}},
                                 {1, RealPolynomial{0.0, 2.0}}});
    CHECK(pruned.terms().size() == 1);
    CHECK(pruned.max_order() == 1);

    // Absent orders read back as the zero polynomial.
    CHECK(t.coefficient(0).is_zero());
    CHECK(t.coefficient(5).is_zero());
    check_close(t.coefficient(2), {-1.0, 0.0, 1.0});

    CHECK_THROWS_AS(DifferentialOperator({}), std::invalid_argument);
    CHECK_THROWS_AS(DifferentialOperator({{2, RealPolynomial{}}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(DifferentialOperator({{-1, RealPolynomial{1.0}}}),
                    std::invalid_argument);

    // Pure derivative has a negative index: deg(1) - 1 = -1.
    DifferentialOperator ddz({{1, RealPolynomial{1.0}}});
    CHECK(ddz.fuchs_index() == -1);
}

TEST_CASE("apply matches hand-computed images") {
    DifferentialOperator t = legendre();

    // T(z^2) = (z^2-1)*2 + 2z*2z = 6z^2 - 2.
    check_close(hslab::apply(t, RealPolynomial{0.0, 0.0, 1.0}), {-2.0, 0.0, 6.0});
    // No zeroth-order term, so constants map to zero.
    CHECK(hslab::apply(t, RealPolynomial{4.0}).is_zero());
    CHECK(hslab::apply(t, RealPolynomial{}).is_zero());

    // Multiplication operator: z * (1 + 2z) = z + 2z^2.
    DifferentialOperator mul({{0, RealPolynomial{0.0, 1.0}}});
    check_close(hslab::apply(mul, RealPolynomial{1.0, 2.0}), {0.0, 1.0, 2.0});

    // Degree law deg T(f) = deg f + fuchs_index for generic input.
    RealPolynomial f = hslab::from_roots({-2.0, 0.5, 1.5});
    CHECK(hslab::apply(t, f).degree() == 3 + t.fuchs_index());
    DifferentialOperator h = heun_like();
    CHECK(hslab::apply(h, f).degree() == 3 + h.fuchs_index());
}

TEST_CASE("leading output coefficient lambda_n") {
    DifferentialOperator t = legendre();
    for (int n = 0; n <= 8; ++n) {
        CAPTURE(n);
        CHECK(hslab::lambda_n(t, n) == doctest::Approx(double(n) * (n + 1)).epsilon(1e-14));
    }

    DifferentialOperator h = heun_like();
    CHECK(hslab::lambda_n(h, 1) == doctest::Approx(3.0));
    CHECK(hslab::lambda_n(h, 2) == doctest::Approx(8.0));
    // General form 3n + n(n-1).
    CHECK(hslab::lambda_n(h, 5) == doctest::Approx(3 * 5 + 5 * 4));

    // (P f)'' with deg P = 4: leading coefficient (n+3)(n+4).
    RealPolynomial p = hslab::from_roots({-2.0, -1.0, 0.0, 1.0});
    DifferentialOperator s = hslab::sandwich_operator(p, 0, 2);
    CHECK(hslab::lambda_n(s, 1) == doctest::Approx(20.0));
    CHECK(hslab::lambda_n(s, 2) == doctest::Approx(30.0));

    CHECK_THROWS_AS(hslab::lambda_n(t, -1), std::invalid_argument);
}

TEST_CASE("classical operator construction") {
    DifferentialOperator h = heun_like();
    CHECK(h.min_order() == 1);
    CHECK(h.max_order() == 2);
    CHECK(h.fuchs_index() == 1);
    check_close(h.coefficient(2), {0.0, 2.0, -3.0, 1.0});
    // With unit weights the first-order coefficient is exactly Q2'.
    check_close(h.coefficient(1), {2.0, -6.0, 3.0});

    // Non-unit weights: gamma_1 (z-1)(z-2) + gamma_2 z(z-2) + gamma_3 z(z-1).
    DifferentialOperator w =
        hslab::classical_operator({0.0, 1.0, 2.0}, {2.0, 1.0, 1.0});
    // 2(z^2-3z+2) + (z^2-2z) + (z^2-z) = 4z^2 - 9z + 4.
    check_close(w.coefficient(1), {4.0, -9.0, 4.0});

    CHECK_THROWS_AS(hslab::classical_operator({0.0}, {1.0}),
                    hslab::BadClassicalInputError);
    CHECK_THROWS_AS(hslab::classical_operator({0.0, 1.0}, {1.0}),
                    hslab::BadClassicalInputError);
    CHECK_THROWS_AS(hslab::classical_operator({0.0, 0.0}, {1.0, 1.0}),
                    hslab::BadClassicalInputError);
    CHECK_THROWS_AS(hslab::classical_operator({1.0, 0.0}, {1.0, 1.0}),
                    hslab::BadClassicalInputError);
    CHECK_THROWS_AS(hslab::classical_operator({0.0, 1.0}, {1.0, 0.0}),
                    hslab::BadClassicalInputError);
    CHECK_THROWS_AS(hslab::classical_operator({0.0, 1.0}, {1.0, -2.0}),
                    hslab::BadClassicalInputError);
}

TEST_CASE("sandwich operator construction") {
    // P = (z+2)(z+1)z(z-1) = z^4 + 2z^3 - z^2 - 2z.
    RealPolynomial p = hslab::from_roots({-2.0, -1.0, 0.0, 1.0});
    check_close(p, {0.0, -2.0, -1.0, 2.0, 1.0});

    DifferentialOperator s02 = hslab::sandwich_operator(p, 0, 2);
    CHECK(s02.fuchs_index() == 2);
    CHECK(s02.min_order() == 0);
    CHECK(s02.max_order() == 2);
    check_close(s02.coefficient(2), {0.0, -2.0, -1.0, 2.0, 1.0});
    // 2 P' = 2(4z^3 + 6z^2 - 2z - 2).
    check_close(s02.coefficient(1), {-4.0, -4.0, 12.0, 8.0});
    // P'' = 12z^2 + 12z - 2.
    check_close(s02.coefficient(0), {-2.0, 12.0, 12.0});

    DifferentialOperator s12 = hslab::sandwich_operator(p, 1, 2);
    CHECK(s12.fuchs_index() == 2);
    CHECK(s12.min_order() == 1);
    check_close(s12.coefficient(2), {0.0, -2.0, -1.0, 2.0, 1.0});
    check_close(s12.coefficient(1), {-2.0, -2.0, 6.0, 4.0});

    // Double zero is fine when the outer derivative order is at least 2 ...
    RealPolynomial zsq = hslab::from_roots({0.0, 0.0});
    DifferentialOperator ok = hslab::sandwich_operator(zsq, 0, 2);
    check_close(ok.coefficient(0), {2.0});
    check_close(ok.coefficient(1), {0.0, 4.0});
    check_close(ok.coefficient(2), {0.0, 0.0, 1.0});
    // ... but not when only one derivative is applied outside.
    CHECK_THROWS_AS(hslab::sandwich_operator(zsq, 0, 1),
                    hslab::MultiplicityTooHighError);

    CHECK_THROWS_AS(hslab::sandwich_operator(RealPolynomial{1.0, 0.0, 1.0}, 0, 2),
                    hslab::NotHyperbolicError);
    CHECK_THROWS_AS(hslab::sandwich_operator(RealPolynomial{}, 0, 2),
                    hslab::ZeroPolynomialError);
    CHECK_THROWS_AS(hslab::sandwich_operator(p, -1, 2), std::invalid_argument);
    CHECK_THROWS_AS(hslab::sandwich_operator(p, 3, 2), std::invalid_argument);

    // Constant envelope collapses to a scaled pure derivative.
    DifferentialOperator c = hslab::sandwich_operator(RealPolynomial{3.0}, 0, 2);
    CHECK(c.terms().size() == 1);
    check_close(c.coefficient(2), {3.0});
}

TEST_CASE("pencil operator construction") {
    // det(2z + w + 3): first order, index zero.
    DifferentialOperator p1 = hslab::pencil_operator({{2.0}}, {{1.0}}, {{3.0}});
    CHECK(p1.fuchs_index() == 0);
    CHECK(p1.max_order() == 1);
    check_close(p1.coefficient(1), {3.0, 2.0}, 1e-9);
    check_close(p1.coefficient(0), {1.0}, 1e-9);

    // det(diag(z+w, z)) = z^2 + zw: singular B raises the index.
    DifferentialOperator p2 = hslab::pencil_operator(
        {{1.0, 0.0}, {0.0, 1.0}}, {{1.0, 0.0}, {0.0, 0.0}},
        {{0.0, 0.0}, {0.0, 0.0}});
    CHECK(p2.fuchs_index() == 1);
    CHECK(p2.max_order() == 1);
    check_close(p2.coefficient(1), {0.0, 0.0, 1.0}, 1e-9);
    check_close(p2.coefficient(0), {0.0, 1.0}, 1e-9);

    // det((z+w) I_2) = (z+w)^2.
    DifferentialOperator p3 = hslab::pencil_operator(
        {{1.0, 0.0}, {0.0, 1.0}}, {{1.0, 0.0}, {0.0, 1.0}},
        {{0.0, 0.0}, {0.0, 0.0}});
    CHECK(p3.fuchs_index() == 0);
    CHECK(p3.max_order() == 2);
    check_close(p3.coefficient(2), {0.0, 0.0, 1.0}, 1e-9);
    check_close(p3.coefficient(1), {0.0, 2.0}, 1e-9);
    check_close(p3.coefficient(0), {1.0}, 1e-9);

    // B = 0 degrades to multiplication by det(zA + C).
    DifferentialOperator m = hslab::pencil_operator({{1.0}}, {{0.0}}, {{5.0}});
    CHECK(m.max_order() == 0);
    CHECK(m.fuchs_index() == 1);
    check_close(m.coefficient(0), {5.0, 1.0}, 1e-9);

    CHECK_THROWS_AS(hslab::pencil_operator({{1.0, 0.0}, {0.0, 0.0}},
                                           {{1.0, 0.0}, {0.0, 1.0}},
                                           {{0.0, 0.0}, {0.0, 0.0}}),
                    hslab::NotPosDefError);
    CHECK_THROWS_AS(hslab::pencil_operator({{1.0, 0.0}, {0.0, 1.0}},
                                           {{-1.0, 0.0}, {0.0, 1.0}},
                                           {{0.0, 0.0}, {0.0, 0.0}}),
                    hslab::NotPsdError);
    CHECK_THROWS_AS(hslab::pencil_operator({{1.0, 2.0}, {0.0, 1.0}},
                                           {{1.0, 0.0}, {0.0, 1.0}},
                                           {{0.0, 0.0}, {0.0, 0.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(hslab::pencil_operator({{1.0}}, {{1.0, 0.0}, {0.0, 1.0}},
                                           {{0.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(hslab::pencil_operator({}, {}, {}), std::invalid_argument);
}

TEST_CASE("structural diagnostics accept known-good operators") {
    for (const DifferentialOperator& t : {legendre(), heun_like()}) {
        hslab::HpDiagnostics d = hslab::diagnose(t, 7, 200);
        CHECK(d.nondegenerate);
        CHECK(d.degree_bounds_ok);
        CHECK(d.leading_poly_ok);
        CHECK(d.coefficient_chain_ok);
        CHECK(d.structural_ok());
        CHECK(d.leading_sign == 1);
        CHECK_FALSE(d.witness.has_value());
        CHECK(d.samples_used == 200);
    }

    hslab::HpDiagnostics dl = hslab::diagnose(legendre(), 7, 50);
    CHECK(dl.fuchs_index == 0);
    // a_2 = 1, a_1 = 2 gives z^2 + 2z with zeros {-2, 0}.
    check_close(dl.leading_poly, {0.0, 2.0, 1.0});

    // z^2 D + z (from the singular pencil) is fine as well.
    DifferentialOperator p2({{1, RealPolynomial{0.0, 0.0, 1.0}},
                             {0, RealPolynomial{0.0, 1.0}}});
    hslab::HpDiagnostics d2 = hslab::diagnose(p2, 5, 200);
    CHECK(d2.structural_ok());
    CHECK(d2.fuchs_index == 1);
    check_close(d2.leading_poly, {1.0, 1.0});
    CHECK_FALSE(d2.witness.has_value());
}

TEST_CASE("structural diagnostics flag violations") {
    // z^2 f'' - 3z f': index 0, but a_1 = -3 against a_2 = 1 puts a
    // positive zero (z = 3) into the top-degree profile.
    DifferentialOperator bad({{2, RealPolynomial{0.0, 0.0, 1.0}},
                              {1, RealPolynomial{0.0, -3.0}}});
    hslab::HpDiagnostics d = hslab::diagnose(bad, 3, 100);
    CHECK(d.nondegenerate);
    CHECK(d.degree_bounds_ok);
    CHECK_FALSE(d.leading_poly_ok);
    CHECK(d.leading_sign == 0);
    CHECK_FALSE(d.structural_ok());

    // f'' + f' is degenerate (negative index) yet genuinely stable —
    // its symbol 1 + w only vanishes at w = -1 — so the sampler must
    // stay silent.
    DifferentialOperator deg({{2, RealPolynomial{1.0}},
                              {1, RealPolynomial{1.0}}});
    hslab::HpDiagnostics dd = hslab::diagnose(deg, 11, 200);
    CHECK(dd.fuchs_index == -1);
    CHECK_FALSE(dd.nondegenerate);
    CHECK_FALSE(dd.degree_bounds_ok);
    CHECK_FALSE(dd.witness.has_value());
    CHECK(dd.samples_used == 200);

    // Same seed, same outcome: the sampler is deterministic.
    hslab::HpDiagnostics r1 = hslab::diagnose(legendre(), 42, 100);
    hslab::HpDiagnostics r2 = hslab::diagnose(legendre(), 42, 100);
    CHECK(r1.samples_used == r2.samples_used);
    CHECK(r1.witness.has_value() == r2.witness.has_value());
}

TEST_CASE("stability sampler finds a counterexample for f'' + z f") {
    DifferentialOperator t({{2, RealPolynomial{1.0}},
                            {0, RealPolynomial{0.0, 1.0}}});
    hslab::HpDiagnostics d = hslab::diagnose(t, 123, 1000);
    REQUIRE(d.witness.has_value());
    // Every upper-half-plane sample admits a witness here, so the very
    // first draw should succeed.
    CHECK(d.samples_used == 1);
    CHECK(d.witness->z_im > 0.0);
    CHECK(d.witness->w_im > 1e-9);

    // Independent check: the symbol z w^2 + 1 really vanishes there.
    std::complex<double> z(d.witness->z_re, d.witness->z_im);
    std::complex<double> w(d.witness->w_re, d.witness->w_im);
    std::complex<double> g = z * w * w + 1.0;
    double scale = std::abs(z) * std::norm(w) + 1.0;
    CHECK(std::abs(g) <= 1e-6 * scale);

    // The same operator is structurally broken too.
    CHECK_FALSE(d.nondegenerate);

    // f'' + z f' also fails: its symbol 1 + z w vanishes at w = -1/z,
    // whose imaginary part is positive alongside z's.  Concretely,
    // z^2 - 1 maps to 2 z^2 + 2, which has no real zeros at all.
    DifferentialOperator drift({{2, RealPolynomial{1.0}},
                                {1, RealPolynomial{0.0, 1.0}}});
    check_close(hslab::apply(drift, RealPolynomial{-1.0, 0.0, 1.0}),
                {2.0, 0.0, 2.0});
    hslab::HpDiagnostics dw = hslab::diagnose(drift, 11, 1000);
    REQUIRE(dw.witness.has_value());
    CHECK(dw.samples_used == 1);
}

TEST_CASE("common real zero of a coefficient range") {
    // z f'' + z f' + z f: every coefficient vanishes at the origin.
    RealPolynomial z{0.0, 1.0};
    DifferentialOperator t({{2, z}, {1, z}, {0, z}});
    auto theta = hslab::common_real_zero(t, 0, 2);
    REQUIRE(theta.has_value());
    CHECK(*theta == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));

    // Legendre coefficients share no zero: Q_1(0) = 0 but Q_2(0) = -1.
    CHECK_FALSE(hslab::common_real_zero(legendre(), 1, 2).has_value());
    CHECK_THROWS_AS(hslab::common_real_zero(legendre(), 3, 4),
                    hslab::AllZeroRangeError);

    // (z^2 f)'' has Q_0 = 2, Q_1 = 4z, Q_2 = z^2.
    DifferentialOperator s =
        hslab::sandwich_operator(hslab::from_roots({0.0, 0.0}), 0, 2);
    auto inner = hslab::common_real_zero(s, 1, 2);
    REQUIRE(inner.has_value());
    CHECK(*inner == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK_FALSE(hslab::common_real_zero(s, 0, 2).has_value());

    CHECK_THROWS_AS(hslab::common_real_zero(legendre(), 2, 1),
                    std::invalid_argument);
}
