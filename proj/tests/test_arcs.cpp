#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "thop/arcs.hpp"

#include <cmath>

using namespace thop;

namespace {
constexpr double kPi = 3.14159265358979323846;

Complex mu_direct(double p, double lambda) {
    // independent route: coth via exp, no library cosh/sinh
    const Complex z(kPi * lambda, kPi / p);
    const Complex e2z = std::exp(2.0 * z);
    const Complex coth = (e2z + 1.0) / (e2z - 1.0);
    return (1.0 + coth) / 2.0;
}

Complex nu_direct(double p, double lambda) {
    const Complex z(kPi * lambda, kPi / p);
    const Complex sinh = (std::exp(z) - std::exp(-z)) / 2.0;
    return 1.0 / (Complex(0.0, 2.0) * sinh);
}
}  // namespace

TEST_CASE("conjugate exponent") {
    CHECK(conjugate_exponent(2.0) == doctest::Approx(2.0));
    CHECK(conjugate_exponent(4.0) == doctest::Approx(4.0 / 3.0));
    CHECK(conjugate_exponent(1.5) == doctest::Approx(3.0));
    CHECK_THROWS(conjugate_exponent(1.0));
    CHECK_THROWS(conjugate_exponent(0.5));
    CHECK_THROWS(conjugate_exponent(std::numeric_limits<double>::infinity()));
    CHECK_THROWS(Exponent(1.0));
    const Exponent e(1.2);
    CHECK(1.0 / e.p() + 1.0 / e.q() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("mu endpoint and anchor values") {
    for (double p : {1.2, 1.5, 2.0, 3.0, 7.0}) {
        CHECK(mu(p, CompactifiedReal::neg_inf()) == Complex(0.0, 0.0));
        CHECK(mu(p, CompactifiedReal::pos_inf()) == Complex(1.0, 0.0));
        CHECK(nu(p, CompactifiedReal::neg_inf()) == Complex(0.0, 0.0));
        CHECK(nu(p, CompactifiedReal::pos_inf()) == Complex(0.0, 0.0));
        // the arc passes through (1 - i cot(pi/p))/2 at lambda = 0
        const Complex anchor(0.5, -0.5 / std::tan(kPi / p));
        CHECK(std::abs(mu(p, CompactifiedReal::finite(0.0)) - anchor) < 1e-13);
    }
    CHECK(std::abs(mu(2.0, CompactifiedReal::finite(0.0)) - Complex(0.5, 0.0)) < 1e-15);
    // mu_2(1) = (1 + tanh(pi))/2, real
    const Complex m21 = mu(2.0, CompactifiedReal::finite(1.0));
    CHECK(std::abs(m21 - Complex((1.0 + std::tanh(kPi)) / 2.0, 0.0)) < 1e-13);
    CHECK(m21.real() == doctest::Approx(0.9981360381).epsilon(1e-9));
}

TEST_CASE("nu anchor values") {
    CHECK(std::abs(nu(2.0, CompactifiedReal::finite(0.0)) - Complex(-0.5, 0.0)) < 1e-15);
    // nu_3(0.4)^2 = mu_3(0.4)(1 - mu_3(0.4)), both sides from the definitions
    const Complex m = mu(3.0, CompactifiedReal::finite(0.4));
    const Complex n = nu(3.0, CompactifiedReal::finite(0.4));
    CHECK(std::abs(n * n - m * (1.0 - m)) < 1e-13);
}

TEST_CASE("agreement with the direct exponential route") {
    for (double p : {1.2, 1.7, 2.0, 3.5}) {
        for (double lam : {-3.0, -0.7, 0.0, 0.2, 1.9, 8.0}) {
            CHECK(std::abs(mu(p, CompactifiedReal::finite(lam)) - mu_direct(p, lam)) < 1e-12);
            CHECK(std::abs(nu(p, CompactifiedReal::finite(lam)) - nu_direct(p, lam)) < 1e-12);
        }
    }
}

TEST_CASE("arc identities on a grid") {
    const auto grid = lambda_grid(60);
    for (double p : {1.2, 1.5, 2.0, 3.0, 7.0}) {
        const double q = conjugate_exponent(p);
        for (const auto& lam : grid) {
            if (!lam.is_finite()) continue;
            const CompactifiedReal neg = CompactifiedReal::finite(-lam.value);
            CHECK(std::abs(mu(p, neg) + mu(q, lam) - 1.0) < 1e-12);
            CHECK(std::abs(nu(p, neg) - nu(q, lam)) < 1e-12);
            const Complex mq = mu(q, lam), nq = nu(q, lam);
            CHECK(std::abs(nq * nq - mq * (1.0 - mq)) < 1e-12);
        }
    }
}

TEST_CASE("mu_2 is real and strictly increasing") {
    // |lambda| <= 3 keeps the increments above double resolution
    double prev = -1.0;
    for (int i = 0; i <= 200; ++i) {
        const double lam = -3.0 + 6.0 * i / 200;
        const Complex v = mu(2.0, CompactifiedReal::finite(lam));
        CHECK(std::abs(v.imag()) < 1e-15);
        CHECK(v.real() > prev);
        prev = v.real();
    }
}

TEST_CASE("mu traces a simple arc from 0 to 1") {
    // n = 10 keeps the extreme finite samples resolvable from the endpoints
    const auto grid = lambda_grid(10);
    for (double p : {1.5, 3.0}) {
        std::vector<Complex> vals;
        for (const auto& lam : grid) vals.push_back(mu(p, lam));
        CHECK(vals.front() == Complex(0.0, 0.0));
        CHECK(vals.back() == Complex(1.0, 0.0));
        for (size_t i = 0; i < vals.size(); ++i)
            for (size_t j = i + 1; j < vals.size(); ++j)
                CHECK(std::abs(vals[i] - vals[j]) > 1e-12);
    }
}

TEST_CASE("lambda grid layout") {
    CHECK_THROWS(lambda_grid(1));
    const auto g2 = lambda_grid(2);
    REQUIRE(g2.size() == 4);
    CHECK(g2.front().is_neg_inf());
    CHECK(g2.back().is_pos_inf());
    CHECK(g2[1].value == doctest::Approx(std::tan(-kPi / 6.0)));
    CHECK(g2[2].value == doctest::Approx(std::tan(kPi / 6.0)));
    const auto g3 = lambda_grid(3);
    CHECK(g3[2].value == doctest::Approx(0.0));
    const auto g9 = lambda_grid(9);
    for (size_t i = 0; i + 1 < g9.size(); ++i) CHECK(g9[i] < g9[i + 1]);
}
