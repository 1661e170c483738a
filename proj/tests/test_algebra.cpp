#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "thop/algebra.hpp"

#include <cmath>
#include <random>

using namespace thop;

namespace {

std::mt19937_64 rng(777001);

Complex rand_unit_box() {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    while (true) {
        Complex c{u(rng), u(rng)};
        if (std::abs(c) > 0.25) return c;
    }
}

PCMultiplier random_pc(int max_jumps = 4) {
    std::uniform_int_distribution<int> nj(1, max_jumps);
    std::uniform_real_distribution<double> ang(0.02, kTwoPi - 0.02);
    const int n = nj(rng);
    std::vector<double> breaks;
    for (int i = 0; i < n; ++i) breaks.push_back(ang(rng));
    std::sort(breaks.begin(), breaks.end());
    bool ok = true;
    for (size_t i = 0; i + 1 < breaks.size(); ++i)
        ok &= breaks[i + 1] - breaks[i] > 0.05;
    if (!ok) return random_pc(max_jumps);
    std::vector<Complex> values;
    for (int i = 0; i < n; ++i) values.push_back(rand_unit_box());
    return PCMultiplier::piecewise_constant(breaks, values);
}

Generator random_generator() { return Generator(random_pc(), random_pc()); }

OperatorExpr random_expr(int max_terms = 3, int max_factors = 3) {
    std::uniform_int_distribution<int> nt(1, max_terms);
    std::uniform_int_distribution<int> nf(1, max_factors);
    std::uniform_int_distribution<int> kind(0, 9);
    OperatorExpr e;
    e.k = 1;
    const int terms = nt(rng);
    for (int t = 0; t < terms; ++t) {
        ExprTerm term;
        term.weight = rand_unit_box();
        const int nfac = nf(rng);
        for (int f = 0; f < nfac; ++f) {
            const int k = kind(rng);
            if (k == 0) term.factors.push_back(Factor::identity());
            else if (k == 1) term.factors.push_back(Factor::compact());
            else term.factors.push_back(Factor::generator(random_generator()));
        }
        e.terms.push_back(std::move(term));
    }
    return e;
}

CMatrix smb_at(const OperatorExpr& e, double p, double theta, CompactifiedReal lam) {
    return smb(e, p, CircPoint(theta), lam).mat;
}

}  // namespace

TEST_CASE("symbol of the identity") {
    const OperatorExpr e = OperatorExpr::identity();
    for (double th : {0.0, 0.7, kPi / 2, kPi}) {
        const auto v = smb(e, 2.0, CircPoint(th), CompactifiedReal::finite(0.3));
        if (v.scalar_point) {
            CHECK(std::abs(v.mat(0, 0) - 1.0) < 1e-15);
        } else {
            CHECK((v.mat - CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15);
        }
    }
}

TEST_CASE("symbol of the characteristic-arc generator is diag(mu, 1-mu)") {
    // chi_t: indicator of the arc from t through -1 to conj(t)
    const double theta = 1.1;
    const PCMultiplier chi = PCMultiplier::indicator(theta, kTwoPi - theta);
    const Generator g(chi, PCMultiplier());
    for (double p : {1.5, 2.0, 3.0}) {
        const double q = conjugate_exponent(p);
        for (double lv : {-2.0, 0.0, 0.9}) {
            const auto lam = CompactifiedReal::finite(lv);
            const CMatrix m = smb_generator(g, p, CircPoint(theta), lam).mat;
            const Complex mq = mu(q, lam);
            CHECK(std::abs(m(0, 0) - mq) < 1e-13);
            CHECK(std::abs(m(1, 1) - (1.0 - mq)) < 1e-13);
            CHECK(std::abs(m(0, 1)) < 1e-15);
            CHECK(std::abs(m(1, 0)) < 1e-15);
        }
    }
}

TEST_CASE("symbol of H(f) at t = 1 is 2i nu_q") {
    const Generator g(PCMultiplier(), PCMultiplier::sawtooth());
    for (double p : {1.5, 2.0, 3.0}) {
        const double q = conjugate_exponent(p);
        for (double lv : {-1.0, 0.0, 2.0}) {
            const auto lam = CompactifiedReal::finite(lv);
            const auto v = smb_generator(g, p, CircPoint(0.0), lam);
            REQUIRE(v.scalar_point);
            CHECK(std::abs(v.mat(0, 0) - 2.0 * Complex(0.0, 1.0) * nu(q, lam)) < 1e-13);
        }
    }
}

TEST_CASE("lower half circle is rejected") {
    const OperatorExpr e = OperatorExpr::identity();
    CHECK_THROWS(smb(e, 2.0, CircPoint(4.0), CompactifiedReal::finite(0.0)));
}

TEST_CASE("symbol homomorphism on random expressions") {
    for (int rep = 0; rep < 12; ++rep) {
        const OperatorExpr e1 = random_expr();
        const OperatorExpr e2 = random_expr();
        const OperatorExpr prod = expr_mul(e1, e2);
        const OperatorExpr sum = expr_add(e1, e2);
        for (double th : {0.0, 0.9, 2.2, kPi}) {
            for (double lv : {-1.4, 0.0, 0.8}) {
                const auto lam = CompactifiedReal::finite(lv);
                const CMatrix a = smb_at(e1, 1.7, th, lam);
                const CMatrix b = smb_at(e2, 1.7, th, lam);
                const CMatrix ab = smb_at(prod, 1.7, th, lam);
                const CMatrix apb = smb_at(sum, 1.7, th, lam);
                CHECK((ab - a * b).cwiseAbs().maxCoeff() < 1e-10);
                CHECK((apb - (a + b)).cwiseAbs().maxCoeff() < 1e-10);
            }
        }
    }
}

TEST_CASE("product identity T(ab) = T(a)T(b) + H(a)H(b~) at the symbol level") {
    for (int rep = 0; rep < 10; ++rep) {
        const PCMultiplier a = random_pc();
        const PCMultiplier b = random_pc();
        const OperatorExpr lhs = OperatorExpr::from(Generator(mul(a, b), PCMultiplier()));
        const OperatorExpr rhs = expr_add(
            expr_mul(OperatorExpr::from(Generator(a, PCMultiplier())),
                     OperatorExpr::from(Generator(b, PCMultiplier()))),
            expr_mul(OperatorExpr::from(Generator(PCMultiplier(), a)),
                     OperatorExpr::from(Generator(PCMultiplier(), b.reflect_tilde()))));
        for (double th : {0.0, 0.45, 1.8, kPi}) {
            for (double lv : {-0.9, 0.15, 3.0}) {
                const auto lam = CompactifiedReal::finite(lv);
                const CMatrix l = smb_at(lhs, 2.4, th, lam);
                const CMatrix r = smb_at(rhs, 2.4, th, lam);
                CHECK((l - r).cwiseAbs().maxCoeff() < 1e-12);
            }
        }
    }
}

TEST_CASE("interior symbol is exactly diagonal at lambda = +-inf") {
    for (int rep = 0; rep < 6; ++rep) {
        const OperatorExpr e = random_expr();
        for (double th : {0.8, 1.9, 2.7}) {
            for (bool pos : {false, true}) {
                const CMatrix m = smb_at(e, 1.6, th,
                                         pos ? CompactifiedReal::pos_inf()
                                             : CompactifiedReal::neg_inf());
                CHECK(std::abs(m(0, 1)) == 0.0);
                CHECK(std::abs(m(1, 0)) == 0.0);
            }
        }
    }
}

TEST_CASE("Hankel part with continuous symbol contributes nothing") {
    for (int rep = 0; rep < 4; ++rep) {
        const PCMultiplier a = random_pc();
        std::vector<TrigTerm> tt{{-1, rand_unit_box()}, {0, rand_unit_box()}, {2, rand_unit_box()}};
        const PCMultiplier b_cont = PCMultiplier::from_trig(tt);
        const OperatorExpr with = OperatorExpr::from(Generator(a, b_cont));
        const OperatorExpr without = OperatorExpr::from(Generator(a, PCMultiplier()));
        for (double th : {0.0, 0.6, 2.0, kPi})
            for (double lv : {-1.0, 0.2})
                CHECK((smb_at(with, 2.0, th, CompactifiedReal::finite(lv)) -
                       smb_at(without, 2.0, th, CompactifiedReal::finite(lv)))
                          .cwiseAbs()
                          .maxCoeff() < 1e-12);
    }
}

TEST_CASE("matrix generator symbol") {
    MatrixGenerator g{MultMatrix::identity(2), MultMatrix::identity(2)};
    const CMatrix m = smb_matrix_generator(g, 2.0, CircPoint(1.0), CompactifiedReal::finite(0.4));
    CHECK((m - CMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-14);

    // k=1, continuous entries collapse to diag(a(t), b(t))
    MatrixGenerator h{MultMatrix::scalar(PCMultiplier::trig_monomial(1)),
                      MultMatrix::scalar(PCMultiplier::constant(Complex(2.0, 1.0)))};
    const double th = 2.2;
    const CMatrix mh = smb_matrix_generator(h, 1.8, CircPoint(th), CompactifiedReal::finite(-0.7));
    CHECK(std::abs(mh(0, 0) - std::polar(1.0, th)) < 1e-13);
    CHECK(std::abs(mh(1, 1) - Complex(2.0, 1.0)) < 1e-13);
    CHECK(std::abs(mh(0, 1)) < 1e-15);
    CHECK(std::abs(mh(1, 0)) < 1e-15);

    // k=1 with a jump at t and b = 1: at lambda = +-inf the diagonal carries
    // the one-sided values of a and the off-diagonal vanishes exactly
    MatrixGenerator j{MultMatrix::scalar(PCMultiplier::indicator(1.0, 4.0)),
                      MultMatrix::scalar(PCMultiplier::constant(1.0))};
    const CMatrix jm = smb_matrix_generator(j, 2.0, CircPoint(1.0), CompactifiedReal::pos_inf());
    CHECK(std::abs(jm(0, 0) - 1.0) < 1e-15);  // a(t^+) = 1 inside the arc
    CHECK(std::abs(jm(0, 1)) == 0.0);
    CHECK(std::abs(jm(1, 0)) == 0.0);
    const CMatrix jn = smb_matrix_generator(j, 2.0, CircPoint(1.0), CompactifiedReal::neg_inf());
    CHECK(std::abs(jn(0, 0) - 0.0) < 1e-15);  // a(t^-) = 0 outside
}

TEST_CASE("scalar case of the matrix symbol reproduces the Gelfand transform") {
    for (int rep = 0; rep < 5; ++rep) {
        const PCMultiplier a = random_pc();
        MatrixGenerator g{MultMatrix::scalar(a), MultMatrix::scalar(PCMultiplier::constant(1.0))};
        for (double th : {0.4, 1.3, 3.3, 5.1}) {
            for (double lv : {-1.1, 0.0, 0.6}) {
                const auto lam = CompactifiedReal::finite(lv);
                const CMatrix m = smb_matrix_generator(g, 1.4, CircPoint(th), lam);
                const Complex mq = mu(conjugate_exponent(1.4), lam);
                const Complex want =
                    a.eval_minus(th) * (1.0 - mq) + a.eval_plus(th) * mq;
                CHECK(std::abs(m(0, 0) - want) < 1e-13);
                CHECK(std::abs(m(1, 1) - 1.0) < 1e-13);
            }
        }
    }
}

TEST_CASE("is_fredholm on the identity") {
    const FredholmVerdict v = is_fredholm(OperatorExpr::identity(), 2.0, {32, 17});
    CHECK(v.status == Fredholmness::Yes);
    CHECK(v.min_abs_det == doctest::Approx(1.0));
}

TEST_CASE("chord through zero is detected with the right witness") {
    // a = 2 chi - 1 with jumps at +-i, p = 2: the arc from -1 to 1 at t = i
    // crosses the origin at lambda = 0
    const PCMultiplier chi = PCMultiplier::indicator(kPi / 2.0, 3.0 * kPi / 2.0);
    const PCMultiplier a = sub(scale(chi, 2.0), PCMultiplier::constant(1.0));
    const OperatorExpr e = OperatorExpr::from(Generator(a, PCMultiplier()));
    const FredholmVerdict v = is_fredholm(e, 2.0, {64, 65});
    CHECK(v.status == Fredholmness::No);
    CHECK(angle_dist(v.witness_theta, kPi / 2.0) < 1e-2);
    CHECK(v.witness_lambda.is_finite());
    CHECK(std::abs(v.witness_lambda.value) < 1e-2);
}

TEST_CASE("T(t) is Fredholm") {
    const OperatorExpr e = OperatorExpr::from(Generator(PCMultiplier::trig_monomial(1),
                                                        PCMultiplier()));
    const FredholmVerdict v = is_fredholm(e, 2.0, {64, 33});
    CHECK(v.status == Fredholmness::Yes);
    CHECK(v.min_abs_det > 0.5);
}

TEST_CASE("flip automorphism preserves the verdict") {
    int fredholm_seen = 0;
    for (int rep = 0; rep < 10; ++rep) {
        const OperatorExpr e = random_expr(2, 2);
        const OperatorExpr f = expr_flip(e);
        const FredholmVerdict ve = is_fredholm(e, 1.5, {48, 25});
        const FredholmVerdict vf = is_fredholm(f, 1.5, {48, 25});
        CHECK(ve.status == vf.status);
        if (ve.status == Fredholmness::Yes) ++fredholm_seen;
    }
    CHECK(fredholm_seen > 0);
}

TEST_CASE("essential spectrum cloud") {
    const auto id_cloud = essential_spectrum_cloud(OperatorExpr::identity(), 2.0, {16, 9});
    for (const auto& pt : id_cloud) CHECK(std::abs(pt.z - 1.0) < 1e-13);

    // T(a) with continuous a: cloud stays on the range of a
    const PCMultiplier a = PCMultiplier::trig_monomial(1);
    const auto t_cloud = essential_spectrum_cloud(
        OperatorExpr::from(Generator(a, PCMultiplier())), 2.0, {64, 9});
    for (const auto& pt : t_cloud) CHECK(std::abs(std::abs(pt.z) - 1.0) < 1e-9);

    // H(f): cloud traces 2i nu_q union {0}
    const auto h_cloud = essential_spectrum_cloud(
        OperatorExpr::from(Generator(PCMultiplier(), PCMultiplier::sawtooth())), 2.0,
        {32, 17});
    const double q = 2.0;
    bool saw_nonzero = false;
    for (const auto& pt : h_cloud) {
        if (std::abs(pt.z) < 1e-12) continue;
        saw_nonzero = true;
        CHECK(std::abs(pt.z - 2.0 * Complex(0.0, 1.0) * nu(q, pt.lambda)) < 1e-10);
    }
    CHECK(saw_nonzero);
}
