#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "thop/extension.hpp"
#include "thop/index.hpp"

#include <cmath>
#include <random>

using namespace thop;

namespace {

std::mt19937_64 rng(555888);

Complex rand_unit_box() {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    while (true) {
        Complex c{u(rng), u(rng)};
        if (std::abs(c) > 0.3) return c;
    }
}

PCMultiplier random_pc(int jumps = 2) {
    std::uniform_real_distribution<double> ang(0.05, kTwoPi - 0.05);
    std::vector<double> breaks;
    while (static_cast<int>(breaks.size()) < jumps) {
        const double b = ang(rng);
        bool clear = true;
        for (double x : breaks) clear &= angle_dist(x, b) > 0.2;
        if (clear) breaks.push_back(b);
    }
    std::sort(breaks.begin(), breaks.end());
    std::vector<Complex> values;
    for (int i = 0; i < jumps; ++i) values.push_back(rand_unit_box());
    return PCMultiplier::piecewise_constant(breaks, values);
}

GeneratorMatrix random_beta(int h, int r) {
    GeneratorMatrix beta;
    beta.h = h;
    beta.r = r;
    for (int i = 0; i < h * r; ++i)
        beta.entries.push_back(Generator(random_pc(), random_pc()));
    return beta;
}

const ResolutionSpec kRes{32, 17};

}  // namespace

TEST_CASE("el of small matrices") {
    GeneratorMatrix b11 = random_beta(1, 1);
    const OperatorExpr e11 = el(b11);
    CHECK(e11.terms.size() == 1);
    CHECK(e11.terms[0].factors.size() == 1);

    GeneratorMatrix b21 = random_beta(2, 1);
    const OperatorExpr e21 = el(b21);
    CHECK(e21.terms.size() == 2);

    GeneratorMatrix b12 = random_beta(1, 2);
    const OperatorExpr e12 = el(b12);
    CHECK(e12.terms.size() == 1);
    CHECK(e12.terms[0].factors.size() == 2);
    // ordered product: smb(el) = smb(g11) smb(g12)
    const CMatrix l = smb(e12, 2.0, CircPoint(0.9), CompactifiedReal::finite(0.2)).mat;
    const CMatrix f1 =
        smb_generator(b12.at(0, 0), 2.0, CircPoint(0.9), CompactifiedReal::finite(0.2)).mat;
    const CMatrix f2 =
        smb_generator(b12.at(0, 1), 2.0, CircPoint(0.9), CompactifiedReal::finite(0.2)).mat;
    CHECK((l - f1 * f2).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("extension layout for h = r = 1") {
    GeneratorMatrix beta = random_beta(1, 1);
    const ExtensionMatrix x = ext(beta);
    CHECK(x.s == 3);

    const CircPoint t(1.3);
    const auto lam = CompactifiedReal::finite(0.4);
    const CMatrix g = smb_generator(beta.at(0, 0), 2.0, t, lam).mat;

    auto blk = [&](int i, int j) { return smb(x.at(i, j), 2.0, t, lam).mat; };
    const CMatrix id = CMatrix::Identity(2, 2);
    CHECK((blk(0, 0) - id).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((blk(0, 1) + g).cwiseAbs().maxCoeff() < 1e-12);  // -g on the superdiagonal
    CHECK(blk(0, 2).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(blk(1, 0).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((blk(1, 1) - id).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((blk(1, 2) + id).cwiseAbs().maxCoeff() < 1e-14);  // -I
    CHECK((blk(2, 0) - id).cwiseAbs().maxCoeff() < 1e-14);  // Y
    CHECK(blk(2, 1).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(blk(2, 2).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("extension sizes and the X/Y pattern for h = 2, r = 1") {
    GeneratorMatrix beta = random_beta(2, 1);
    const ExtensionMatrix x = ext(beta);
    CHECK(x.s == 5);

    const CircPoint t(0.8);
    const auto lam = CompactifiedReal::neg_inf();
    auto blk = [&](int i, int j) { return smb(x.at(i, j), 2.0, t, lam).mat; };
    const CMatrix id = CMatrix::Identity(2, 2);
    // Y = (I, I, 0, 0), X = (0, 0, -I, -I)^T
    CHECK((blk(4, 0) - id).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((blk(4, 1) - id).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(blk(4, 2).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(blk(4, 3).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(blk(0, 4).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(blk(1, 4).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((blk(2, 4) + id).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((blk(3, 4) + id).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("s formula") {
    for (int h = 1; h <= 3; ++h)
        for (int r = 1; r <= 3; ++r)
            CHECK(ext(random_beta(h, r)).s == h * (r + 1) + 1);
}

TEST_CASE("factorization residual vanishes for the identity") {
    GeneratorMatrix beta;
    beta.h = beta.r = 1;
    beta.entries.push_back(Generator(PCMultiplier::constant(1.0), PCMultiplier()));
    CHECK(verify_extension_factorization(beta, 2.0, kRes) < 1e-12);
    const EquivalenceReport eq = extension_equivalence_check(beta, 2.0, kRes);
    CHECK(eq.agree);
}

TEST_CASE("factorization residual on random betas") {
    for (auto [h, r] : {std::pair{1, 2}, {2, 1}, {2, 2}, {3, 2}}) {
        const GeneratorMatrix beta = random_beta(h, r);
        CHECK(verify_extension_factorization(beta, 1.7, kRes) < 1e-9);
    }
}

TEST_CASE("multiplier realization matches the block symbols") {
    const GeneratorMatrix beta = random_beta(2, 2);
    const ExtensionMatrix x = ext(beta);
    const OperatorExpr as_gen = OperatorExpr::from(Generator(x.c, x.d));
    for (double th : {0.0, 0.9, 2.1, kPi}) {
        for (double lv : {-0.8, 0.3}) {
            const auto lam = CompactifiedReal::finite(lv);
            const CMatrix direct = smb(as_gen, 1.7, CircPoint(th), lam).mat;
            const CMatrix assembled = assembled_smb(x.blocks, x.s, 1.7, CircPoint(th), lam);
            CHECK((direct - assembled).cwiseAbs().maxCoeff() < 1e-11);
        }
    }
}

TEST_CASE("equivalence of el and ext invertibility") {
    int disagreeing = 0;
    for (int rep = 0; rep < 10; ++rep) {
        std::uniform_int_distribution<int> hr(1, 3);
        const GeneratorMatrix beta = random_beta(hr(rng), hr(rng));
        const EquivalenceReport eq = extension_equivalence_check(beta, 2.0, kRes);
        if (!eq.agree) ++disagreeing;
        CHECK(eq.max_det_gap < 1e-8 * (1.0 + eq.max_det_gap));
    }
    CHECK(disagreeing == 0);
}

TEST_CASE("index equality of el and ext") {
    int tested = 0;
    while (tested < 4) {
        std::uniform_int_distribution<int> hr(1, 2);
        const GeneratorMatrix beta = random_beta(hr(rng), hr(rng));
        const OperatorExpr e = el(beta);
        const IndexReport rel = index_TH(e, 2.0, kRes);
        if (!rel.fredholm) continue;
        const ExtensionMatrix x = ext(beta);
        const IndexReport rext =
            index_TH(OperatorExpr::from(Generator(x.c, x.d)), 2.0, kRes);
        REQUIRE(rext.fredholm);
        CHECK(rext.index == rel.index);
        ++tested;
    }
}

TEST_CASE("chord-through-zero el is singular exactly where ext is") {
    const PCMultiplier chi = PCMultiplier::indicator(kPi / 2.0, 3.0 * kPi / 2.0);
    const PCMultiplier a = sub(scale(chi, 2.0), PCMultiplier::constant(1.0));
    GeneratorMatrix beta;
    beta.h = beta.r = 1;
    beta.entries.push_back(Generator(a, PCMultiplier()));
    const EquivalenceReport eq = extension_equivalence_check(beta, 2.0, {64, 65});
    CHECK(eq.agree);  // both symbols go singular at the same points
    const FredholmVerdict v = is_fredholm(el(beta), 2.0, {64, 65});
    CHECK(v.status == Fredholmness::No);
    const ExtensionMatrix x = ext(beta);
    const FredholmVerdict vx =
        is_fredholm(OperatorExpr::from(Generator(x.c, x.d)), 2.0, {64, 65});
    CHECK(vx.status == Fredholmness::No);
}
