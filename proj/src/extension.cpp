#include "thop/extension.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace thop {

namespace {

// Evaluator for an s x s matrix of expressions sharing one angle.
class BlockMatrixEvaluator {
public:
    BlockMatrixEvaluator(const std::vector<OperatorExpr>& blocks, int s, double p)
        : s_(s), k_(blocks.front().k) {
        evs_.reserve(blocks.size());
        for (const auto& b : blocks) evs_.emplace_back(b, p);
    }

    void set_theta(double theta) {
        for (auto& e : evs_) e.set_theta(theta);
        theta_ = theta;
    }

    // 2sk x 2sk, via the M_s(M_2) = M_2(M_s) block rearrangement
    CMatrix interior(CompactifiedReal lambda) const {
        const int sk = s_ * k_;
        CMatrix big = CMatrix::Zero(2 * sk, 2 * sk);
        for (int i = 0; i < s_; ++i)
            for (int j = 0; j < s_; ++j) {
                const CMatrix m = evs_[static_cast<size_t>(i) * s_ + j].interior(lambda);
                for (int bi = 0; bi < 2; ++bi)
                    for (int bj = 0; bj < 2; ++bj)
                        big.block(bi * sk + i * k_, bj * sk + j * k_, k_, k_) =
                            m.block(bi * k_, bj * k_, k_, k_);
            }
        return big;
    }

    // sk x sk at t = +-1
    CMatrix scalar_point(CompactifiedReal lambda) const {
        const int sk = s_ * k_;
        CMatrix big = CMatrix::Zero(sk, sk);
        for (int i = 0; i < s_; ++i)
            for (int j = 0; j < s_; ++j)
                big.block(i * k_, j * k_, k_, k_) =
                    evs_[static_cast<size_t>(i) * s_ + j].scalar_point(lambda);
        return big;
    }

    CMatrix eval(CompactifiedReal lambda) const {
        return is_scalar_point(theta_) ? scalar_point(lambda) : interior(lambda);
    }

private:
    int s_;
    int k_;
    double theta_ = 0.0;
    std::vector<ExprEvaluator> evs_;
};

std::vector<double> verification_angles(const OperatorExpr& e, const ResolutionSpec& res) {
    std::vector<double> special{0.0, kPi};
    for (double phi : e.jump_angles()) {
        const double th = phi <= kPi ? phi : kTwoPi - phi;
        if (th > kAngleTol && th < kPi - kAngleTol) special.push_back(th);
    }
    std::sort(special.begin(), special.end());
    special.erase(std::unique(special.begin(), special.end(),
                              [](double a, double b) { return b - a <= kAngleTol; }),
                  special.end());
    std::vector<double> angles = special;
    const int per_seg = std::max(2, res.t_per_segment / 32);
    for (size_t i = 0; i + 1 < special.size(); ++i)
        for (int j = 1; j <= per_seg; ++j)
            angles.push_back(special[i] +
                             (special[i + 1] - special[i]) * j / (per_seg + 1));
    std::sort(angles.begin(), angles.end());
    return angles;
}

std::vector<CompactifiedReal> verification_lambdas(const ResolutionSpec& res) {
    const int n = std::max(5, res.lambda_points);
    std::vector<CompactifiedReal> out;
    out.push_back(CompactifiedReal::neg_inf());
    for (int j = 1; j + 1 < n; ++j) {
        const double u = static_cast<double>(j) / (n - 1);
        out.push_back(CompactifiedReal::finite(std::tan(kPi * (u - 0.5))));
    }
    out.push_back(CompactifiedReal::pos_inf());
    return out;
}

}  // namespace

OperatorExpr el(const GeneratorMatrix& beta) {
    if (beta.entries.empty() ||
        beta.entries.size() != static_cast<size_t>(beta.h) * beta.r)
        throw std::invalid_argument("el: malformed generator matrix");
    OperatorExpr e;
    e.k = beta.k();
    for (int j = 0; j < beta.h; ++j) {
        ExprTerm term;
        term.weight = Complex(1.0, 0.0);
        for (int l = 0; l < beta.r; ++l)
            term.factors.push_back(Factor::generator(beta.at(j, l)));
        e.terms.push_back(std::move(term));
    }
    return e;
}

ExtensionMatrix ext(const GeneratorMatrix& beta) {
    ExtensionMatrix x;
    x.h = beta.h;
    x.r = beta.r;
    x.k = beta.k();
    x.s = beta.h * (beta.r + 1) + 1;
    const int s = x.s, h = x.h, r = x.r, k = x.k;

    const OperatorExpr zero = expr_scale(OperatorExpr::identity(k), Complex(0.0, 0.0));
    x.blocks.assign(static_cast<size_t>(s) * s, zero);
    auto put = [&](int i, int j, OperatorExpr e) {
        x.blocks[static_cast<size_t>(i) * s + j] = std::move(e);
    };

    for (int i = 0; i + 1 < s; ++i) put(i, i, OperatorExpr::identity(k));
    // Z superdiagonal: block cell (m-1, m) holds -B_m = diag(-b_{j m})
    for (int m = 1; m <= r; ++m)
        for (int j = 0; j < h; ++j)
            put((m - 1) * h + j, m * h + j,
                expr_scale(OperatorExpr::from(beta.at(j, m - 1)), Complex(-1.0, 0.0)));
    // X: -identities in the last h rows of the band
    for (int j = 0; j < h; ++j)
        put(r * h + j, s - 1, expr_scale(OperatorExpr::identity(k), Complex(-1.0, 0.0)));
    // Y: identities in the first h columns of the bottom row
    for (int j = 0; j < h; ++j) put(s - 1, j, OperatorExpr::identity(k));

    // multiplier realization ext(beta) = T(c) + H(d)
    x.c = MultMatrix::zero(s * k);
    x.d = MultMatrix::zero(s * k);
    const PCMultiplier one = PCMultiplier::constant(1.0);
    auto put_scalar = [&](MultMatrix& mm, int bi, int bj, const PCMultiplier& v) {
        mm.at(bi, bj) = v;
    };
    auto put_block = [&](MultMatrix& mm, int bi, int bj, const MultMatrix& v, bool neg) {
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                mm.at(bi * k + i, bj * k + j) = neg ? negate(v.at(i, j)) : v.at(i, j);
    };
    for (int i = 0; i + 1 < s; ++i)
        for (int d0 = 0; d0 < k; ++d0) put_scalar(x.c, i * k + d0, i * k + d0, one);
    for (int m = 1; m <= r; ++m)
        for (int j = 0; j < h; ++j) {
            const Generator& g = beta.at(j, m - 1);
            put_block(x.c, (m - 1) * h + j, m * h + j, g.a, true);
            put_block(x.d, (m - 1) * h + j, m * h + j, g.b, true);
        }
    for (int j = 0; j < h; ++j)
        for (int d0 = 0; d0 < k; ++d0)
            put_scalar(x.c, (r * h + j) * k + d0, (s - 1) * k + d0,
                       PCMultiplier::constant(Complex(-1.0, 0.0)));
    for (int j = 0; j < h; ++j)
        for (int d0 = 0; d0 < k; ++d0)
            put_scalar(x.c, (s - 1) * k + d0, j * k + d0, one);

    return x;
}

CMatrix assembled_smb(const std::vector<OperatorExpr>& blocks, int s, double p,
                      CircPoint t, CompactifiedReal lambda) {
    BlockMatrixEvaluator ev(blocks, s, p);
    ev.set_theta(t.theta);
    return ev.eval(lambda);
}

namespace {

// The three factor matrices of the defining factorization.
struct Factorization {
    std::vector<OperatorExpr> f1, f2, f3;
    int s;
};

Factorization factorization_blocks(const GeneratorMatrix& beta) {
    const int h = beta.h, r = beta.r, k = beta.k();
    const int s = h * (r + 1) + 1;
    const ExtensionMatrix x = ext(beta);
    const OperatorExpr zero = expr_scale(OperatorExpr::identity(k), Complex(0.0, 0.0));

    Factorization f;
    f.s = s;
    f.f1.assign(static_cast<size_t>(s) * s, zero);
    f.f2.assign(static_cast<size_t>(s) * s, zero);
    f.f3.assign(static_cast<size_t>(s) * s, zero);
    auto put = [&](std::vector<OperatorExpr>& m, int i, int j, OperatorExpr e) {
        m[static_cast<size_t>(i) * s + j] = std::move(e);
    };

    // F1 = [I 0; W I],  W = (M_0, ..., M_r), M_m the length-m row products
    for (int i = 0; i < s; ++i) put(f.f1, i, i, OperatorExpr::identity(k));
    for (int m = 0; m <= r; ++m)
        for (int j = 0; j < h; ++j) {
            OperatorExpr prod = OperatorExpr::identity(k);
            for (int l = 0; l < m; ++l)
                prod = expr_mul(prod, OperatorExpr::from(beta.at(j, l)));
            put(f.f1, s - 1, m * h + j, std::move(prod));
        }

    // F2 = diag(I, ..., I, el(beta))
    for (int i = 0; i + 1 < s; ++i) put(f.f2, i, i, OperatorExpr::identity(k));
    put(f.f2, s - 1, s - 1, el(beta));

    // F3 = [Z X; 0 I]
    for (int i = 0; i < s; ++i) put(f.f3, i, i, OperatorExpr::identity(k));
    for (int m = 1; m <= r; ++m)
        for (int j = 0; j < h; ++j)
            put(f.f3, (m - 1) * h + j, m * h + j, x.at((m - 1) * h + j, m * h + j));
    for (int j = 0; j < h; ++j)
        put(f.f3, r * h + j, s - 1, expr_scale(OperatorExpr::identity(k), Complex(-1.0, 0.0)));

    return f;
}

}  // namespace

double verify_extension_factorization(const GeneratorMatrix& beta, double p,
                                      const ResolutionSpec& res) {
    const ExtensionMatrix x = ext(beta);
    const Factorization f = factorization_blocks(beta);
    const OperatorExpr elb = el(beta);

    BlockMatrixEvaluator ev_ext(x.blocks, x.s, p);
    BlockMatrixEvaluator ev1(f.f1, f.s, p);
    BlockMatrixEvaluator ev2(f.f2, f.s, p);
    BlockMatrixEvaluator ev3(f.f3, f.s, p);

    const std::vector<double> angles = verification_angles(elb, res);
    const std::vector<CompactifiedReal> lambdas = verification_lambdas(res);

    double residual = 0.0;
    for (double th : angles) {
        ev_ext.set_theta(th);
        ev1.set_theta(th);
        ev2.set_theta(th);
        ev3.set_theta(th);
        for (const auto& lam : lambdas) {
            const CMatrix lhs = ev_ext.eval(lam);
            const CMatrix rhs = ev1.eval(lam) * ev2.eval(lam) * ev3.eval(lam);
            residual = std::max(residual, (lhs - rhs).cwiseAbs().maxCoeff());
        }
    }
    return residual;
}

EquivalenceReport extension_equivalence_check(const GeneratorMatrix& beta, double p,
                                              const ResolutionSpec& res) {
    const ExtensionMatrix x = ext(beta);
    const OperatorExpr elb = el(beta);

    BlockMatrixEvaluator ev_ext(x.blocks, x.s, p);
    ExprEvaluator ev_el(elb, p);

    const std::vector<double> angles = verification_angles(elb, res);
    const std::vector<CompactifiedReal> lambdas = verification_lambdas(res);

    struct Rec { double theta; CompactifiedReal lambda; double del, dext; };
    std::vector<Rec> recs;
    double max_el = 0.0, max_ext = 0.0;
    for (double th : angles) {
        ev_ext.set_theta(th);
        ev_el.set_theta(th);
        const bool sp = is_scalar_point(th);
        for (const auto& lam : lambdas) {
            const double del =
                std::abs((sp ? ev_el.scalar_point(lam) : ev_el.interior(lam)).determinant());
            const double dext = std::abs(ev_ext.eval(lam).determinant());
            recs.push_back({th, lam, del, dext});
            max_el = std::max(max_el, del);
            max_ext = std::max(max_ext, dext);
        }
    }

    EquivalenceReport rep;
    rep.points = recs.size();
    const double eps_el = 1e-8 * max_el;
    const double eps_ext = 1e-8 * max_ext;
    for (const auto& r : recs) {
        rep.max_det_gap = std::max(rep.max_det_gap, std::abs(r.del - r.dext));
        const bool inv_el = r.del >= eps_el;
        const bool inv_ext = r.dext >= eps_ext;
        if (inv_el != inv_ext) {
            rep.agree = false;
            rep.disagreements.push_back({r.theta, r.lambda, r.del, r.dext});
        }
    }
    return rep;
}

}  // namespace thop
