#include "thop/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace thop {

namespace {

constexpr double kScalarPointTol = 1e-12;

std::vector<double> sorted_unique(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end(),
                        [](double a, double b) { return b - a <= kAngleTol; }),
            v.end());
    return v;
}

}  // namespace

MultMatrix MultMatrix::scalar(PCMultiplier a) {
    MultMatrix m;
    m.k = 1;
    m.m.push_back(std::move(a));
    return m;
}

MultMatrix MultMatrix::identity(int k) {
    MultMatrix m = zero(k);
    for (int i = 0; i < k; ++i) m.at(i, i) = PCMultiplier::constant(1.0);
    return m;
}

MultMatrix MultMatrix::zero(int k) {
    MultMatrix m;
    m.k = k;
    m.m.assign(static_cast<size_t>(k) * k, PCMultiplier());
    return m;
}

MultMatrix MultMatrix::constant(const CMatrix& c) {
    MultMatrix m = zero(static_cast<int>(c.rows()));
    for (int i = 0; i < m.k; ++i)
        for (int j = 0; j < m.k; ++j)
            m.at(i, j) = PCMultiplier::constant(c(i, j));
    return m;
}

CMatrix MultMatrix::limit_plus(double theta) const {
    CMatrix out(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) out(i, j) = at(i, j).eval_plus(theta);
    return out;
}

CMatrix MultMatrix::limit_minus(double theta) const {
    CMatrix out(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) out(i, j) = at(i, j).eval_minus(theta);
    return out;
}

MultMatrix MultMatrix::reflect_tilde() const {
    MultMatrix out = *this;
    for (auto& e : out.m) e = e.reflect_tilde();
    return out;
}

MultMatrix MultMatrix::reflect_hat() const {
    MultMatrix out = *this;
    for (auto& e : out.m) e = e.reflect_hat();
    return out;
}

std::vector<double> MultMatrix::jump_angles() const {
    std::vector<double> all;
    for (const auto& e : m) {
        auto j = e.jump_set();
        all.insert(all.end(), j.begin(), j.end());
    }
    return sorted_unique(std::move(all));
}

Generator::Generator(MultMatrix a_, MultMatrix b_) : a(std::move(a_)), b(std::move(b_)) {
    if (a.k != b.k) throw std::invalid_argument("generator block sizes differ");
}

Generator::Generator(PCMultiplier a_, PCMultiplier b_)
    : a(MultMatrix::scalar(std::move(a_))), b(MultMatrix::scalar(std::move(b_))) {}

OperatorExpr OperatorExpr::from(Generator g) {
    OperatorExpr e;
    e.k = g.k();
    e.terms.push_back({Complex(1.0, 0.0), {Factor::generator(std::move(g))}});
    return e;
}

OperatorExpr OperatorExpr::identity(int k) {
    OperatorExpr e;
    e.k = k;
    e.terms.push_back({Complex(1.0, 0.0), {Factor::identity()}});
    return e;
}

OperatorExpr OperatorExpr::compact(int k) {
    OperatorExpr e;
    e.k = k;
    e.terms.push_back({Complex(1.0, 0.0), {Factor::compact()}});
    return e;
}

bool OperatorExpr::single_generator(Generator* out) const {
    if (terms.size() != 1 || terms[0].factors.size() != 1) return false;
    if (terms[0].factors[0].kind != FactorKind::Gen) return false;
    if (terms[0].weight != Complex(1.0, 0.0)) return false;
    if (out) *out = terms[0].factors[0].gen;
    return true;
}

std::vector<double> OperatorExpr::jump_angles() const {
    std::vector<double> all;
    for (const auto& t : terms)
        for (const auto& f : t.factors) {
            if (f.kind != FactorKind::Gen) continue;
            for (const MultMatrix* mm : {&f.gen.a, &f.gen.b}) {
                auto j = mm->jump_angles();
                all.insert(all.end(), j.begin(), j.end());
            }
        }
    return sorted_unique(std::move(all));
}

OperatorExpr expr_add(const OperatorExpr& a, const OperatorExpr& b) {
    if (a.k != b.k) throw std::invalid_argument("expression block sizes differ");
    OperatorExpr e = a;
    e.terms.insert(e.terms.end(), b.terms.begin(), b.terms.end());
    return e;
}

OperatorExpr expr_sub(const OperatorExpr& a, const OperatorExpr& b) {
    return expr_add(a, expr_scale(b, Complex(-1.0, 0.0)));
}

OperatorExpr expr_mul(const OperatorExpr& a, const OperatorExpr& b) {
    if (a.k != b.k) throw std::invalid_argument("expression block sizes differ");
    OperatorExpr e;
    e.k = a.k;
    for (const auto& ta : a.terms)
        for (const auto& tb : b.terms) {
            ExprTerm t;
            t.weight = ta.weight * tb.weight;
            t.factors = ta.factors;
            t.factors.insert(t.factors.end(), tb.factors.begin(), tb.factors.end());
            e.terms.push_back(std::move(t));
        }
    return e;
}

OperatorExpr expr_scale(const OperatorExpr& a, Complex s) {
    OperatorExpr e = a;
    for (auto& t : e.terms) t.weight *= s;
    return e;
}

OperatorExpr expr_flip(const OperatorExpr& a) {
    OperatorExpr e = a;
    for (auto& t : e.terms)
        for (auto& f : t.factors) {
            if (f.kind != FactorKind::Gen) continue;
            f.gen.a = f.gen.a.reflect_hat();
            f.gen.b = f.gen.b.reflect_hat();
            for (auto& entry : f.gen.b.m) entry = negate(entry);
        }
    return e;
}

bool is_scalar_point(double theta) {
    theta = normalize_angle(theta);
    return theta <= kScalarPointTol || std::abs(theta - kPi) <= kScalarPointTol ||
           kTwoPi - theta <= kScalarPointTol;
}

ExprEvaluator::ExprEvaluator(const OperatorExpr& e, double p)
    : expr_(&e), q_(conjugate_exponent(p)) {
    limits_.resize(e.terms.size());
}

void ExprEvaluator::set_theta(double theta) {
    theta_ = normalize_angle(theta);
    const double conj = conj_angle(theta_);
    for (size_t ti = 0; ti < expr_->terms.size(); ++ti) {
        const auto& factors = expr_->terms[ti].factors;
        limits_[ti].resize(factors.size());
        for (size_t fi = 0; fi < factors.size(); ++fi) {
            FactorLimits& l = limits_[ti][fi];
            l.kind = factors[fi].kind;
            if (l.kind != FactorKind::Gen) continue;
            const Generator& g = factors[fi].gen;
            l.a_tp = g.a.limit_plus(theta_);
            l.a_tm = g.a.limit_minus(theta_);
            l.a_cp = g.a.limit_plus(conj);
            l.a_cm = g.a.limit_minus(conj);
            l.b_tp = g.b.limit_plus(theta_);
            l.b_tm = g.b.limit_minus(theta_);
            l.b_cp = g.b.limit_plus(conj);
            l.b_cm = g.b.limit_minus(conj);
        }
    }
}

CMatrix ExprEvaluator::interior(CompactifiedReal lambda) const {
    const int k = expr_->k;
    const int n = 2 * k;
    const Complex m = mu(q_, lambda);
    const Complex nv = nu(q_, lambda);
    CMatrix acc = CMatrix::Zero(n, n);
    CMatrix factor(n, n);
    for (size_t ti = 0; ti < expr_->terms.size(); ++ti) {
        const auto& term = expr_->terms[ti];
        bool dead = false;
        CMatrix prod = CMatrix::Identity(n, n);
        for (size_t fi = 0; fi < term.factors.size(); ++fi) {
            const FactorLimits& l = limits_[ti][fi];
            if (l.kind == FactorKind::Compact) { dead = true; break; }
            if (l.kind == FactorKind::Identity) continue;
            factor.topLeftCorner(k, k) = l.a_tp * m + l.a_tm * (1.0 - m);
            factor.topRightCorner(k, k) = (l.b_tp - l.b_tm) * nv;
            factor.bottomLeftCorner(k, k) = (l.b_cm - l.b_cp) * nv;
            factor.bottomRightCorner(k, k) = l.a_cm * (1.0 - m) + l.a_cp * m;
            prod = prod * factor;
        }
        if (!dead) acc += term.weight * prod;
    }
    return acc;
}

CMatrix ExprEvaluator::scalar_point(CompactifiedReal lambda) const {
    const int k = expr_->k;
    const Complex m = mu(q_, lambda);
    const Complex nv = nu(q_, lambda);
    const double sign = (theta_ <= kScalarPointTol || kTwoPi - theta_ <= kScalarPointTol)
                            ? 1.0 : -1.0;
    const Complex it(0.0, sign);
    CMatrix acc = CMatrix::Zero(k, k);
    for (size_t ti = 0; ti < expr_->terms.size(); ++ti) {
        const auto& term = expr_->terms[ti];
        bool dead = false;
        CMatrix prod = CMatrix::Identity(k, k);
        for (size_t fi = 0; fi < term.factors.size(); ++fi) {
            const FactorLimits& l = limits_[ti][fi];
            if (l.kind == FactorKind::Compact) { dead = true; break; }
            if (l.kind == FactorKind::Identity) continue;
            prod = prod * (l.a_tp * m + l.a_tm * (1.0 - m) + it * (l.b_tp - l.b_tm) * nv);
        }
        if (!dead) acc += term.weight * prod;
    }
    return acc;
}

CMatrix ExprEvaluator::t_limit(bool from_below) const {
    const int k = expr_->k;
    const int n = 2 * k;
    CMatrix acc = CMatrix::Zero(n, n);
    CMatrix factor = CMatrix::Zero(n, n);
    for (size_t ti = 0; ti < expr_->terms.size(); ++ti) {
        const auto& term = expr_->terms[ti];
        bool dead = false;
        CMatrix prod = CMatrix::Identity(n, n);
        for (size_t fi = 0; fi < term.factors.size(); ++fi) {
            const FactorLimits& l = limits_[ti][fi];
            if (l.kind == FactorKind::Compact) { dead = true; break; }
            if (l.kind == FactorKind::Identity) continue;
            factor.setZero();
            if (from_below) {
                factor.topLeftCorner(k, k) = l.a_tm;
                factor.bottomRightCorner(k, k) = l.a_cp;
            } else {
                factor.topLeftCorner(k, k) = l.a_tp;
                factor.bottomRightCorner(k, k) = l.a_cm;
            }
            prod = prod * factor;
        }
        if (!dead) acc += term.weight * prod;
    }
    return acc;
}

CMatrix ExprEvaluator::a22_at_inf(bool pos) const {
    const CMatrix full = interior(pos ? CompactifiedReal::pos_inf()
                                      : CompactifiedReal::neg_inf());
    const int k = expr_->k;
    return full.bottomRightCorner(k, k);
}

SymbolValue smb(const OperatorExpr& e, double p, CircPoint t, CompactifiedReal lambda) {
    const double theta = t.theta;
    if (theta > kPi + kScalarPointTol && kTwoPi - theta > kScalarPointTol)
        throw std::invalid_argument("smb: point lies in the open lower half circle");
    ExprEvaluator ev(e, p);
    ev.set_theta(theta);
    SymbolValue v;
    v.scalar_point = is_scalar_point(theta);
    v.mat = v.scalar_point ? ev.scalar_point(lambda) : ev.interior(lambda);
    return v;
}

SymbolValue smb_generator(const Generator& g, double p, CircPoint t,
                          CompactifiedReal lambda) {
    return smb(OperatorExpr::from(g), p, t, lambda);
}

CMatrix smb_matrix_generator(const MatrixGenerator& g, double p, CircPoint t,
                             CompactifiedReal lambda) {
    const double q = conjugate_exponent(p);
    const Complex m = mu(q, lambda);
    const Complex nv = nu(q, lambda);
    const int k = g.k();
    const CMatrix ap = g.a.limit_plus(t.theta), am = g.a.limit_minus(t.theta);
    const CMatrix bp = g.b.limit_plus(t.theta), bm = g.b.limit_minus(t.theta);
    CMatrix out(2 * k, 2 * k);
    out.topLeftCorner(k, k) = am + (ap - am) * m;
    out.topRightCorner(k, k) = (bp - bm) * nv;
    out.bottomLeftCorner(k, k) = (ap - am) * nv;
    out.bottomRightCorner(k, k) = bp - (bp - bm) * m;
    return out;
}

namespace detail {

// One-dimensional symbol sweep: |det| samples along either a lambda sweep at
// a fixed angle or a t sweep across a continuity segment.
struct SweepSample {
    double param;
    double theta;
    CompactifiedReal lambda;
    double abs_det;
};

}  // namespace detail

namespace {

double abs_det(const CMatrix& m) { return std::abs(m.determinant()); }

CompactifiedReal lambda_of_param(double u) {
    if (u <= 0.0) return CompactifiedReal::neg_inf();
    if (u >= 1.0) return CompactifiedReal::pos_inf();
    return CompactifiedReal::finite(std::tan(kPi * (u - 0.5)));
}

struct MinTracker {
    double min_v = std::numeric_limits<double>::infinity();
    double max_v = 0.0;
    double witness_theta = 0.0;
    CompactifiedReal witness_lambda;
    size_t samples = 0;

    void feed(double v, double theta, CompactifiedReal lam) {
        ++samples;
        if (v < min_v) {
            min_v = v;
            witness_theta = theta;
            witness_lambda = lam;
        }
        max_v = std::max(max_v, v);
    }
};

// golden-section style local refinement of f over [brackets] around u0
template <typename F>
void refine_min_1d(const F& f, double lo, double u0, double hi, int depth,
                   MinTracker& tracker, double theta_of_sweep, bool lambda_sweep) {
    double a = lo, m = u0, b = hi;
    double fm = f(m);
    for (int d = 0; d < depth; ++d) {
        const double l = 0.5 * (a + m), r = 0.5 * (m + b);
        const double fl = f(l), fr = f(r);
        if (lambda_sweep) {
            tracker.feed(fl, theta_of_sweep, lambda_of_param(l));
            tracker.feed(fr, theta_of_sweep, lambda_of_param(r));
        } else {
            tracker.feed(fl, l, CompactifiedReal::finite(0.0));
            tracker.feed(fr, r, CompactifiedReal::finite(0.0));
        }
        if (fl <= fm && fl <= fr) { b = m; m = l; fm = fl; }
        else if (fr <= fm && fr <= fl) { a = m; m = r; fm = fr; }
        else { a = l; b = r; }
    }
}

}  // namespace

FredholmVerdict is_fredholm(const OperatorExpr& e, double p, const ResolutionSpec& res) {
    ExprEvaluator ev(e, p);
    MinTracker tracker;

    // relevant angles on the closed upper half circle
    std::vector<double> special{0.0, kPi};
    for (double phi : e.jump_angles()) {
        const double th = phi <= kPi ? phi : kTwoPi - phi;
        if (th > kAngleTol && th < kPi - kAngleTol) special.push_back(th);
    }
    special = sorted_unique(std::move(special));

    const int nl = std::max(5, res.lambda_points);
    std::vector<double> us(nl);
    for (int i = 0; i < nl; ++i) us[i] = static_cast<double>(i) / (nl - 1);

    struct SweepRecord {
        bool lambda_sweep;
        double theta;       // fixed angle for lambda sweeps
        double param;
        double value;
        double lo, hi;      // parameter range of the sweep
    };
    std::vector<SweepRecord> best_per_sweep;

    // lambda sweeps at every special angle
    for (double th : special) {
        ev.set_theta(th);
        const bool sp = is_scalar_point(th);
        SweepRecord rec{true, th, 0.0, std::numeric_limits<double>::infinity(), 0.0, 1.0};
        for (double u : us) {
            const CompactifiedReal lam = lambda_of_param(u);
            const double v = abs_det(sp ? ev.scalar_point(lam) : ev.interior(lam));
            tracker.feed(v, th, lam);
            if (v < rec.value) { rec.value = v; rec.param = u; }
        }
        best_per_sweep.push_back(rec);
    }

    // t sweeps across the continuity segments; the symbol there is
    // lambda-independent, three lambda values guard the representation
    const CompactifiedReal probes[3] = {CompactifiedReal::neg_inf(),
                                        CompactifiedReal::finite(0.0),
                                        CompactifiedReal::pos_inf()};
    const int nt = std::max(8, res.t_per_segment);
    for (size_t si = 0; si + 1 < special.size(); ++si) {
        const double lo = special[si], hi = special[si + 1];
        SweepRecord rec{false, 0.0, 0.0, std::numeric_limits<double>::infinity(), lo, hi};
        for (int i = 1; i < nt; ++i) {
            const double th = lo + (hi - lo) * i / nt;
            ev.set_theta(th);
            for (const auto& lam : probes) {
                const double v = abs_det(ev.interior(lam));
                tracker.feed(v, th, lam);
                if (v < rec.value) { rec.value = v; rec.param = th; }
            }
        }
        best_per_sweep.push_back(rec);
    }

    const double eps_singular = 1e-8 * tracker.max_v;
    const double eps_safe = 1e-5 * tracker.max_v;

    if (tracker.min_v < eps_safe) {
        // refine around every sweep minimum within the uncertain band
        for (const auto& rec : best_per_sweep) {
            if (rec.value >= eps_safe) continue;
            if (rec.lambda_sweep) {
                ev.set_theta(rec.theta);
                const bool sp = is_scalar_point(rec.theta);
                auto f = [&](double u) {
                    const CompactifiedReal lam = lambda_of_param(u);
                    return abs_det(sp ? ev.scalar_point(lam) : ev.interior(lam));
                };
                const double step = 1.0 / (nl - 1);
                refine_min_1d(f, std::max(0.0, rec.param - step), rec.param,
                              std::min(1.0, rec.param + step), res.refine_depth,
                              tracker, rec.theta, true);
            } else {
                auto f = [&](double th) {
                    ev.set_theta(th);
                    return abs_det(ev.interior(CompactifiedReal::finite(0.0)));
                };
                const double step = (rec.hi - rec.lo) / nt;
                refine_min_1d(f, std::max(rec.lo, rec.param - step), rec.param,
                              std::min(rec.hi, rec.param + step),
                              res.refine_depth, tracker, 0.0, false);
            }
        }
    }

    FredholmVerdict verdict;
    verdict.min_abs_det = tracker.min_v;
    verdict.max_abs_det = tracker.max_v;
    verdict.witness_theta = tracker.witness_theta;
    verdict.witness_lambda = tracker.witness_lambda;
    verdict.samples = tracker.samples;
    if (tracker.max_v == 0.0 || tracker.min_v < eps_singular)
        verdict.status = Fredholmness::No;
    else if (tracker.min_v < eps_safe)
        verdict.status = Fredholmness::Unresolved;
    else
        verdict.status = Fredholmness::Yes;
    return verdict;
}

FredholmVerdict is_fredholm_matrix_op(const MatrixGenerator& g, double p,
                                      const ResolutionSpec& res) {
    MinTracker tracker;
    std::vector<double> jumps = g.a.jump_angles();
    {
        auto jb = g.b.jump_angles();
        jumps.insert(jumps.end(), jb.begin(), jb.end());
        jumps = sorted_unique(std::move(jumps));
    }

    const int nl = std::max(5, res.lambda_points);
    for (double th : jumps) {
        for (int i = 0; i < nl; ++i) {
            const CompactifiedReal lam = lambda_of_param(static_cast<double>(i) / (nl - 1));
            tracker.feed(abs_det(smb_matrix_generator(g, p, CircPoint(th), lam)), th, lam);
        }
    }
    // continuity sweep over the full circle
    std::vector<double> cuts = jumps;
    if (cuts.empty()) cuts.push_back(0.0);
    const int nt = std::max(8, res.t_per_segment);
    const CompactifiedReal probes[3] = {CompactifiedReal::neg_inf(),
                                        CompactifiedReal::finite(0.0),
                                        CompactifiedReal::pos_inf()};
    for (size_t si = 0; si < cuts.size(); ++si) {
        const double lo = cuts[si];
        const double hi = (si + 1 < cuts.size()) ? cuts[si + 1] : cuts[0] + kTwoPi;
        for (int i = 1; i < nt; ++i) {
            const double th = lo + (hi - lo) * i / nt;
            for (const auto& lam : probes)
                tracker.feed(abs_det(smb_matrix_generator(g, p, CircPoint(th), lam)), th, lam);
        }
    }

    FredholmVerdict verdict;
    verdict.min_abs_det = tracker.min_v;
    verdict.max_abs_det = tracker.max_v;
    verdict.witness_theta = tracker.witness_theta;
    verdict.witness_lambda = tracker.witness_lambda;
    verdict.samples = tracker.samples;
    const double eps_singular = 1e-8 * tracker.max_v;
    const double eps_safe = 1e-5 * tracker.max_v;
    if (tracker.max_v == 0.0 || tracker.min_v < eps_singular)
        verdict.status = Fredholmness::No;
    else if (tracker.min_v < eps_safe)
        verdict.status = Fredholmness::Unresolved;
    else
        verdict.status = Fredholmness::Yes;
    return verdict;
}

std::vector<SpectrumPoint> essential_spectrum_cloud(const OperatorExpr& e, double p,
                                                    const ResolutionSpec& res) {
    ExprEvaluator ev(e, p);
    std::vector<SpectrumPoint> cloud;

    std::vector<double> special{0.0, kPi};
    for (double phi : e.jump_angles()) {
        const double th = phi <= kPi ? phi : kTwoPi - phi;
        if (th > kAngleTol && th < kPi - kAngleTol) special.push_back(th);
    }
    special = sorted_unique(std::move(special));

    const int nl = std::max(5, res.lambda_points);
    std::vector<CompactifiedReal> lams;
    for (int i = 0; i < nl; ++i) lams.push_back(lambda_of_param(static_cast<double>(i) / (nl - 1)));

    // angles: special points plus per-segment interiors
    std::vector<double> thetas = special;
    const int nt = std::max(4, res.t_per_segment / 8);
    for (size_t si = 0; si + 1 < special.size(); ++si)
        for (int i = 1; i < nt; ++i)
            thetas.push_back(special[si] + (special[si + 1] - special[si]) * i / nt);
    thetas = sorted_unique(std::move(thetas));

    for (double th : thetas) {
        ev.set_theta(th);
        const bool sp = is_scalar_point(th);
        for (const auto& lam : lams) {
            const CMatrix m = sp ? ev.scalar_point(lam) : ev.interior(lam);
            if (m.rows() == 1) {
                cloud.push_back({m(0, 0), th, lam});
            } else if (m.rows() == 2) {
                // closed-form eigenvalues of the 2x2 symbol
                const Complex tr = m(0, 0) + m(1, 1);
                const Complex det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
                const Complex disc = std::sqrt(tr * tr / 4.0 - det);
                cloud.push_back({tr / 2.0 + disc, th, lam});
                cloud.push_back({tr / 2.0 - disc, th, lam});
            } else {
                Eigen::ComplexEigenSolver<CMatrix> es(m, false);
                for (int i = 0; i < m.rows(); ++i)
                    cloud.push_back({es.eigenvalues()(i), th, lam});
            }
        }
    }
    return cloud;
}

}  // namespace thop
