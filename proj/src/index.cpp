#include "thop/index.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace thop {

namespace {

constexpr double kArgStep = 1.0471975511965976;  // pi/3
constexpr int kMaxRefineDepth = 40;
constexpr double kJunctionTol = 1e-6;

CompactifiedReal lambda_of_param(double u) {
    if (u <= 0.0) return CompactifiedReal::neg_inf();
    if (u >= 1.0) return CompactifiedReal::pos_inf();
    return CompactifiedReal::finite(std::tan(kPi * (u - 0.5)));
}

// Recursive interval refinement.  An interval is split when the endpoint
// arguments differ by >= pi/3, when the chord is long against the distance
// from the origin, or when the midpoint sample strays from the chord (which
// flushes out narrow excursions that leave both endpoints unchanged).
void refine_rec(double p0, Complex z0, double p1, Complex z1, int depth,
                const std::function<Complex(double)>& eval,
                std::vector<double>& params, std::vector<Complex>& values,
                size_t& budget) {
    const double pm = 0.5 * (p0 + p1);
    if (depth >= kMaxRefineDepth || budget == 0 || !(p0 < pm && pm < p1)) {
        params.push_back(p1);
        values.push_back(z1);
        return;
    }
    const Complex zm = eval(pm);
    --budget;
    const double scale = std::min({std::abs(z0), std::abs(z1), std::abs(zm)});
    bool split = false;
    if (z0 == Complex(0.0, 0.0) || z1 == Complex(0.0, 0.0) || zm == Complex(0.0, 0.0)) {
        split = false;  // curve touches the origin; winding will refuse anyway
    } else {
        split = std::abs(std::arg(z1 / z0)) >= kArgStep ||
                std::abs(std::arg(zm / z0)) >= kArgStep ||
                std::abs(z1 - z0) >= 0.5 * scale ||
                std::abs(zm - 0.5 * (z0 + z1)) >= 0.2 * scale;
    }
    if (split) {
        refine_rec(p0, z0, pm, zm, depth + 1, eval, params, values, budget);
        refine_rec(pm, zm, p1, z1, depth + 1, eval, params, values, budget);
    } else {
        params.push_back(pm);
        values.push_back(zm);
        params.push_back(p1);
        values.push_back(z1);
    }
}

void refine(std::vector<double>& params, std::vector<Complex>& values,
            const std::function<Complex(double)>& eval) {
    if (params.size() < 2) return;
    std::vector<double> out_p{params.front()};
    std::vector<Complex> out_v{values.front()};
    size_t budget = 2000000;
    for (size_t i = 0; i + 1 < params.size(); ++i)
        refine_rec(params[i], values[i], params[i + 1], values[i + 1], 0, eval,
                   out_p, out_v, budget);
    if (budget == 0) throw std::runtime_error("curve refinement budget exhausted");
    params = std::move(out_p);
    values = std::move(out_v);
}

struct SegmentBuilder {
    int lambda_points;
    int t_points;

    CurveSegment lambda_sweep(double theta,
                              const std::function<Complex(CompactifiedReal)>& w) const {
        CurveSegment s;
        s.kind = CurveSegment::Kind::LambdaSweep;
        s.theta_a = s.theta_b = theta;
        const int n = std::max(5, lambda_points);
        for (int i = 0; i < n; ++i) {
            const double u = static_cast<double>(i) / (n - 1);
            s.params.push_back(u);
            s.values.push_back(w(lambda_of_param(u)));
        }
        refine(s.params, s.values, [&](double u) { return w(lambda_of_param(u)); });
        return s;
    }

    // endpoint values are the one-sided t limits, interior values the
    // continuity-point symbol
    CurveSegment t_sweep(double lo, double hi, const std::function<Complex(double)>& mid,
                         Complex at_lo, Complex at_hi) const {
        CurveSegment s;
        s.kind = CurveSegment::Kind::TSweep;
        s.theta_a = lo;
        s.theta_b = hi;
        const int n = std::max(4, t_points);
        s.params.push_back(lo);
        s.values.push_back(at_lo);
        for (int i = 1; i < n; ++i) {
            const double th = lo + (hi - lo) * i / n;
            s.params.push_back(th);
            s.values.push_back(mid(th));
        }
        s.params.push_back(hi);
        s.values.push_back(at_hi);
        // interior refinement only; endpoints carry one-sided limits
        refine(s.params, s.values, mid);
        return s;
    }
};

void finish_curve(OrientedCurve& c) {
    c.min_modulus = std::numeric_limits<double>::infinity();
    c.max_modulus = 0.0;
    for (const auto& s : c.segments)
        for (const auto& z : s.values) {
            const double a = std::abs(z);
            c.min_modulus = std::min(c.min_modulus, a);
            c.max_modulus = std::max(c.max_modulus, a);
        }
    c.max_junction_mismatch = 0.0;
    for (size_t i = 0; i + 1 < c.segments.size(); ++i)
        c.max_junction_mismatch = std::max(
            c.max_junction_mismatch,
            std::abs(c.segments[i].last() - c.segments[i + 1].first()));
    c.closure_error = std::abs(c.segments.back().last() - c.segments.front().first());
}

}  // namespace

size_t OrientedCurve::total_samples() const {
    size_t n = 0;
    for (const auto& s : segments) n += s.values.size();
    return n;
}

std::vector<Complex> OrientedCurve::concatenated() const {
    std::vector<Complex> out;
    out.reserve(total_samples());
    for (const auto& s : segments)
        out.insert(out.end(), s.values.begin(), s.values.end());
    return out;
}

WindingResult compute_winding(const OrientedCurve& c) {
    const std::vector<Complex> z = c.concatenated();
    if (z.size() < 2) return {0, 0.0};
    if (c.min_modulus <= 1e-8 * c.max_modulus)
        throw std::runtime_error("winding: curve passes too close to the origin");
    double total = 0.0;
    for (size_t i = 0; i + 1 < z.size(); ++i) total += std::arg(z[i + 1] / z[i]);
    total += std::arg(z.front() / z.back());  // close up
    const double turns = total / kTwoPi;
    const double rounded = std::round(turns);
    const double defect = std::abs(turns - rounded);
    if (defect > 1e-6)
        throw std::runtime_error("winding: argument total is not an integer multiple of 2*pi");
    return {static_cast<int>(rounded), defect};
}

int winding(const OrientedCurve& c) { return compute_winding(c).winding; }

OrientedCurve build_W(const OperatorExpr& e, double p, const ResolutionSpec& res) {
    const FredholmVerdict verdict = is_fredholm(e, p, res);
    if (verdict.status != Fredholmness::Yes)
        throw std::runtime_error("build_W: operator is not (numerically) Fredholm");

    ExprEvaluator ev(e, p);
    // determinants of 2k x 2k symbols need samples in proportion to their
    // polynomial degree along the arc
    SegmentBuilder sb{std::max(res.lambda_points, 32 * e.k + 1), res.t_per_segment};
    OrientedCurve curve;

    // jump angles folded into the open upper half circle
    std::vector<double> jumps;
    for (double phi : e.jump_angles()) {
        const double th = phi <= kPi ? phi : kTwoPi - phi;
        if (th > kAngleTol && th < kPi - kAngleTol) jumps.push_back(th);
    }
    std::sort(jumps.begin(), jumps.end());
    jumps.erase(std::unique(jumps.begin(), jumps.end(),
                            [](double a, double b) { return b - a <= kAngleTol; }),
                jumps.end());

    // t = 1 sweep, normalized by the value at lambda = -inf
    ev.set_theta(0.0);
    {
        const Complex norm = ev.scalar_point(CompactifiedReal::neg_inf()).determinant();
        curve.segments.push_back(sb.lambda_sweep(0.0, [&](CompactifiedReal lam) {
            return ev.scalar_point(lam).determinant() / norm;
        }));
    }

    auto interior_w = [&](double th) {
        ev.set_theta(th);
        const Complex n1 = ev.a22_at_inf(true).determinant();
        const Complex n2 = ev.a22_at_inf(false).determinant();
        return ev.interior(CompactifiedReal::finite(0.0)).determinant() / (n1 * n2);
    };
    auto t_limit_w = [&](double th, bool from_below) {
        ev.set_theta(th);
        const CMatrix m = ev.t_limit(from_below);
        const int k = e.k;
        return m.topLeftCorner(k, k).determinant() /
               m.bottomRightCorner(k, k).determinant();
    };

    std::vector<double> stops{0.0};
    stops.insert(stops.end(), jumps.begin(), jumps.end());
    stops.push_back(kPi);

    for (size_t i = 0; i + 1 < stops.size(); ++i) {
        const double lo = stops[i], hi = stops[i + 1];
        curve.segments.push_back(sb.t_sweep(lo, hi, interior_w,
                                            t_limit_w(lo, false),
                                            t_limit_w(hi, true)));
        if (i + 2 < stops.size()) {
            // interior jump: lambda sweep of the normalized determinant
            const double tau = hi;
            ev.set_theta(tau);
            const Complex n1 = ev.a22_at_inf(true).determinant();
            const Complex n2 = ev.a22_at_inf(false).determinant();
            curve.segments.push_back(sb.lambda_sweep(tau, [&](CompactifiedReal lam) {
                ev.set_theta(tau);
                return ev.interior(lam).determinant() / (n1 * n2);
            }));
        }
    }

    // t = -1 sweep, normalized by the value at lambda = +inf
    ev.set_theta(kPi);
    {
        const Complex norm = ev.scalar_point(CompactifiedReal::pos_inf()).determinant();
        curve.segments.push_back(sb.lambda_sweep(kPi, [&](CompactifiedReal lam) {
            ev.set_theta(kPi);
            return ev.scalar_point(lam).determinant() / norm;
        }));
    }

    finish_curve(curve);
    if (curve.max_junction_mismatch > kJunctionTol)
        throw std::runtime_error("build_W: junction mismatch above 1e-6");
    return curve;
}

namespace {

IndexReport report_from_curve(const OrientedCurve& curve, const FredholmVerdict& verdict) {
    IndexReport rep;
    rep.status = verdict.status;
    rep.verdict = verdict;
    rep.fredholm = verdict.status == Fredholmness::Yes;
    rep.min_modulus = curve.min_modulus;
    rep.max_junction_mismatch = curve.max_junction_mismatch;
    rep.samples = curve.total_samples();
    if (curve.min_modulus <= 1e-8 * curve.max_modulus) {
        rep.status = Fredholmness::No;
        rep.fredholm = false;
        return rep;
    }
    const WindingResult w = compute_winding(curve);
    rep.winding = w.winding;
    rep.winding_defect = w.defect;
    rep.index = -w.winding;
    return rep;
}

IndexReport not_fredholm_report(const FredholmVerdict& verdict) {
    IndexReport rep;
    rep.status = verdict.status;
    rep.verdict = verdict;
    rep.fredholm = false;
    return rep;
}

// Full-circle curve builder shared by the Gelfand and matrix-operator paths.
// `jump_angles` are the inserted arcs; `value` evaluates at (theta, lambda);
// `limit` evaluates the one-sided t limits.
OrientedCurve build_full_circle_curve(
    const std::vector<double>& jump_angles, const SegmentBuilder& sb,
    const std::function<Complex(double, CompactifiedReal)>& value,
    const std::function<Complex(double, bool)>& limit) {
    OrientedCurve curve;
    std::vector<double> jumps = jump_angles;
    std::sort(jumps.begin(), jumps.end());

    if (jumps.empty()) {
        CurveSegment s = sb.t_sweep(
            0.0, kTwoPi,
            [&](double th) { return value(th, CompactifiedReal::finite(0.0)); },
            limit(0.0, false), limit(kTwoPi, true));
        curve.segments.push_back(std::move(s));
        finish_curve(curve);
        return curve;
    }

    for (size_t i = 0; i < jumps.size(); ++i) {
        const double tau = jumps[i];
        curve.segments.push_back(sb.lambda_sweep(
            tau, [&](CompactifiedReal lam) { return value(tau, lam); }));
        const double next = (i + 1 < jumps.size()) ? jumps[i + 1] : jumps[0] + kTwoPi;
        curve.segments.push_back(sb.t_sweep(
            tau, next,
            [&](double th) { return value(th, CompactifiedReal::finite(0.0)); },
            limit(tau, false), limit(next, true)));
    }
    finish_curve(curve);
    return curve;
}

}  // namespace

IndexReport index_TH(const OperatorExpr& e, double p, const ResolutionSpec& res) {
    const FredholmVerdict verdict = is_fredholm(e, p, res);
    if (verdict.status != Fredholmness::Yes) return not_fredholm_report(verdict);
    const OrientedCurve curve = build_W(e, p, res);
    return report_from_curve(curve, verdict);
}

OrientedCurve build_gelfand_curve(const PCMultiplier& a, double p,
                                  const ResolutionSpec& res) {
    const double q = conjugate_exponent(p);
    SegmentBuilder sb{res.lambda_points, res.t_per_segment};
    auto value = [&](double th, CompactifiedReal lam) {
        const Complex m = mu(q, lam);
        return a.eval_minus(th) * (1.0 - m) + a.eval_plus(th) * m;
    };
    auto limit = [&](double th, bool from_below) {
        return from_below ? a.eval_minus(th) : a.eval_plus(th);
    };
    return build_full_circle_curve(a.jump_set(), sb, value, limit);
}

IndexReport index_toeplitz_circle(const PCMultiplier& a, double p,
                                  const ResolutionSpec& res) {
    const OrientedCurve curve = build_gelfand_curve(a, p, res);
    FredholmVerdict verdict;
    verdict.min_abs_det = curve.min_modulus;
    verdict.max_abs_det = curve.max_modulus;
    verdict.samples = curve.total_samples();
    const double eps_singular = 1e-8 * curve.max_modulus;
    const double eps_safe = 1e-5 * curve.max_modulus;
    verdict.status = curve.min_modulus < eps_singular ? Fredholmness::No
                     : curve.min_modulus < eps_safe   ? Fredholmness::Unresolved
                                                      : Fredholmness::Yes;
    if (verdict.status != Fredholmness::Yes) return not_fredholm_report(verdict);
    return report_from_curve(curve, verdict);
}

IndexReport index_matrix_op(const MatrixGenerator& g, double p,
                            const ResolutionSpec& res) {
    const FredholmVerdict verdict = is_fredholm_matrix_op(g, p, res);
    if (verdict.status != Fredholmness::Yes) return not_fredholm_report(verdict);

    SegmentBuilder sb{std::max(res.lambda_points, 32 * g.k() + 1), res.t_per_segment};
    auto value = [&](double th, CompactifiedReal lam) {
        const CMatrix m = smb_matrix_generator(g, p, CircPoint(th), lam);
        // a22(t, +inf) = b(t^-), a22(t, -inf) = b(t^+)
        const Complex n1 = g.b.limit_minus(th).determinant();
        const Complex n2 = g.b.limit_plus(th).determinant();
        return m.determinant() / (n1 * n2);
    };
    auto limit = [&](double th, bool from_below) {
        if (from_below)
            return g.a.limit_minus(th).determinant() / g.b.limit_minus(th).determinant();
        return g.a.limit_plus(th).determinant() / g.b.limit_plus(th).determinant();
    };
    std::vector<double> jumps = g.a.jump_angles();
    auto jb = g.b.jump_angles();
    jumps.insert(jumps.end(), jb.begin(), jb.end());
    std::sort(jumps.begin(), jumps.end());
    jumps.erase(std::unique(jumps.begin(), jumps.end(),
                            [](double x, double y) { return y - x <= kAngleTol; }),
                jumps.end());

    const OrientedCurve curve = build_full_circle_curve(jumps, sb, value, limit);
    if (curve.max_junction_mismatch > kJunctionTol)
        throw std::runtime_error("index_matrix_op: junction mismatch above 1e-6");
    return report_from_curve(curve, verdict);
}

MatrixGenerator doubled_matrix_of(const Generator& g) {
    if (g.k() != 1)
        throw std::invalid_argument("doubled_matrix_of: scalar generators only");
    const PCMultiplier& a = g.a.at(0, 0);
    const PCMultiplier& b = g.b.at(0, 0);
    const PCMultiplier one = PCMultiplier::constant(1.0);

    MultMatrix c = MultMatrix::zero(2);
    c.at(0, 0) = a;
    c.at(1, 0) = b.reflect_tilde();
    c.at(1, 1) = one;

    MultMatrix d = MultMatrix::zero(2);
    d.at(0, 0) = one;
    d.at(0, 1) = b;
    d.at(1, 1) = a.reflect_tilde();

    return MatrixGenerator{std::move(c), std::move(d)};
}

Separation separate_jumps(const PCMultiplier& a, const PCMultiplier& b, double p) {
    (void)p;  // the construction is p independent; p fixes the ambient space
    Separation out;

    // interior discontinuities (away from +-1)
    std::vector<double> omega0;
    for (const PCMultiplier* m : {&a, &b})
        for (double phi : m->jump_set())
            if (angle_dist(phi, 0.0) > 1e-9 && angle_dist(phi, kPi) > 1e-9)
                omega0.push_back(phi);
    std::sort(omega0.begin(), omega0.end());
    omega0.erase(std::unique(omega0.begin(), omega0.end(),
                             [](double x, double y) { return y - x <= kAngleTol; }),
                 omega0.end());

    if (omega0.empty()) {
        out.a0 = a;
        out.b0 = b;
        out.a1 = PCMultiplier::constant(1.0);
        out.b1 = PCMultiplier();
        out.phi0 = PCMultiplier::constant(1.0);
        out.phi1 = PCMultiplier();
        out.c = PCMultiplier::constant(1.0);
        out.delta = kPi / 8.0;
        return out;
    }

    // distance from {+-1} to the interior jumps and their conjugates
    double dmin = kPi;
    for (double phi : omega0)
        for (double target : {0.0, kPi})
            for (double cand : {phi, conj_angle(phi)})
                dmin = std::min(dmin, angle_dist(cand, target));
    const double delta = std::min(kPi / 8.0, dmin / 2.0);
    out.delta = delta;

    // jumps of a must clear the boundary of U
    for (double phi : a.jump_set())
        for (double edge : {delta, kPi - delta, kPi + delta, kTwoPi - delta})
            if (angle_dist(phi, edge) < 1e-6)
                throw std::runtime_error("separate_jumps: jump of a too close to the U boundary");

    const double w = delta / 3.0;

    // phi0: symmetric continuous trapezoid, 1 near +-1, 0 elsewhere
    {
        std::vector<double> nodes{w,         2.0 * w,        kPi - 2.0 * w, kPi - w,
                                  kPi + w,   kPi + 2.0 * w,  kTwoPi - 2.0 * w,
                                  kTwoPi - w};
        std::vector<Complex> vals{1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0};
        out.phi0 = PCMultiplier::piecewise_linear(nodes, vals);
        out.phi1 = sub(PCMultiplier::constant(1.0), out.phi0);
    }

    // c: piecewise linear, equal to a on the U boundary, 1 on the arcs that
    // contain the interior jumps, nonvanishing off U
    {
        std::vector<double> nodes{delta,         delta + w,      kPi - delta - w,
                                  kPi - delta,   kPi + delta,    kPi + delta + w,
                                  kTwoPi - delta - w, kTwoPi - delta};
        std::vector<Complex> vals{a.eval_plus(delta),
                                  1.0,
                                  1.0,
                                  a.eval_minus(kPi - delta),
                                  a.eval_plus(kPi + delta),
                                  1.0,
                                  1.0,
                                  a.eval_minus(kTwoPi - delta)};
        out.c = PCMultiplier::piecewise_linear(nodes, vals);
        // reject interpolants that cross zero off U
        for (size_t i = 0; i + 1 < nodes.size(); i += 1) {
            if (i == 3) continue;  // the arc through -1 lies inside U
            const Complex v1 = vals[i], v2 = vals[i + 1];
            // min |(1-s) v1 + s v2| over s in [0,1]
            const Complex dv = v2 - v1;
            double s = 0.0;
            const double n2 = std::norm(dv);
            if (n2 > 0.0)
                s = std::clamp(-(v1.real() * dv.real() + v1.imag() * dv.imag()) / n2, 0.0, 1.0);
            const double mn = std::min({std::abs(v1), std::abs(v2), std::abs(v1 + s * dv)});
            if (mn < 1e-9)
                throw std::runtime_error("separate_jumps: interpolant c vanishes between nodes " +
                                         std::to_string(i) + " and " + std::to_string(i + 1));
        }
    }

    // a0 = a on U, c off U;  a1 = 1 on U, a/c off U
    {
        const PCMultiplier one = PCMultiplier::constant(1.0);
        const std::vector<double> cuts{kTwoPi - delta, delta, kPi - delta, kPi + delta};
        // arcs: [2pi-d, d) around +1, [d, pi-d) upper gap, [pi-d, pi+d) around -1,
        //       [pi+d, 2pi-d) lower gap
        out.a0 = splice(cuts, {&a, &out.c, &a, &out.c});
        out.a1 = splice(cuts, {&one, &a, &one, &a},
                        {nullptr, &out.c, nullptr, &out.c});
    }

    out.b0 = mul(b, out.phi0);
    out.b1 = sub(b, out.b0);
    return out;
}

}  // namespace thop
