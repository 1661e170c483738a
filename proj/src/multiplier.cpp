#include "thop/multiplier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace thop {

namespace {

bool is_zero_poly(const Poly& p) {
    for (const auto& c : p)
        if (c != Complex(0.0, 0.0)) return false;
    return true;
}

void check_degree(const Poly& p, int cap, const char* what) {
    if (static_cast<int>(p.size()) - 1 > cap)
        throw std::domain_error(std::string(what) +
                                ": polynomial degree cap exceeded");
}

Poly unit_poly() { return Poly{Complex(1.0, 0.0)}; }

bool is_unit_poly(const Poly& p) {
    if (p.empty()) return false;
    if (p[0] != Complex(1.0, 0.0)) return false;
    for (size_t i = 1; i < p.size(); ++i)
        if (p[i] != Complex(0.0, 0.0)) return false;
    return true;
}

// Minimum of |c0 + c1 x| over x in [0, l] (exact for the linear case,
// sampled otherwise).  Used to reject vanishing denominators.
double min_abs_on_segment(const Poly& p, double l) {
    if (p.size() <= 1) return p.empty() ? 0.0 : std::abs(p[0]);
    if (p.size() == 2) {
        const Complex c0 = p[0], c1 = p[1];
        const double a2 = std::norm(c1);
        if (a2 == 0.0) return std::abs(c0);
        // |c0 + c1 x|^2 is a real quadratic in x; minimize on [0, l].
        double xstar = -(c0.real() * c1.real() + c0.imag() * c1.imag()) / a2;
        xstar = std::clamp(xstar, 0.0, l);
        double best = std::min(std::abs(c0), std::abs(c0 + c1 * l));
        best = std::min(best, std::abs(c0 + c1 * xstar));
        return best;
    }
    double best = std::abs(poly_eval(p, 0.0));
    const int n = 512;
    for (int i = 1; i <= n; ++i)
        best = std::min(best, std::abs(poly_eval(p, l * i / n)));
    return best;
}

void append_terms(std::vector<PieceTerm>& dst, const std::vector<PieceTerm>& src) {
    dst.insert(dst.end(), src.begin(), src.end());
}

// Merge terms that share a frequency and drop exact zeros.
void consolidate_terms(std::vector<PieceTerm>& terms) {
    std::sort(terms.begin(), terms.end(),
              [](const PieceTerm& a, const PieceTerm& b) { return a.freq < b.freq; });
    std::vector<PieceTerm> out;
    for (auto& t : terms) {
        poly_trim(t.num);
        if (t.num.empty()) continue;
        if (!out.empty() && out.back().freq == t.freq) {
            out.back().num = poly_add(out.back().num, t.num);
            poly_trim(out.back().num);
            if (out.back().num.empty()) out.pop_back();
        } else {
            out.push_back(std::move(t));
        }
    }
    terms = std::move(out);
    if (static_cast<int>(terms.size()) > kMaxPieceTerms)
        throw std::domain_error("piece term count cap exceeded");
}

// Rebase a piece's local polynomials from base alpha_old to alpha_new.
PieceTerm rebase_term(const PieceTerm& t, double shift) {
    return PieceTerm{t.freq, poly_shift(t.num, shift)};
}

}  // namespace

double normalize_angle(double theta) {
    double t = std::fmod(theta, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    if (t >= kTwoPi) t = 0.0;  // guard against fmod rounding
    // snap values a hair under 2*pi that represent 0
    if (kTwoPi - t < 1e-15) t = 0.0;
    return t;
}

double conj_angle(double theta) { return normalize_angle(-theta); }

double angle_dist(double a, double b) {
    double d = std::abs(normalize_angle(a) - normalize_angle(b));
    return std::min(d, kTwoPi - d);
}

Complex CircPoint::value() const { return std::polar(1.0, theta); }

bool CircPoint::same_as(const CircPoint& o) const {
    return angle_dist(theta, o.theta) <= 1e-12;
}

Complex poly_eval(const Poly& p, double x) {
    Complex acc(0.0, 0.0);
    for (size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
    return acc;
}

Poly poly_add(const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()), Complex(0.0, 0.0));
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return r;
}

Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, Complex(0.0, 0.0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

Poly poly_shift(const Poly& p, double s) {
    if (s == 0.0) return p;
    const size_t n = p.size();
    Poly r(n, Complex(0.0, 0.0));
    // binomial expansion of p(x + s)
    for (size_t i = 0; i < n; ++i) {
        double binom = 1.0;
        double pw = 1.0;
        for (size_t j = 0; j <= i; ++j) {
            r[i - j] += p[i] * binom * pw;
            binom *= static_cast<double>(i - j) / (j + 1);
            pw *= s;
        }
    }
    return r;
}

Poly poly_reflect(const Poly& p, double l) {
    Poly shifted = poly_shift(p, l);  // p(l + x)
    for (size_t i = 1; i < shifted.size(); i += 2) shifted[i] = -shifted[i];
    return shifted;  // p(l - x)
}

void poly_trim(Poly& p) {
    while (!p.empty() && p.back() == Complex(0.0, 0.0)) p.pop_back();
}

bool Piece::unit_den() const { return is_unit_poly(den); }

Complex Piece::value_at(double theta) const {
    const double x = theta - alpha;
    Complex num(0.0, 0.0);
    for (const auto& t : terms)
        num += poly_eval(t.num, x) * std::polar(1.0, t.freq * theta);
    if (unit_den()) return num;
    return num / poly_eval(den, x);
}

void PCMultiplier::canonicalize() {
    // trig: merge equal frequencies, drop zeros
    std::sort(trig_.begin(), trig_.end(),
              [](const TrigTerm& a, const TrigTerm& b) { return a.k < b.k; });
    std::vector<TrigTerm> tout;
    for (const auto& t : trig_) {
        if (std::abs(t.k) > kMaxTrigFreq)
            throw std::domain_error("trig frequency cap exceeded");
        if (t.c == Complex(0.0, 0.0)) continue;
        if (!tout.empty() && tout.back().k == t.k) {
            tout.back().c += t.c;
            if (tout.back().c == Complex(0.0, 0.0)) tout.pop_back();
        } else {
            tout.push_back(t);
        }
    }
    trig_ = std::move(tout);

    if (pieces_.empty()) return;
    std::sort(pieces_.begin(), pieces_.end(),
              [](const Piece& a, const Piece& b) { return a.alpha < b.alpha; });
    if (std::abs(pieces_.front().alpha) > kAngleTol ||
        std::abs(pieces_.back().beta - kTwoPi) > kAngleTol)
        throw std::invalid_argument("piece cover must span [0, 2*pi)");
    pieces_.front().alpha = 0.0;
    pieces_.back().beta = kTwoPi;
    for (size_t i = 0; i + 1 < pieces_.size(); ++i) {
        if (std::abs(pieces_[i].beta - pieces_[i + 1].alpha) > kAngleTol)
            throw std::invalid_argument("piece cover has a gap or overlap");
        pieces_[i].beta = pieces_[i + 1].alpha;
    }
    bool all_zero = true;
    for (auto& p : pieces_) {
        if (p.length() <= 0.0)
            throw std::invalid_argument("empty piece arc");
        consolidate_terms(p.terms);
        poly_trim(p.den);
        check_degree(p.den, kMaxDenDegree, "denominator");
        if (is_zero_poly(p.den))
            throw std::invalid_argument("zero denominator polynomial");
        for (const auto& t : p.terms) check_degree(t.num, kMaxPolyDegree, "piece");
        if (!p.terms.empty() || !p.unit_den()) all_zero = false;
    }
    // a cover of all-zero unit-den pieces is the zero piecewise part
    if (all_zero) pieces_.clear();
}

PCMultiplier PCMultiplier::constant(Complex c) {
    PCMultiplier m;
    if (c != Complex(0.0, 0.0)) m.trig_.push_back({0, c});
    return m;
}

PCMultiplier PCMultiplier::trig_monomial(int k, Complex c) {
    PCMultiplier m;
    if (c != Complex(0.0, 0.0)) m.trig_.push_back({k, c});
    return m;
}

PCMultiplier PCMultiplier::from_trig(std::vector<TrigTerm> terms) {
    PCMultiplier m;
    m.trig_ = std::move(terms);
    m.canonicalize();
    return m;
}

namespace {

// Append the arc [alpha, alpha + len) with the given content to `out`,
// splitting and rebasing at the 2*pi wrap point.
void emit_arc(std::vector<Piece>& out, double alpha, double len,
              std::vector<PieceTerm> terms, Poly den) {
    alpha = normalize_angle(alpha);
    const double end = alpha + len;
    if (end <= kTwoPi + kAngleTol) {
        out.push_back({alpha, std::min(end, kTwoPi), std::move(terms), std::move(den)});
        return;
    }
    Piece head{alpha, kTwoPi, terms, den};
    out.push_back(std::move(head));
    const double shift = kTwoPi - alpha;  // local var of the wrapped tail
    Piece tail;
    tail.alpha = 0.0;
    tail.beta = end - kTwoPi;
    for (const auto& t : terms) tail.terms.push_back(rebase_term(t, shift));
    tail.den = poly_shift(den, shift);
    out.push_back(std::move(tail));
}

}  // namespace

PCMultiplier PCMultiplier::indicator(double from, double to) {
    const double alpha = normalize_angle(from);
    double len = normalize_angle(to - from);
    if (len == 0.0) {
        // full-circle arc: the constant 1
        return constant(Complex(1.0, 0.0));
    }
    std::vector<Piece> pieces;
    emit_arc(pieces, alpha, len, {PieceTerm{0, unit_poly()}}, unit_poly());
    emit_arc(pieces, alpha + len, kTwoPi - len, {}, unit_poly());
    return from_pieces(std::move(pieces));
}

PCMultiplier PCMultiplier::piecewise_constant(std::vector<double> breaks,
                                              std::vector<Complex> values) {
    if (breaks.size() != values.size() || breaks.empty())
        throw std::invalid_argument("piecewise_constant: size mismatch");
    for (auto& b : breaks) b = normalize_angle(b);
    std::vector<size_t> order(breaks.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t i, size_t j) { return breaks[i] < breaks[j]; });
    std::vector<Piece> pieces;
    for (size_t idx = 0; idx < order.size(); ++idx) {
        const double a = breaks[order[idx]];
        const double b = idx + 1 < order.size() ? breaks[order[idx + 1]]
                                                : breaks[order[0]] + kTwoPi;
        std::vector<PieceTerm> terms;
        const Complex v = values[order[idx]];
        if (v != Complex(0.0, 0.0)) terms.push_back({0, Poly{v}});
        emit_arc(pieces, a, b - a, std::move(terms), unit_poly());
    }
    return from_pieces(std::move(pieces));
}

PCMultiplier PCMultiplier::piecewise_linear(std::vector<double> breaks,
                                            std::vector<Complex> values) {
    if (breaks.size() != values.size() || breaks.size() < 2)
        throw std::invalid_argument("piecewise_linear: need >= 2 nodes");
    for (auto& b : breaks) b = normalize_angle(b);
    std::vector<size_t> order(breaks.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t i, size_t j) { return breaks[i] < breaks[j]; });
    std::vector<Piece> pieces;
    for (size_t idx = 0; idx < order.size(); ++idx) {
        const double a = breaks[order[idx]];
        const double b = idx + 1 < order.size() ? breaks[order[idx + 1]]
                                                : breaks[order[0]] + kTwoPi;
        const Complex va = values[order[idx]];
        const Complex vb = values[order[(idx + 1) % order.size()]];
        const double len = b - a;
        if (len <= kAngleTol)
            throw std::invalid_argument("piecewise_linear: coincident nodes");
        Poly num{va, (vb - va) / len};
        poly_trim(num);
        std::vector<PieceTerm> terms;
        if (!num.empty()) terms.push_back({0, std::move(num)});
        emit_arc(pieces, a, len, std::move(terms), unit_poly());
    }
    return from_pieces(std::move(pieces));
}

PCMultiplier PCMultiplier::sawtooth() {
    Piece p;
    p.alpha = 0.0;
    p.beta = kTwoPi;
    p.terms.push_back({0, Poly{Complex(1.0, 0.0), Complex(-1.0 / kPi, 0.0)}});
    return from_pieces({p});
}

PCMultiplier PCMultiplier::from_pieces(std::vector<Piece> pieces,
                                       std::vector<TrigTerm> trig) {
    PCMultiplier m;
    m.trig_ = std::move(trig);
    m.pieces_ = std::move(pieces);
    m.canonicalize();
    return m;
}

size_t PCMultiplier::piece_index_at(double theta) const {
    // owning piece: alpha <= theta < beta, with breakpoint snapping
    size_t lo = 0, hi = pieces_.size();
    while (lo + 1 < hi) {
        size_t mid = (lo + hi) / 2;
        if (pieces_[mid].alpha <= theta) lo = mid; else hi = mid;
    }
    // snap to the next piece if theta sits on its start
    if (lo + 1 < pieces_.size() &&
        std::abs(theta - pieces_[lo + 1].alpha) <= kAngleTol)
        return lo + 1;
    return lo;
}

Complex PCMultiplier::eval_plus(double theta) const {
    theta = normalize_angle(theta);
    Complex v(0.0, 0.0);
    for (const auto& t : trig_) v += t.c * std::polar(1.0, t.k * theta);
    if (!pieces_.empty()) {
        const Piece& p = pieces_[piece_index_at(theta)];
        v += p.value_at(theta);
    }
    return v;
}

Complex PCMultiplier::eval_minus(double theta) const {
    theta = normalize_angle(theta);
    Complex v(0.0, 0.0);
    for (const auto& t : trig_) v += t.c * std::polar(1.0, t.k * theta);
    if (!pieces_.empty()) {
        const size_t idx = piece_index_at(theta);
        if (std::abs(theta - pieces_[idx].alpha) <= kAngleTol) {
            // limit from below is read from the preceding piece at its end
            const size_t prev = (idx == 0) ? pieces_.size() - 1 : idx - 1;
            const double at = (idx == 0) ? kTwoPi : pieces_[idx].alpha;
            return v + pieces_[prev].value_at(at);
        }
        v += pieces_[idx].value_at(theta);
    }
    return v;
}

std::vector<double> PCMultiplier::jump_set() const {
    std::vector<double> jumps;
    for (const auto& p : pieces_) {
        const double theta = p.alpha;
        if (std::abs(eval_plus(theta) - eval_minus(theta)) > kContinuityTol)
            jumps.push_back(theta);
    }
    std::sort(jumps.begin(), jumps.end());
    return jumps;
}

bool PCMultiplier::is_continuous_at(double theta) const {
    return std::abs(eval_plus(theta) - eval_minus(theta)) <= kContinuityTol;
}

PCMultiplier PCMultiplier::reflect_tilde() const {
    PCMultiplier m;
    for (const auto& t : trig_) m.trig_.push_back({-t.k, t.c});
    for (const auto& p : pieces_) {
        Piece r;
        r.alpha = (std::abs(p.beta - kTwoPi) <= kAngleTol) ? 0.0 : kTwoPi - p.beta;
        r.beta = (p.alpha == 0.0) ? kTwoPi : kTwoPi - p.alpha;
        const double l = p.length();
        for (const auto& t : p.terms)
            r.terms.push_back({-t.freq, poly_reflect(t.num, l)});
        r.den = poly_reflect(p.den, l);
        m.pieces_.push_back(std::move(r));
    }
    m.canonicalize();
    return m;
}

PCMultiplier PCMultiplier::reflect_hat() const {
    PCMultiplier m;
    for (const auto& t : trig_) {
        const double sign = (t.k % 2 == 0) ? 1.0 : -1.0;
        m.trig_.push_back({t.k, t.c * sign});
    }
    std::vector<Piece> pieces;
    for (const auto& p : pieces_) {
        std::vector<PieceTerm> terms;
        for (const auto& t : p.terms) {
            const double sign = (t.freq % 2 == 0) ? 1.0 : -1.0;
            Poly num = t.num;
            for (auto& c : num) c *= sign;
            terms.push_back({t.freq, std::move(num)});
        }
        emit_arc(pieces, p.alpha - kPi, p.length(), std::move(terms), p.den);
    }
    return from_pieces(std::move(pieces), std::move(m.trig_));
}

PCMultiplier PCMultiplier::reciprocal() const {
    if (pieces_.empty()) {
        if (trig_.size() != 1)
            throw std::domain_error("reciprocal: only single trig monomials invert");
        return trig_monomial(-trig_[0].k, 1.0 / trig_[0].c);
    }
    if (!trig_.empty())
        throw std::domain_error("reciprocal: mixed trig+piece representation");
    std::vector<Piece> pieces;
    for (const auto& p : pieces_) {
        if (p.terms.size() != 1)
            throw std::domain_error("reciprocal: piece is not single-term");
        const PieceTerm& t = p.terms[0];
        if (min_abs_on_segment(t.num, p.length()) < 1e-9)
            throw std::domain_error("reciprocal: numerator vanishes on arc");
        Piece r;
        r.alpha = p.alpha;
        r.beta = p.beta;
        r.terms.push_back({-t.freq, p.den});
        r.den = t.num;
        pieces.push_back(std::move(r));
    }
    return from_pieces(std::move(pieces));
}

namespace {

// Cut angles of a full cover (the alphas).
std::vector<double> cover_cuts(const PCMultiplier& a) {
    std::vector<double> cuts;
    for (const auto& p : a.pieces()) cuts.push_back(p.alpha);
    return cuts;
}

std::vector<double> merge_cuts(std::vector<double> a, const std::vector<double>& b) {
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    std::vector<double> out;
    for (double c : a) {
        if (out.empty() || c - out.back() > kAngleTol) out.push_back(c);
    }
    // merge the wrap pair (x ~ 0, y ~ 2*pi)
    if (out.size() > 1 && kTwoPi - out.back() <= kAngleTol) out.pop_back();
    if (out.empty() || out.front() > kAngleTol) out.insert(out.begin(), 0.0);
    else out.front() = 0.0;
    return out;
}

// The piece of `a` owning the open sub-arc (lo, hi), rebased to start at lo.
Piece restrict_piece(const PCMultiplier& a, double lo, double hi) {
    Piece out;
    out.alpha = lo;
    out.beta = hi;
    if (!a.has_pieces()) {
        out.den = unit_poly();
        return out;
    }
    const double probe = 0.5 * (lo + hi);
    for (const auto& p : a.pieces()) {
        if (p.alpha <= probe + kAngleTol && probe < p.beta + kAngleTol) {
            const double shift = lo - p.alpha;
            for (const auto& t : p.terms) out.terms.push_back(rebase_term(t, shift));
            out.den = poly_shift(p.den, shift);
            return out;
        }
    }
    throw std::logic_error("restrict_piece: no owning piece");
}

}  // namespace

PCMultiplier add(const PCMultiplier& a, const PCMultiplier& b) {
    PCMultiplier m;
    m.trig_ = a.trig_;
    m.trig_.insert(m.trig_.end(), b.trig_.begin(), b.trig_.end());
    if (a.pieces_.empty() && b.pieces_.empty()) {
        m.canonicalize();
        return m;
    }
    const std::vector<double> cuts = merge_cuts(cover_cuts(a), cover_cuts(b));
    for (size_t i = 0; i < cuts.size(); ++i) {
        const double lo = cuts[i];
        const double hi = (i + 1 < cuts.size()) ? cuts[i + 1] : kTwoPi;
        Piece pa = restrict_piece(a, lo, hi);
        Piece pb = restrict_piece(b, lo, hi);
        Piece out;
        out.alpha = lo;
        out.beta = hi;
        if (is_unit_poly(pa.den) && is_unit_poly(pb.den)) {
            out.terms = std::move(pa.terms);
            append_terms(out.terms, pb.terms);
            out.den = unit_poly();
        } else {
            for (auto& t : pa.terms)
                out.terms.push_back({t.freq, poly_mul(t.num, pb.den)});
            for (auto& t : pb.terms)
                out.terms.push_back({t.freq, poly_mul(t.num, pa.den)});
            out.den = poly_mul(pa.den, pb.den);
            check_degree(out.den, kMaxDenDegree, "add denominator");
        }
        m.pieces_.push_back(std::move(out));
    }
    m.canonicalize();
    return m;
}

PCMultiplier sub(const PCMultiplier& a, const PCMultiplier& b) {
    return add(a, negate(b));
}

PCMultiplier negate(const PCMultiplier& a) { return scale(a, Complex(-1.0, 0.0)); }

PCMultiplier scale(const PCMultiplier& a, Complex s) {
    if (s == Complex(0.0, 0.0)) return PCMultiplier();
    PCMultiplier m = a;
    for (auto& t : m.trig_) t.c *= s;
    for (auto& p : m.pieces_)
        for (auto& t : p.terms)
            for (auto& c : t.num) c *= s;
    return m;
}

PCMultiplier mul(const PCMultiplier& a, const PCMultiplier& b) {
    PCMultiplier m;
    // trig x trig stays in the trig slot
    for (const auto& ta : a.trig_)
        for (const auto& tb : b.trig_)
            m.trig_.push_back({ta.k + tb.k, ta.c * tb.c});
    if (a.pieces_.empty() && b.pieces_.empty()) {
        m.canonicalize();
        return m;
    }
    const std::vector<double> cuts = merge_cuts(cover_cuts(a), cover_cuts(b));
    for (size_t i = 0; i < cuts.size(); ++i) {
        const double lo = cuts[i];
        const double hi = (i + 1 < cuts.size()) ? cuts[i + 1] : kTwoPi;
        Piece pa = restrict_piece(a, lo, hi);
        Piece pb = restrict_piece(b, lo, hi);
        Piece out;
        out.alpha = lo;
        out.beta = hi;
        // piece_a * piece_b
        for (const auto& ta : pa.terms)
            for (const auto& tb : pb.terms)
                out.terms.push_back({ta.freq + tb.freq, poly_mul(ta.num, tb.num)});
        // trig_a * piece_b and piece_a * trig_b (fold the trig factor in;
        // the respective opposite denominator multiplies the numerator)
        for (const auto& ta : a.trig_)
            for (const auto& tb : pb.terms) {
                Poly num = tb.num;
                for (auto& c : num) c *= ta.c;
                if (!is_unit_poly(pa.den)) num = poly_mul(num, pa.den);
                out.terms.push_back({ta.k + tb.freq, std::move(num)});
            }
        for (const auto& tb : b.trig_)
            for (const auto& ta : pa.terms) {
                Poly num = ta.num;
                for (auto& c : num) c *= tb.c;
                if (!is_unit_poly(pb.den)) num = poly_mul(num, pb.den);
                out.terms.push_back({tb.k + ta.freq, std::move(num)});
            }
        out.den = is_unit_poly(pa.den) && is_unit_poly(pb.den)
                      ? unit_poly()
                      : poly_mul(pa.den, pb.den);
        check_degree(out.den, kMaxDenDegree, "mul denominator");
        for (const auto& t : out.terms) check_degree(t.num, kMaxPolyDegree, "mul");
        m.pieces_.push_back(std::move(out));
    }
    m.canonicalize();
    return m;
}

Complex PCMultiplier::fourier_coeff(int k) const {
    Complex out(0.0, 0.0);
    for (const auto& t : trig_)
        if (t.k == k) out += t.c;
    for (const auto& p : pieces_) {
        if (!p.unit_den())
            throw std::domain_error("fourier_coeff: denominator-bearing piece");
        const double l = p.length();
        for (const auto& t : p.terms) {
            const int m = t.freq - k;
            // integral of num(x) e^{i m (x + alpha)} over [0, l]
            Complex integral(0.0, 0.0);
            if (m == 0) {
                for (size_t n = 0; n < t.num.size(); ++n)
                    integral += t.num[n] * std::pow(l, static_cast<double>(n) + 1.0) /
                                (static_cast<double>(n) + 1.0);
            } else {
                const Complex im(0.0, static_cast<double>(m));
                const Complex eiml = std::polar(1.0, m * l);
                // I_n = l^n e^{iml}/(im) - (n/(im)) I_{n-1};  I_0 = (e^{iml}-1)/(im)
                Complex In = (eiml - 1.0) / im;
                integral += t.num[0] * In;
                double ln = 1.0;
                for (size_t n = 1; n < t.num.size(); ++n) {
                    ln *= l;
                    In = ln * eiml / im - (static_cast<double>(n) / im) * In;
                    integral += t.num[n] * In;
                }
            }
            out += std::polar(1.0, m * p.alpha) * integral / kTwoPi;
        }
    }
    return out;
}

double PCMultiplier::variation_bound() const {
    double total = 0.0;
    for (const auto& t : trig_) total += (std::abs(t.k) * kTwoPi + 1.0) * std::abs(t.c);
    for (const auto& p : pieces_) {
        const double l = p.length();
        // |jump| at the left endpoint
        total += std::abs(eval_plus(p.alpha) - eval_minus(p.alpha));
        for (const auto& t : p.terms) {
            double mx = 0.0, mdx = 0.0, pw = 1.0;
            for (size_t n = 0; n < t.num.size(); ++n) {
                mx += std::abs(t.num[n]) * pw;
                if (n > 0) mdx += static_cast<double>(n) * std::abs(t.num[n]) * pw / l;
                pw *= l;
            }
            double dmin = p.unit_den() ? 1.0 : min_abs_on_segment(p.den, l);
            if (dmin < 1e-12) dmin = 1e-12;
            total += (std::abs(t.freq) * mx + mdx) * l / dmin + mx / dmin;
        }
    }
    return total;
}

PCMultiplier splice(const std::vector<double>& cuts,
                    const std::vector<const PCMultiplier*>& sources,
                    const std::vector<const PCMultiplier*>& divisors) {
    if (cuts.size() != sources.size() || cuts.empty())
        throw std::invalid_argument("splice: size mismatch");
    if (!divisors.empty() && divisors.size() != cuts.size())
        throw std::invalid_argument("splice: divisor list size mismatch");

    std::vector<Piece> out;
    for (size_t i = 0; i < cuts.size(); ++i) {
        const double lo = normalize_angle(cuts[i]);
        double hi = (i + 1 < cuts.size()) ? normalize_angle(cuts[i + 1]) : normalize_angle(cuts[0]);
        if (hi <= lo + kAngleTol) hi += kTwoPi;
        const PCMultiplier& src = *sources[i];
        const PCMultiplier* divp = divisors.empty() ? nullptr : divisors[i];

        // refine by the source's (and divisor's) own breakpoints inside [lo, hi)
        std::vector<double> inner{lo};
        auto collect = [&](const PCMultiplier& mm) {
            for (const auto& p : mm.pieces()) {
                for (double cand : {p.alpha, p.alpha + kTwoPi}) {
                    if (cand > lo + kAngleTol && cand < hi - kAngleTol)
                        inner.push_back(cand);
                }
            }
        };
        collect(src);
        if (divp) collect(*divp);
        std::sort(inner.begin(), inner.end());
        inner.erase(std::unique(inner.begin(), inner.end(),
                                [](double x, double y) { return y - x <= kAngleTol; }),
                    inner.end());
        inner.push_back(hi);

        for (size_t j = 0; j + 1 < inner.size(); ++j) {
            const double a0 = normalize_angle(inner[j]);
            const double len = inner[j + 1] - inner[j];
            Piece base = restrict_piece(src, a0, a0 + len > kTwoPi ? kTwoPi : a0 + len);
            base.beta = base.alpha + len;  // emit_arc re-splits the wrap
            // fold the trig part of the source into the piece terms
            for (const auto& t : src.trig()) {
                Poly num{t.c};
                if (!is_unit_poly(base.den)) num = poly_mul(num, base.den);
                base.terms.push_back({t.k, std::move(num)});
            }
            if (divp) {
                Piece dp = restrict_piece(*divp, a0, a0 + std::min(len, kTwoPi - a0));
                if (!divp->trig().empty() || dp.terms.size() != 1)
                    throw std::domain_error("splice: divisor not single-term here");
                const PieceTerm& dt = dp.terms[0];
                if (min_abs_on_segment(dt.num, len) < 1e-9)
                    throw std::domain_error("splice: divisor vanishes on arc");
                for (auto& t : base.terms) {
                    t.freq -= dt.freq;
                    if (!is_unit_poly(dp.den)) t.num = poly_mul(t.num, dp.den);
                }
                base.den = is_unit_poly(base.den) ? dt.num : poly_mul(base.den, dt.num);
            }
            emit_arc(out, base.alpha, len, std::move(base.terms), std::move(base.den));
        }
    }
    return PCMultiplier::from_pieces(std::move(out));
}

}  // namespace thop
