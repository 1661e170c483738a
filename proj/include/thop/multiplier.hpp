#pragma once

#include "thop/arcs.hpp"

#include <vector>

namespace thop {

inline constexpr double kTwoPi = 6.28318530717958647692528676655900577;
inline constexpr double kPi = 3.14159265358979323846264338327950288;

// Breakpoints closer than this are merged when refining piece covers.
inline constexpr double kAngleTol = 1e-9;
// One-sided limits closer than this count as equal (continuity detection).
inline constexpr double kContinuityTol = 1e-12;

// Caps on the representation growth under products; exceeding them signals
// pathological inputs rather than a resource limit.
inline constexpr int kMaxPolyDegree = 16;
inline constexpr int kMaxDenDegree = 16;
inline constexpr int kMaxPieceTerms = 64;
inline constexpr int kMaxTrigFreq = 4096;

double normalize_angle(double theta);        // into [0, 2*pi)
double conj_angle(double theta);             // angle of conj(e^{i theta})
double angle_dist(double a, double b);       // circular distance

// Point t = e^{i theta} on the unit circle.
struct CircPoint {
    double theta = 0.0;

    CircPoint() = default;
    explicit CircPoint(double th) : theta(normalize_angle(th)) {}

    Complex value() const;
    CircPoint conj() const { return CircPoint(conj_angle(theta)); }
    bool same_as(const CircPoint& o) const;
};

struct TrigTerm {
    int k = 0;
    Complex c{0.0, 0.0};
};

// Dense polynomial c0 + c1 x + c2 x^2 + ...
using Poly = std::vector<Complex>;

Complex poly_eval(const Poly& p, double x);
Poly poly_add(const Poly& a, const Poly& b);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_shift(const Poly& p, double s);     // x -> x + s
Poly poly_reflect(const Poly& p, double l);   // x -> l - x
void poly_trim(Poly& p);

// One additive term on a piece: num(theta - alpha) * e^{i freq theta}.
struct PieceTerm {
    int freq = 0;
    Poly num;
};

// Half-open arc [alpha, beta) carrying sum(terms) / den(theta - alpha).
// den defaults to 1; a nontrivial den arises only from exact reciprocals
// (e.g. dividing by a piecewise linear interpolant).
struct Piece {
    double alpha = 0.0;
    double beta = kTwoPi;
    std::vector<PieceTerm> terms;
    Poly den{Complex(1.0, 0.0)};

    bool unit_den() const;
    Complex value_at(double theta) const;     // exact; theta in [alpha, beta]
    double length() const { return beta - alpha; }
};

// Piecewise continuous multiplier: a trigonometric polynomial plus a
// piecewise part whose arcs cover the circle with disjoint interiors.
// Values are immutable after construction; all operations return new objects.
class PCMultiplier {
public:
    PCMultiplier() = default;  // the zero multiplier

    static PCMultiplier constant(Complex c);
    static PCMultiplier trig_monomial(int k, Complex c = Complex(1.0, 0.0));
    static PCMultiplier from_trig(std::vector<TrigTerm> terms);
    // Indicator of the arc [from, to) traversed counter-clockwise (wrapping
    // allowed). A full-circle arc degenerates to the constant 1.
    static PCMultiplier indicator(double from, double to);
    // values[i] on [breaks[i], breaks[i+1]) with the last arc wrapping.
    static PCMultiplier piecewise_constant(std::vector<double> breaks,
                                           std::vector<Complex> values);
    // Continuous interpolant: value values[i] at breaks[i], linear in the
    // angle in between (wrapping back to values[0]).
    static PCMultiplier piecewise_linear(std::vector<double> breaks,
                                         std::vector<Complex> values);
    // e^{is} -> 1 - s/pi on [0, 2*pi): jumps from -1 to 1 at t = 1.
    static PCMultiplier sawtooth();
    static PCMultiplier from_pieces(std::vector<Piece> pieces,
                                    std::vector<TrigTerm> trig = {});

    const std::vector<TrigTerm>& trig() const { return trig_; }
    const std::vector<Piece>& pieces() const { return pieces_; }
    bool has_pieces() const { return !pieces_.empty(); }
    bool is_zero() const { return trig_.empty() && pieces_.empty(); }

    // One-sided limits along the counter-clockwise orientation: eval_minus
    // approaches from below, eval_plus from above.  Exact up to rounding.
    Complex eval_plus(double theta) const;
    Complex eval_minus(double theta) const;
    Complex eval_plus(CircPoint t) const { return eval_plus(t.theta); }
    Complex eval_minus(CircPoint t) const { return eval_minus(t.theta); }

    // Angles where the one-sided limits differ, sorted ascending.
    std::vector<double> jump_set() const;
    bool is_continuous_at(double theta) const;
    bool is_continuous() const { return jump_set().empty(); }

    PCMultiplier reflect_tilde() const;  // a~(t) = a(1/t)
    PCMultiplier reflect_hat() const;    // a^(t) = a(-t)

    // Exact reciprocal where the representation permits one: a single trig
    // monomial, or single-term pieces (num and den swap).  Throws otherwise.
    PCMultiplier reciprocal() const;

    // Exact Fourier coefficient a_k; requires denominator-free pieces.
    Complex fourier_coeff(int k) const;

    // Upper bound for |a|_inf + Var(a), used for truncation tail estimates.
    double variation_bound() const;

    friend PCMultiplier add(const PCMultiplier& a, const PCMultiplier& b);
    friend PCMultiplier mul(const PCMultiplier& a, const PCMultiplier& b);
    friend PCMultiplier scale(const PCMultiplier& a, Complex s);

private:
    std::vector<TrigTerm> trig_;
    std::vector<Piece> pieces_;  // sorted full cover of [0, 2*pi), or empty

    void canonicalize();
    size_t piece_index_at(double theta) const;  // owning piece of theta^+
};

PCMultiplier add(const PCMultiplier& a, const PCMultiplier& b);
PCMultiplier sub(const PCMultiplier& a, const PCMultiplier& b);
PCMultiplier mul(const PCMultiplier& a, const PCMultiplier& b);
PCMultiplier scale(const PCMultiplier& a, Complex s);
PCMultiplier negate(const PCMultiplier& a);

// Splice sources[i] over the arc [cuts[i], cuts[i+1]) (last arc wraps back
// to cuts[0]).  Trig parts are folded into the pieces so restriction is
// exact.  divisors[i], when non-null, divides the spliced value on that arc;
// its pieces there must be single-term (the division is performed exactly by
// moving the divisor numerator into the denominator).
PCMultiplier splice(const std::vector<double>& cuts,
                    const std::vector<const PCMultiplier*>& sources,
                    const std::vector<const PCMultiplier*>& divisors = {});

}  // namespace thop
