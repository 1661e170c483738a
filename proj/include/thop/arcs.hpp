#pragma once

#include <complex>
#include <vector>

namespace thop {

using Complex = std::complex<double>;

// Conjugate exponent q of p, 1/p + 1/q = 1.  Requires p in (1, inf).
double conjugate_exponent(double p);

// Exponent p together with its conjugate q.  Construction rejects p outside
// the open interval (1, inf).
class Exponent {
public:
    explicit Exponent(double p);
    double p() const { return p_; }
    double q() const { return q_; }

private:
    double p_;
    double q_;
};

// A point of the two-point compactification of the real line: either a
// finite value or one of the symbolic endpoints -inf / +inf.
struct CompactifiedReal {
    enum class Kind { NegInf, Finite, PosInf };

    Kind kind = Kind::Finite;
    double value = 0.0;

    static CompactifiedReal neg_inf() { return {Kind::NegInf, 0.0}; }
    static CompactifiedReal pos_inf() { return {Kind::PosInf, 0.0}; }
    static CompactifiedReal finite(double v) { return {Kind::Finite, v}; }

    bool is_finite() const { return kind == Kind::Finite; }
    bool is_neg_inf() const { return kind == Kind::NegInf; }
    bool is_pos_inf() const { return kind == Kind::PosInf; }

    // Total order -inf < finite < +inf.
    bool operator<(const CompactifiedReal& o) const;
};

// The arc function mu_p on the compactified line:
//   mu_p(lambda) = (1 + coth(pi (lambda + i/p)))/2,  mu_p(-inf)=0, mu_p(+inf)=1.
// Endpoint values are returned exactly; |Re| > 45 short-circuits to the limit.
Complex mu(double p, CompactifiedReal lambda);

// The arc function nu_p:
//   nu_p(lambda) = (2i sinh(pi (lambda + i/p)))^{-1},  nu_p(+-inf) = 0.
Complex nu(double p, CompactifiedReal lambda);

// -inf, then n finite values tan(pi (u_j - 1/2)) with u_j = j/(n+1), then
// +inf; strictly increasing.  Requires n >= 2.
std::vector<CompactifiedReal> lambda_grid(int n);

}  // namespace thop
