#include "thop/arcs.hpp"

#include <cmath>
#include <stdexcept>

namespace thop {

namespace {

constexpr double kPi = 3.14159265358979323846;
// Beyond this the hyperbolic functions saturate their limits at double
// precision; evaluating them directly would overflow for much larger args.
constexpr double kSaturation = 45.0;

void require_exponent(double p) {
    if (!std::isfinite(p) || p <= 1.0)
        throw std::invalid_argument("exponent p must lie in (1, inf)");
}

}  // namespace

double conjugate_exponent(double p) {
    require_exponent(p);
    return p / (p - 1.0);
}

Exponent::Exponent(double p) : p_(p), q_(conjugate_exponent(p)) {}

bool CompactifiedReal::operator<(const CompactifiedReal& o) const {
    if (kind == Kind::NegInf) return o.kind != Kind::NegInf;
    if (kind == Kind::PosInf) return false;
    if (o.kind == Kind::PosInf) return true;
    if (o.kind == Kind::NegInf) return false;
    return value < o.value;
}

Complex mu(double p, CompactifiedReal lambda) {
    require_exponent(p);
    if (lambda.is_neg_inf()) return {0.0, 0.0};
    if (lambda.is_pos_inf()) return {1.0, 0.0};
    const double x = kPi * lambda.value;
    if (x > kSaturation) return {1.0, 0.0};
    if (x < -kSaturation) return {0.0, 0.0};
    const Complex z(x, kPi / p);
    // sinh(z) != 0: |sinh z|^2 = sinh^2(Re) + sin^2(Im) and sin(pi/p) > 0.
    const Complex coth = std::cosh(z) / std::sinh(z);
    return (Complex(1.0, 0.0) + coth) / 2.0;
}

Complex nu(double p, CompactifiedReal lambda) {
    require_exponent(p);
    if (!lambda.is_finite()) return {0.0, 0.0};
    const double x = kPi * lambda.value;
    if (std::abs(x) > kSaturation) return {0.0, 0.0};
    const Complex z(x, kPi / p);
    return 1.0 / (Complex(0.0, 2.0) * std::sinh(z));
}

std::vector<CompactifiedReal> lambda_grid(int n) {
    if (n < 2) throw std::invalid_argument("lambda_grid requires n >= 2");
    std::vector<CompactifiedReal> grid;
    grid.reserve(static_cast<size_t>(n) + 2);
    grid.push_back(CompactifiedReal::neg_inf());
    for (int j = 1; j <= n; ++j) {
        const double u = static_cast<double>(j) / (n + 1);
        grid.push_back(CompactifiedReal::finite(std::tan(kPi * (u - 0.5))));
    }
    grid.push_back(CompactifiedReal::pos_inf());
    return grid;
}

}  // namespace thop
