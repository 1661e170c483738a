#include "thop/oracle.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace thop {

namespace {

constexpr double kCircleSep = 1e-6;

int band_width(const BandedSpec& a) {
    return std::max(std::abs(a.k_min), std::abs(a.k_max));
}

}  // namespace

Complex BandedSpec::coeff(int k) const {
    if (k < k_min || k > k_max) return {0.0, 0.0};
    return c[static_cast<size_t>(k - k_min)];
}

BandedSpec BandedSpec::reflected() const {
    BandedSpec r;
    r.k_min = -k_max;
    r.k_max = -k_min;
    r.c.assign(c.rbegin(), c.rend());
    return r;
}

BandedSpec BandedSpec::product(const BandedSpec& other) const {
    BandedSpec r;
    r.k_min = k_min + other.k_min;
    r.k_max = k_max + other.k_max;
    r.c.assign(static_cast<size_t>(r.k_max - r.k_min) + 1, Complex(0.0, 0.0));
    for (size_t i = 0; i < c.size(); ++i)
        for (size_t j = 0; j < other.c.size(); ++j) r.c[i + j] += c[i] * other.c[j];
    return r;
}

BandedSpec BandedSpec::from_multiplier(const PCMultiplier& a, int k_min, int k_max) {
    if (k_min > k_max) throw std::invalid_argument("BandedSpec: empty range");
    BandedSpec r;
    r.k_min = k_min;
    r.k_max = k_max;
    r.c.reserve(static_cast<size_t>(k_max - k_min) + 1);
    for (int k = k_min; k <= k_max; ++k) r.c.push_back(a.fourier_coeff(k));
    return r;
}

BandedSpec BandedSpec::from_trig(const PCMultiplier& a) {
    if (a.has_pieces())
        throw std::invalid_argument("BandedSpec::from_trig: multiplier has pieces");
    if (a.trig().empty()) return {0, 0, {Complex(0.0, 0.0)}};
    int lo = a.trig().front().k, hi = a.trig().back().k;
    BandedSpec r;
    r.k_min = lo;
    r.k_max = hi;
    r.c.assign(static_cast<size_t>(hi - lo) + 1, Complex(0.0, 0.0));
    for (const auto& t : a.trig()) r.c[static_cast<size_t>(t.k - lo)] = t.c;
    return r;
}

Complex toeplitz_entry(const BandedSpec& a, int j, int k) {
    if (j < 0 || k < 0) throw std::invalid_argument("toeplitz_entry: negative index");
    return a.coeff(j - k);
}

Complex hankel_entry(const BandedSpec& a, int j, int k) {
    if (j < 0 || k < 0) throw std::invalid_argument("hankel_entry: negative index");
    return a.coeff(j + k + 1);
}

CMatrix toeplitz_section(const BandedSpec& a, int n) {
    CMatrix m(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) m(j, k) = a.coeff(j - k);
    return m;
}

CMatrix hankel_section(const BandedSpec& a, int n) {
    CMatrix m(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) m(j, k) = a.coeff(j + k + 1);
    return m;
}

TruncationMatrix truncate(const OperatorExpr& e, int n, int margin) {
    if (n < 1) throw std::invalid_argument("truncate: n must be positive");
    if (margin < 0) throw std::invalid_argument("truncate: negative margin");
    if (e.k != 1) throw std::invalid_argument("truncate: scalar expressions only");
    const int big = n + margin;

    double tail = 0.0;
    CMatrix acc = CMatrix::Zero(big, big);
    for (const auto& term : e.terms) {
        CMatrix prod = CMatrix::Identity(big, big);
        bool dead = false;
        for (const auto& f : term.factors) {
            if (f.kind == FactorKind::Compact) { dead = true; break; }
            if (f.kind == FactorKind::Identity) continue;
            const PCMultiplier& am = f.gen.a.at(0, 0);
            const PCMultiplier& bm = f.gen.b.at(0, 0);
            BandedSpec as, bs;
            if (!am.has_pieces()) {
                as = BandedSpec::from_trig(am);
            } else {
                tail = std::max(tail, am.variation_bound() / (kPi * (2.0 * big)));
                as = BandedSpec::from_multiplier(am, -(2 * big - 1), 2 * big - 1);
            }
            if (!bm.has_pieces()) {
                bs = BandedSpec::from_trig(bm);
            } else {
                tail = std::max(tail, bm.variation_bound() / (kPi * (2.0 * big)));
                bs = BandedSpec::from_multiplier(bm, -(2 * big - 1), 2 * big - 1);
            }
            prod = prod * (toeplitz_section(as, big) + hankel_section(bs, big));
        }
        if (!dead) acc += term.weight * prod;
    }

    TruncationMatrix out;
    out.m = acc.topLeftCorner(n, n);
    out.provenance = "finite section n=" + std::to_string(n) +
                     " margin=" + std::to_string(margin);
    out.coeff_tail_bound = tail;
    return out;
}

std::vector<Complex> polynomial_roots(const std::vector<Complex>& coeffs) {
    std::vector<Complex> c = coeffs;
    while (!c.empty() && std::abs(c.back()) == 0.0) c.pop_back();
    if (c.size() <= 1) return {};
    const int d = static_cast<int>(c.size()) - 1;
    CMatrix companion = CMatrix::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        companion(i, d - 1) = -c[static_cast<size_t>(i)] / c.back();
        if (i + 1 < d) companion(i + 1, i) = 1.0;
    }
    Eigen::ComplexEigenSolver<CMatrix> es(companion, false);
    std::vector<Complex> roots(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) roots[static_cast<size_t>(i)] = es.eigenvalues()(i);
    return roots;
}

int laurent_index_oracle(const BandedSpec& a) {
    // trim exact-zero fringes of the band
    int lo = a.k_min, hi = a.k_max;
    double maxc = 0.0;
    for (const auto& v : a.c) maxc = std::max(maxc, std::abs(v));
    if (maxc == 0.0) throw std::invalid_argument("laurent oracle: zero symbol");
    const double zero_tol = 1e-14 * maxc;
    while (lo <= hi && std::abs(a.coeff(lo)) <= zero_tol) ++lo;
    while (hi >= lo && std::abs(a.coeff(hi)) <= zero_tol) --hi;

    if (lo == hi) return -lo;  // single monomial c t^lo: wind = lo

    std::vector<Complex> poly;
    for (int k = lo; k <= hi; ++k) poly.push_back(a.coeff(k));

    const std::vector<Complex> roots = polynomial_roots(poly);
    // residual check: |p(z)| <= 1e-10 max|c|, evaluated on the reversed
    // polynomial for |z| > 1 to dodge overflow
    std::vector<Complex> rev(poly.rbegin(), poly.rend());
    int inside = 0;
    for (const Complex& z : roots) {
        const double az = std::abs(z);
        if (std::abs(az - 1.0) < kCircleSep)
            throw std::runtime_error("laurent oracle: root too close to the unit circle");
        Complex resid;
        if (az <= 1.0) {
            Complex acc(0.0, 0.0);
            for (size_t i = poly.size(); i-- > 0;) acc = acc * z + poly[i];
            resid = acc;
        } else {
            const Complex w = 1.0 / z;
            Complex acc(0.0, 0.0);
            for (size_t i = rev.size(); i-- > 0;) acc = acc * w + rev[i];
            resid = acc;
        }
        if (std::abs(resid) > 1e-10 * maxc)
            throw std::runtime_error("laurent oracle: root residual check failed");
        if (az < 1.0) ++inside;
    }
    // wind(a) = lo + #inside(z^{-lo} a as polynomial)
    return -(lo + inside);
}

int rank_deficiency(const CMatrix& m, double tol) {
    if (m.rows() != m.cols()) throw std::invalid_argument("rank_deficiency: not square");
    Eigen::FullPivLU<CMatrix> lu(m);
    lu.setThreshold(tol);
    return static_cast<int>(m.rows() - lu.rank());
}

namespace {

double window_residual(const CMatrix& lhs, const CMatrix& rhs, int w) {
    const int n = static_cast<int>(lhs.rows());
    const int win = n - 2 * w;
    if (win < 1) throw std::invalid_argument("identity check: n too small for bandwidth");
    return (lhs.topLeftCorner(win, win) - rhs.topLeftCorner(win, win))
        .cwiseAbs()
        .maxCoeff();
}

}  // namespace

double identity_e7_check(const BandedSpec& a, const BandedSpec& b, int n) {
    const int w = band_width(a) + band_width(b) + 1;
    const BandedSpec ab = a.product(b);
    const CMatrix lhs = toeplitz_section(ab, n);
    const CMatrix rhs = toeplitz_section(a, n) * toeplitz_section(b, n) +
                        hankel_section(a, n) * hankel_section(b.reflected(), n);
    return window_residual(lhs, rhs, w);
}

double identity_e7_second_check(const BandedSpec& a, const BandedSpec& b, int n) {
    const int w = band_width(a) + band_width(b) + 1;
    const BandedSpec ab = a.product(b);
    const CMatrix lhs = hankel_section(ab, n);
    const CMatrix rhs = toeplitz_section(a, n) * hankel_section(b, n) +
                        hankel_section(a, n) * toeplitz_section(b.reflected(), n);
    return window_residual(lhs, rhs, w);
}

}  // namespace thop
