#pragma once

#include "thop/algebra.hpp"

#include <string>

namespace thop {

// Finitely supported Fourier data a_k, k_min <= k <= k_max.
struct BandedSpec {
    int k_min = 0;
    int k_max = 0;
    std::vector<Complex> c;  // c[i] = a_{k_min + i}

    Complex coeff(int k) const;
    BandedSpec reflected() const;  // coefficients of a~ (k -> -k)
    BandedSpec product(const BandedSpec& other) const;  // coefficients of a*b

    static BandedSpec from_multiplier(const PCMultiplier& a, int k_min, int k_max);
    // Exact band of a trig-only multiplier.
    static BandedSpec from_trig(const PCMultiplier& a);
};

Complex toeplitz_entry(const BandedSpec& a, int j, int k);  // a_{j-k}
Complex hankel_entry(const BandedSpec& a, int j, int k);    // a_{j+k+1}

CMatrix toeplitz_section(const BandedSpec& a, int n);
CMatrix hankel_section(const BandedSpec& a, int n);

struct TruncationMatrix {
    CMatrix m;
    std::string provenance;
    double coeff_tail_bound = 0.0;  // 0 for banded inputs
};

// Finite section of an operator expression: every generator realized at size
// n + margin, products carried out at the enlarged size, result trimmed to
// n x n.  Scalar expressions only (k = 1).
TruncationMatrix truncate(const OperatorExpr& e, int n, int margin);

// Index of T(a) for a Laurent polynomial symbol by classical root counting:
// -wind(a) = -(#roots of z^m a(z) in the open unit disk - m).  Throws if a
// root modulus is within 1e-6 of 1 or the root residual check fails.
int laurent_index_oracle(const BandedSpec& a);

// Roots of c0 + c1 z + ... via the companion matrix.
std::vector<Complex> polynomial_roots(const std::vector<Complex>& coeffs);

// Number of pivots below tol * (largest pivot) under complete pivoting.
int rank_deficiency(const CMatrix& m, double tol = 1e-8);

// Max residual of T(ab) = T(a)T(b) + H(a)H(b~) over the interior window.
double identity_e7_check(const BandedSpec& a, const BandedSpec& b, int n);
// Max residual of H(ab) = T(a)H(b) + H(a)T(b~) over the interior window.
double identity_e7_second_check(const BandedSpec& a, const BandedSpec& b, int n);

}  // namespace thop
