#pragma once

#include "thop/algebra.hpp"

namespace thop {

struct CurveSegment {
    enum class Kind { LambdaSweep, TSweep };

    Kind kind = Kind::TSweep;
    double theta_a = 0.0;        // TSweep range (theta_a == theta_b for sweeps in lambda)
    double theta_b = 0.0;
    std::vector<double> params;  // theta for TSweep, u in [0, 1] for LambdaSweep
    std::vector<Complex> values;

    Complex first() const { return values.front(); }
    Complex last() const { return values.back(); }
};

struct OrientedCurve {
    std::vector<CurveSegment> segments;
    double max_junction_mismatch = 0.0;
    double closure_error = 0.0;
    double min_modulus = 0.0;
    double max_modulus = 0.0;
    size_t total_samples() const;
    std::vector<Complex> concatenated() const;
};

struct WindingResult {
    int winding = 0;
    double defect = 0.0;  // |total/(2 pi) - winding|
};

// Accumulated argument increment over the closed sample polyline divided by
// 2 pi.  Throws if the curve passes too close to 0 or the total fails to be
// an integer within 1e-6.
WindingResult compute_winding(const OrientedCurve& c);
int winding(const OrientedCurve& c);

struct IndexReport {
    Fredholmness status = Fredholmness::Unresolved;
    bool fredholm = false;
    int winding = 0;
    long index = 0;  // -winding when fredholm
    double min_modulus = 0.0;
    double max_junction_mismatch = 0.0;
    double winding_defect = 0.0;
    size_t samples = 0;
    FredholmVerdict verdict;
};

// Normalized symbol curve W of an operator expression over T_+ in the
// Gohberg-Krupnik traversal order: lambda sweep at t = 1, then the upper
// half circle from 1 to -1 with a lambda sweep inserted at every jump,
// then the lambda sweep at t = -1.  Starts and ends at 1.
// Requires a positive Fredholm verdict.
OrientedCurve build_W(const OperatorExpr& e, double p, const ResolutionSpec& res = {});

// Fredholm test plus index by ind = -wind(W).
IndexReport index_TH(const OperatorExpr& e, double p, const ResolutionSpec& res = {});

// Index of the Toeplitz operator T(a) from the full-circle Gelfand curve
// a(t^-)(1 - mu_q) + a(t^+) mu_q with jump arcs inserted.
IndexReport index_toeplitz_circle(const PCMultiplier& a, double p,
                                  const ResolutionSpec& res = {});
// The curve itself (for export and cross checks).
OrientedCurve build_gelfand_curve(const PCMultiplier& a, double p,
                                  const ResolutionSpec& res = {});

// Index of L(a) diag P + L(b) diag Q from the full-circle curve of
// det smb / (det a22(t,+inf) det a22(t,-inf)).
IndexReport index_matrix_op(const MatrixGenerator& g, double p,
                            const ResolutionSpec& res = {});

// The 2x2 matrix generator carrying T(a)+H(b) twice: block entries
// (a, 0; b~, 1) on the P side and (1, b; 0, a~) on the Q side, which is the
// one-generator realization of the doubled operator restricted to its
// invariant subspace.
MatrixGenerator doubled_matrix_of(const Generator& g);

// Jump separation: factor T(a)+H(b) into a factor with jumps only at +-1
// and one with jumps only away from +-1.
struct Separation {
    PCMultiplier a0, b0;  // jumps at +-1 only
    PCMultiplier a1, b1;  // jumps away from +-1 only
    PCMultiplier phi0, phi1;
    PCMultiplier c;       // continuous interpolant used off U
    double delta = 0.0;   // half width of the U arcs
};

Separation separate_jumps(const PCMultiplier& a, const PCMultiplier& b, double p);

}  // namespace thop
