#pragma once

#include "thop/multiplier.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace thop {

using CMatrix = Eigen::MatrixXcd;

// k x k matrix of multipliers (k = 1 for the scalar theory).
struct MultMatrix {
    int k = 1;
    std::vector<PCMultiplier> m;  // row-major, k*k entries

    static MultMatrix scalar(PCMultiplier a);
    static MultMatrix identity(int k);
    static MultMatrix zero(int k);
    static MultMatrix constant(const CMatrix& c);

    PCMultiplier& at(int i, int j) { return m[static_cast<size_t>(i) * k + j]; }
    const PCMultiplier& at(int i, int j) const { return m[static_cast<size_t>(i) * k + j]; }

    CMatrix limit_plus(double theta) const;
    CMatrix limit_minus(double theta) const;
    MultMatrix reflect_tilde() const;
    MultMatrix reflect_hat() const;
    std::vector<double> jump_angles() const;  // union over entries, sorted
};

// Generator T(a) + H(b) of the Toeplitz+Hankel algebra, acting on l^p_k.
struct Generator {
    MultMatrix a;
    MultMatrix b;

    Generator() = default;
    Generator(MultMatrix a_, MultMatrix b_);
    Generator(PCMultiplier a_, PCMultiplier b_);
    int k() const { return a.k; }
};

// Generator L(a) diag P + L(b) diag Q of the extended Toeplitz algebra,
// acting on l^p(Z)_k; its symbol lives over the full circle.
struct MatrixGenerator {
    MultMatrix a;
    MultMatrix b;
    int k() const { return a.k; }
};

enum class FactorKind { Gen, Identity, Compact };

struct Factor {
    FactorKind kind = FactorKind::Identity;
    Generator gen;

    static Factor generator(Generator g) { return {FactorKind::Gen, std::move(g)}; }
    static Factor identity() { return {FactorKind::Identity, {}}; }
    static Factor compact() { return {FactorKind::Compact, {}}; }
};

struct ExprTerm {
    Complex weight{1.0, 0.0};
    std::vector<Factor> factors;  // nonempty; applied left to right
};

// Flattened sum of weighted products of generators, identities and compact
// markers.  All generator blocks share the same k.
struct OperatorExpr {
    int k = 1;
    std::vector<ExprTerm> terms;

    static OperatorExpr from(Generator g);
    static OperatorExpr identity(int k = 1);
    static OperatorExpr compact(int k = 1);
    bool single_generator(Generator* out = nullptr) const;
    std::vector<double> jump_angles() const;  // union over all multipliers
};

OperatorExpr expr_add(const OperatorExpr& a, const OperatorExpr& b);
OperatorExpr expr_sub(const OperatorExpr& a, const OperatorExpr& b);
OperatorExpr expr_mul(const OperatorExpr& a, const OperatorExpr& b);
OperatorExpr expr_scale(const OperatorExpr& a, Complex s);
// The image of the expression under A -> Lambda^{-1} A Lambda, which sends
// T(a) + H(b) to T(a^) - H(b^).
OperatorExpr expr_flip(const OperatorExpr& a);

// Value of the Fredholm symbol at one point of the cylinder: a k x k matrix
// at t = +-1 (scalar for k = 1), a 2k x 2k matrix elsewhere on T_+.
struct SymbolValue {
    bool scalar_point = false;
    CMatrix mat;
};

bool is_scalar_point(double theta);

SymbolValue smb_generator(const Generator& g, double p, CircPoint t, CompactifiedReal lambda);
SymbolValue smb(const OperatorExpr& e, double p, CircPoint t, CompactifiedReal lambda);
CMatrix smb_matrix_generator(const MatrixGenerator& g, double p, CircPoint t,
                             CompactifiedReal lambda);

// Cached evaluator for a fixed expression and exponent: one-sided limits of
// every involved multiplier are computed once per angle and reused across a
// lambda sweep.  Pure apart from the mutable angle state.
class ExprEvaluator {
public:
    ExprEvaluator(const OperatorExpr& e, double p);

    void set_theta(double theta);
    double theta() const { return theta_; }
    int k() const { return expr_->k; }

    // 2k x 2k symbol at interior points t in T_+^0.
    CMatrix interior(CompactifiedReal lambda) const;
    // k x k symbol at t = +-1 (theta must be 0 or pi).
    CMatrix scalar_point(CompactifiedReal lambda) const;
    // One-sided limit of the (block diagonal) symbol as t' -> t along T_+.
    CMatrix t_limit(bool from_below) const;
    // Lower-right k x k block of interior(+-inf); exact since nu(+-inf) = 0.
    CMatrix a22_at_inf(bool pos) const;

private:
    struct FactorLimits {
        FactorKind kind;
        CMatrix a_tp, a_tm, a_cp, a_cm;  // a at t^+, t^-, conj(t)^+, conj(t)^-
        CMatrix b_tp, b_tm, b_cp, b_cm;
    };

    const OperatorExpr* expr_;
    double q_;
    double theta_ = -1.0;
    std::vector<std::vector<FactorLimits>> limits_;  // per term, per factor
};

enum class Fredholmness { Yes, No, Unresolved };

struct ResolutionSpec {
    int t_per_segment = 256;
    int lambda_points = 129;
    int refine_depth = 12;
};

struct FredholmVerdict {
    Fredholmness status = Fredholmness::Unresolved;
    double min_abs_det = 0.0;
    double max_abs_det = 0.0;
    double witness_theta = 0.0;
    CompactifiedReal witness_lambda;
    size_t samples = 0;
};

// Fredholm test by the invertibility of the symbol over T_+ x compactified R.
FredholmVerdict is_fredholm(const OperatorExpr& e, double p,
                            const ResolutionSpec& res = {});

// Same sweep for L(a) diag P + L(b) diag Q over the full circle.
FredholmVerdict is_fredholm_matrix_op(const MatrixGenerator& g, double p,
                                      const ResolutionSpec& res = {});

struct SpectrumPoint {
    Complex z;
    double theta;
    CompactifiedReal lambda;
};

// Union of the eigenvalues of the symbol over a (t, lambda) grid.
std::vector<SpectrumPoint> essential_spectrum_cloud(const OperatorExpr& e, double p,
                                                    const ResolutionSpec& res = {});

}  // namespace thop
