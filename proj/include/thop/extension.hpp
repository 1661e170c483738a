#pragma once

#include "thop/algebra.hpp"

namespace thop {

// h x r matrix of generators b_jl = T(a_jl) + H(b_jl); the associated
// algebra element is el(beta) = sum_j b_j1 ... b_jr.
struct GeneratorMatrix {
    int h = 1;
    int r = 1;
    std::vector<Generator> entries;  // row-major, h*r, all with the same k

    Generator& at(int j, int l) { return entries[static_cast<size_t>(j) * r + l]; }
    const Generator& at(int j, int l) const { return entries[static_cast<size_t>(j) * r + l]; }
    int k() const { return entries.front().k(); }
};

OperatorExpr el(const GeneratorMatrix& beta);

// Linear extension of el(beta): the s x s block matrix [Z X; Y 0] with
// s = h(r+1) + 1, Z unitriangular with the -B_j blocks on the block
// superdiagonal, X the column of h trailing -identities and Y the row of h
// leading identities.  It factors as
//   [I 0; W I] * diag(I, el(beta)) * [Z X; 0 I]
// with W = (M_0, ..., M_r), M_j the row of length-j partial products, so
// ext(beta) is invertible exactly when el(beta) is.
struct ExtensionMatrix {
    int h = 1, r = 1, s = 3;
    int k = 1;
    std::vector<OperatorExpr> blocks;  // s x s, row-major
    // T+H realization ext(beta) = T(c) + H(d) with (s*k) x (s*k) multipliers
    MultMatrix c, d;

    const OperatorExpr& at(int i, int j) const {
        return blocks[static_cast<size_t>(i) * s + j];
    }
};

ExtensionMatrix ext(const GeneratorMatrix& beta);

// Symbol of an s x s matrix of expressions at one point, assembled through
// the M_s(M_2(C^k)) = M_2(M_s(C^k)) rearrangement (interior points) or
// directly (t = +-1).
CMatrix assembled_smb(const std::vector<OperatorExpr>& blocks, int s, double p,
                      CircPoint t, CompactifiedReal lambda);

// Max entrywise deviation between smb(ext(beta)) and the product of the three
// factor symbols over a (t, lambda) grid.
double verify_extension_factorization(const GeneratorMatrix& beta, double p,
                                      const ResolutionSpec& res = {});

struct EquivalencePoint {
    double theta;
    CompactifiedReal lambda;
    double det_el;
    double det_ext;
};

struct EquivalenceReport {
    bool agree = true;
    size_t points = 0;
    double max_det_gap = 0.0;  // max | |det ext| - |det el| |
    std::vector<EquivalencePoint> disagreements;
};

// Pointwise agreement of the invertibility of smb(el) and smb(ext) over the
// verification grid, with is_fredholm-style thresholds.
EquivalenceReport extension_equivalence_check(const GeneratorMatrix& beta, double p,
                                              const ResolutionSpec& res = {});

// ---- the full-circle variant over L(a) diag P + L(b) diag Q generators ----

struct MatrixGeneratorMatrix {
    int h = 1;
    int r = 1;
    std::vector<MatrixGenerator> entries;  // row-major, h*r, same k

    const MatrixGenerator& at(int j, int l) const {
        return entries[static_cast<size_t>(j) * r + l];
    }
    int k() const { return entries.front().k(); }
};

// Symbol of el(beta) = sum_j b_j1 ... b_jr at one point of T x R-bar.
CMatrix smb_el_matrix(const MatrixGeneratorMatrix& beta, double p, CircPoint t,
                      CompactifiedReal lambda);

// Linear extension in the extended Toeplitz algebra: a single generator
// L(c) diag P + L(d) diag Q where both c and d carry the companion layout
// (the identity scaffolding sits on both sides since e = L(1)P + L(1)Q).
MatrixGenerator ext_matrix(const MatrixGeneratorMatrix& beta);

// Index of el(beta) from the full-circle normalized determinant curve.
IndexReportForward index_matrix_expr_decl();  // see index.hpp for IndexReport

// Invertibility agreement of smb(el) and smb(ext) over the grid.
EquivalenceReport extension_equivalence_check_matrix(const MatrixGeneratorMatrix& beta,
                                                     double p,
                                                     const ResolutionSpec& res = {});

// Optional cross-check of the Toeplitz reduction: when d = ext over the Q
// side is piecewise constant and invertible, the index of ext(beta) equals
// the index of T(d^{-1} c).  Returns false in `ran` when the reduction does
// not apply (d not piecewise constant).
struct ToeplitzReduction {
    bool ran = false;
    long index = 0;
};
ToeplitzReduction toeplitz_reduction_index(const MatrixGeneratorMatrix& beta, double p,
                                           const ResolutionSpec& res = {});

}  // namespace thop
