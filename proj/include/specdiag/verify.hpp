#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "specdiag/dense_matrix.hpp"
#include "specdiag/tolerances.hpp"

namespace specdiag {

/// Singular value decomposition A = U diag(sigma) V*, sigma nonincreasing.
struct SvdResult {
    DenseMatrix U;
    std::vector<double> sigma;
    DenseMatrix V;
};

/// One-sided Jacobi SVD with threshold sweeps and a deterministic sweep
/// order. Chosen for its high relative accuracy on the near-degenerate
/// spectra produced by tight cases.
SvdResult jacobi_svd(const DenseMatrix& A, double tol = defaults::kJacobiTol);

/// Eigendecomposition A = Q diag(lambda) Q* of a selfadjoint matrix by
/// two-sided Jacobi; eigenvalues nonincreasing.
struct EigenResult {
    DenseMatrix Q;
    std::vector<double> eigenvalues;
};
EigenResult symmetric_eigen(const DenseMatrix& A, double tol = defaults::kJacobiTol);

struct VerifyTolerances {
    double diag = defaults::kDiagTol;
    double sv_rel = defaults::kSvRelTol;
    double aux = defaults::kAuxTol;
};

struct VerificationReport {
    double diag_residual = 0.0;
    double sv_residual = 0.0;
    std::map<std::string, double> aux_residuals;
    bool pass = false;
};

/// Compare A against an expected diagonal (positionally) and expected
/// singular values (as a multiset, nonincreasing). The singular value
/// residual is relative to the largest expected value.
VerificationReport verify_construction(const DenseMatrix& A, const std::vector<Complex>& d,
                                       const std::vector<double>& s,
                                       const VerifyTolerances& tol = VerifyTolerances{});

/// Convenience aux checks; results are merged into a report's aux_residuals
/// by callers that need them.
double orthogonality_defect(const DenseMatrix& A);

enum class TheoremTag {
    TraceEquality_ThmPositive,
    TightStrong_UPositive,
    TightUnitary_Selfadjoint,
    TwoByTwoTrace,
    TwoByTwoSelfadjoint,
};

enum class CertVerdict { HypothesisFails, HypothesisHoldsConclusionVerified, Violation };

/// Outcome of an extremal-case certifier. `extracted` carries the unimodular
/// scalar or diagonal phase unitary recovered in the equality case.
struct Certificate {
    TheoremTag theorem_tag;
    double hypothesis_gap = 0.0;
    double conclusion_residual = 0.0;
    std::optional<std::variant<Complex, DenseMatrix>> extracted;
    CertVerdict verdict = CertVerdict::HypothesisFails;
};

/// tr|A| >= |tr A|; equality forces cA positive for a unimodular scalar c.
Certificate certify_trace_equality(const DenseMatrix& A, double tol = defaults::kVerdictTol);

/// min_n sum_{j<=n}(s_j - |d|*_j) = 0 forces A = (diagonal unitary) * (positive).
Certificate certify_tight_strong(const DenseMatrix& A, double tol = defaults::kVerdictTol);

/// Diagonal (-d1, d2, d3, ...), d_j > 0, with 2(1-d1) = sum (1-d_i) forces a
/// unitary to be selfadjoint.
Certificate certify_tight_unitary(const DenseMatrix& U, double tol = defaults::kVerdictTol);

/// The two 2x2 rigidity lemmas: s1+s2 >= d1+d2 on nonnegative diagonals with
/// equality iff positive; s1-s2 >= d1-|d2| on the d1 > 0 > d2 pattern with
/// equality iff selfadjoint.
Certificate check_2x2_lemmas(const DenseMatrix& A, double tol = defaults::kVerdictTol);

} // namespace specdiag
