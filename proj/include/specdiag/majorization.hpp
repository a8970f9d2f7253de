#pragma once

#include <optional>
#include <vector>

#include "specdiag/dense_matrix.hpp"
#include "specdiag/seqspec.hpp"
#include "specdiag/tolerances.hpp"

namespace specdiag {

enum class Order { Weak, Plain, Thompson, Strong };

/// Per-k partial-sum gaps sum_{i<=k}(s_i - d_i) on the nonincreasing
/// rearrangements, the verdict for the requested order, and the indices
/// where the gap is tight. For the Thompson order final_gap holds the slack
/// of the last inequality; for the Strong order it holds the liminf of the
/// gap sequence.
struct MajorizationReport {
    Order order = Order::Weak;
    bool verdict = false;
    std::vector<double> gaps;
    std::optional<double> final_gap;
    std::vector<std::size_t> binding_k;
};

struct KadisonReport {
    double a = 0.0;
    double b = 0.0;
    bool finite = true;
    std::optional<double> integer_gap;
    bool verdict = false;
};

/// d* weakly majorized by s*? Compared on rearrangements up to depth K; for
/// non-zero tails the closed forms certify that no violation occurs beyond
/// the inspected depth. Ones tails are rejected (UndecidableDepth).
MajorizationReport weak_majorizes(const SequenceSpec& d, const SequenceSpec& s, std::size_t K,
                                  double tol = defaults::kVerdictTol);

/// Weak majorization plus equality of total sums (closed forms).
MajorizationReport plain_majorizes(const SequenceSpec& d, const SequenceSpec& s, std::size_t K,
                                   double tol = defaults::kVerdictTol);

/// Finite Thompson majorization |d|* <_w s* together with the final
/// inequality sum_{i<N} |d|*_i - |d|*_N <= sum_{i<N} s_i - s_N. Both specs
/// must be finite of equal length.
MajorizationReport thompson_majorizes(const SequenceSpec& d, const SequenceSpec& s,
                                      double tol = defaults::kVerdictTol);

/// Weak majorization plus liminf of the gap sequence equal to zero.
MajorizationReport strong_majorizes(const SequenceSpec& d, const SequenceSpec& s, std::size_t K,
                                    double tol = defaults::kVerdictTol);

/// Fan's necessary condition |diag(A)|* <_w s(A); true for every matrix.
MajorizationReport fan_necessary(const DenseMatrix& A, double tol = defaults::kVerdictTol);

/// Kadison's condition for diagonals of projections: with a = sum_{d<1/2} d
/// and b = sum_{d>=1/2}(1-d), either a+b is infinite or a-b is an integer.
KadisonReport kadison_check(const SequenceSpec& d, double tol = defaults::kVerdictTol);

/// Diagonals of the class of unitary operators: |d_j| <= 1 and
/// 2(1 - inf_j |d_j|) <= sum_j (1 - |d_j|). A Zero tail contributes literal
/// zeros (the sum diverges and the condition holds automatically); a
/// Geometric(c, r) tail is read as 1-|d| following the geometric rule. The
/// report reuses the Thompson order; final_gap is the condition's slack.
MajorizationReport unitary_diagonal_check(const SequenceSpec& d,
                                          double tol = defaults::kVerdictTol);

namespace detail {

/// Feasibility core on plain nonincreasing nonnegative vectors.
bool weak_feasible(const std::vector<double>& d_desc, const std::vector<double>& s_desc,
                   double tol);
bool thompson_feasible(const std::vector<double>& d_desc, const std::vector<double>& s_desc,
                       double tol);

/// inf over n >= 1 (including the limit) of
///   sum_{i=1}^n (Ts*rs^(i-1) - Td*rd^(i-1)).
/// A vanished tail is passed as T = 0 (its ratio is ignored).
double tail_gap_infimum(double Ts, double rs, double Td, double rd);

/// Depth after which the nonincreasing rearrangement of x is a pure run of
/// consecutive tail values; also reports how many tail values are consumed
/// within that depth.
struct PureTailDepth {
    std::size_t depth = 0;
    std::size_t tail_consumed = 0;
};
PureTailDepth pure_tail_depth(const SequenceSpec& x);

} // namespace detail

} // namespace specdiag
