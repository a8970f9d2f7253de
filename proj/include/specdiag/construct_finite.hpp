#pragma once

#include <cstddef>
#include <vector>

#include "specdiag/dense_matrix.hpp"
#include "specdiag/seqspec.hpp"
#include "specdiag/tolerances.hpp"

namespace specdiag {

/// 2x2 matrix [[d1, b],[c, d2]] with diagonal (d1, d2) and singular values
/// (s1, s2), from the closed form b = (u+v)/2, c = (u-v)/2 where
/// u = sqrt(T+2P), v = sqrt(T-2P), P = d1*d2 - s1*s2, T = s1^2+s2^2-d1^2-d2^2.
/// Feasible iff, for x >= y the sorted diagonal, x <= s1, x+y <= s1+s2 and
/// x-y <= s1-s2.
DenseMatrix solve_2x2(double d1, double d2, double s1, double s2,
                      double tol = defaults::kVerdictTol);

struct SchurHornResult {
    DenseMatrix matrix;  // symmetric, diagonal d, eigenvalues lam
    DenseMatrix factor;  // orthogonal Q with matrix = Q^T diag(lam desc) Q
};

/// Symmetric real matrix with prescribed eigenvalues and diagonal, built by
/// Givens peeling: repeatedly rotate an adjacent eigenvalue pair onto the
/// smallest remaining target.
SchurHornResult schur_horn_with_factor(const std::vector<double>& d,
                                       const std::vector<double>& lam,
                                       double tol = defaults::kVerdictTol);
DenseMatrix schur_horn(const std::vector<double>& d, const std::vector<double>& lam,
                       double tol = defaults::kVerdictTol);

/// N x N matrix with prescribed complex diagonal and singular values, built
/// by phase reduction, recursive 2x2 splicing against a searched interface
/// value, and Schur-Horn delegation in the equal-sum case. Real output for
/// real input.
DenseMatrix thompson_construct(const std::vector<Complex>& d, const std::vector<double>& s,
                               double tol = defaults::kVerdictTol);

/// Rank-one witness v (x) w with diagonal matching the first K entries of d
/// and ||v|| ||w|| = s1. Output is (K+2)x(K+2) when spare coordinates are
/// needed (at most one positive entry), K x K otherwise.
DenseMatrix rank_one(const SequenceSpec& d, double s1, std::size_t K,
                     double tol = defaults::kVerdictTol);

/// Orthogonal projection with prescribed diagonal; requires an integer sum.
DenseMatrix projection_from_diagonal(const std::vector<double>& d,
                                     double tol = defaults::kVerdictTol);

struct PhaseReduction {
    std::vector<double> moduli;
    DenseMatrix phases;  // diagonal unitary z with z_i d_i = |d_i| (z_i = 1 at zeros)
};
PhaseReduction phase_reduce(const std::vector<Complex>& d);

struct UnitaryWitness {
    DenseMatrix matrix;
    std::vector<Complex> phases;  // one per covered diagonal entry
    std::size_t covered = 0;      // prefix of the requested sequence on the diagonal
};

/// Unitary with prescribed diagonal. A Zero tail routes through a projection
/// symmetry 2P - I on an integer-sum truncation; Ones and Geometric-in-(1-|d|)
/// tails follow the rotation-block construction. The output has the requested
/// entries exactly on its leading diagonal positions and exact ones beyond.
UnitaryWitness unitary_from_diagonal(const SequenceSpec& d,
                                     double tol = defaults::kVerdictTol);

/// Replace the singular value at `slot` of the host's SVD by a 2x2 block
/// whose (1,1) entry equals that singular value. The result keeps the host's
/// diagonal and swaps one singular value for the block's two.
struct Splice {
    DenseMatrix host;
    std::size_t slot = 0;
    DenseMatrix block;
    double interface_value = 0.0;
};
DenseMatrix apply_splice(const Splice& sp, double tol = defaults::kVerdictTol);

} // namespace specdiag
