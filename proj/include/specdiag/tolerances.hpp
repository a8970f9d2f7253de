#pragma once

namespace specdiag::defaults {

/// Verdict tolerance: sign tests on majorization gaps, Z-membership,
/// hypothesis gates of the certifiers.
inline constexpr double kVerdictTol = 1e-10;

/// Relative tolerance on recovered singular values (scaled by the largest
/// requested value).
inline constexpr double kSvRelTol = 1e-8;

/// Absolute tolerance on diagonal entries of constructed witnesses.
inline constexpr double kDiagTol = 1e-12;

/// Orthogonality / idempotency residual tolerance.
inline constexpr double kAuxTol = 1e-10;

/// Convergence threshold for the Jacobi sweeps (relative off-diagonal mass).
inline constexpr double kJacobiTol = 1e-14;

/// Hard cap on Jacobi sweeps before NoConvergence.
inline constexpr int kJacobiMaxSweeps = 64;

} // namespace specdiag::defaults
