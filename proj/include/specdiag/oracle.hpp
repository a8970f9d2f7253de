#pragma once

#include <cstdint>
#include <vector>

#include "specdiag/dense_matrix.hpp"
#include "specdiag/tolerances.hpp"

namespace specdiag {

/// Counter-based generator: the i-th output is the SplitMix64 finalizer
/// applied to seed + i * 0x9E3779B97F4A7C15. Stateless in the counter, so
/// substreams derive cheaply and fixtures are stable across platforms.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t next_u64();
    /// Uniform in (0, 1].
    double uniform01();
    /// Standard normal via Box-Muller (pairs are cached).
    double normal();

    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream);

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
    bool has_cache_ = false;
    double cache_ = 0.0;
};

/// Haar-distributed orthogonal matrix: Gram-Schmidt on an iid normal matrix;
/// the triangular factor's diagonal is positive by construction, which makes
/// the distribution exactly invariant.
DenseMatrix haar_orthogonal(std::size_t n, std::uint64_t seed);
DenseMatrix haar_unitary(std::size_t n, std::uint64_t seed);

struct OrbitSample {
    std::uint64_t seed = 0;
    std::vector<double> s;
    std::vector<std::vector<Complex>> diagonals;
};

/// Diagonals of U diag(s) V over Haar draws; every stored diagonal is
/// checked against Fan's weak majorization at creation.
OrbitSample sample_orbit_diagonals(const std::vector<double>& s, std::size_t trials,
                                   std::uint64_t seed, bool real_flag);

struct NecessityReport {
    std::size_t trials = 0;
    double min_prefix_gap = 0.0;
    double min_final_gap = 0.0;
    std::size_t violations = 0;
};

/// Asserts Fan weak majorization and the final Thompson inequality on every
/// sampled diagonal; raises OracleViolation on a counterexample.
NecessityReport necessity_sweep(const std::vector<double>& s, std::size_t trials,
                                std::uint64_t seed, double slack = defaults::kVerdictTol);

} // namespace specdiag
