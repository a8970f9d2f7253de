#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "specdiag/majorization.hpp"
#include "specdiag/oracle.hpp"
#include "specdiag/verify.hpp"

using namespace specdiag;

TEST_CASE("counter rng is deterministic and stateless in the counter") {
    CounterRng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    CHECK(CounterRng::derive(42, 7) == CounterRng::derive(42, 7));
    CHECK(CounterRng::derive(42, 7) != CounterRng::derive(42, 8));
    CounterRng c(42);
    double u = c.uniform01();
    CHECK(u > 0.0);
    CHECK(u <= 1.0);
}

TEST_CASE("haar factors are orthonormal; n=1 gives a fair sign") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull, 99ull}) {
        DenseMatrix Q = haar_orthogonal(5, seed);
        CHECK(unitary_residual(Q) <= 1e-12 * 5);
        CHECK(Q.is_real());
        DenseMatrix U = haar_unitary(4, seed);
        CHECK(unitary_residual(U) <= 1e-12 * 4);
    }
    int plus = 0;
    for (std::uint64_t seed = 0; seed < 2000; ++seed) {
        DenseMatrix Q = haar_orthogonal(1, seed);
        double v = Q(0, 0).real();
        CHECK(std::abs(std::abs(v) - 1.0) <= 1e-14);
        if (v > 0) ++plus;
    }
    CHECK(plus > 860);
    CHECK(plus < 1140);
}

TEST_CASE("haar first entry is uniform on [-1,1] at n=3 (KS test)") {
    // For a Haar orthogonal 3x3 the (1,1) entry has density (1-x^2)^0 / 2.
    const std::size_t trials = 10000;
    std::vector<double> xs;
    xs.reserve(trials);
    for (std::size_t t = 0; t < trials; ++t)
        xs.push_back(haar_orthogonal(3, CounterRng::derive(1234, t))(0, 0).real());
    std::sort(xs.begin(), xs.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < trials; ++i) {
        double cdf = (xs[i] + 1.0) / 2.0;
        double emp_hi = double(i + 1) / trials, emp_lo = double(i) / trials;
        ks = std::max({ks, std::abs(emp_hi - cdf), std::abs(cdf - emp_lo)});
    }
    CHECK(ks < 0.02);  // 1% critical value is ~0.0163 at n = 10^4
}

TEST_CASE("orbit diagonals satisfy Fan and the rank-one bound") {
    OrbitSample one = sample_orbit_diagonals({1.0, 0.0}, 200, 5, /*real_flag=*/false);
    for (const auto& diag : one.diagonals) {
        CHECK(std::abs(diag[0]) + std::abs(diag[1]) <= 1.0 + 1e-10);
    }

    // Real 2x2 orbit of (1,1): orthogonal x orthogonal keeps |d1| = |d2|.
    OrbitSample iso = sample_orbit_diagonals({1.0, 1.0}, 200, 6, /*real_flag=*/true);
    for (const auto& diag : iso.diagonals) {
        CHECK(diag[0].imag() == 0.0);
        CHECK(std::abs(std::abs(diag[0]) - std::abs(diag[1])) <= 1e-10);
    }

    CHECK(sample_orbit_diagonals({1.0}, 0, 7, true).diagonals.empty());
    CHECK_THROWS_AS(sample_orbit_diagonals({0.5, 1.0}, 1, 8, true), Error);
}

TEST_CASE("necessity sweep: no violations and sane tightness stats") {
    NecessityReport rep = necessity_sweep({3, 2, 1}, 2000, 99);
    CHECK(rep.violations == 0);
    CHECK(rep.min_prefix_gap >= -1e-10);
    CHECK(rep.min_final_gap >= -1e-10);

    NecessityReport single = necessity_sweep({1.0}, 500, 7);
    CHECK(single.violations == 0);
    // |d1| = 1 for every 1x1 unitary orbit point.
    CHECK(single.min_prefix_gap <= 1e-12);
    CHECK(single.min_prefix_gap >= -1e-12);
}

TEST_CASE("2x2 feasible region fills the Thompson polygon") {
    const double s1 = 2.0, s2 = 1.0;
    OrbitSample sample = sample_orbit_diagonals({s1, s2}, 20000, 2025, /*real_flag=*/true);
    double best_corner1 = 1e9, best_corner2 = 1e9;
    for (const auto& diag : sample.diagonals) {
        double x = std::abs(diag[0]), y = std::abs(diag[1]);
        if (x < y) std::swap(x, y);
        CHECK(x <= s1 + 1e-10);
        CHECK(x + y <= s1 + s2 + 1e-10);
        CHECK(x - y <= s1 - s2 + 1e-10);
        // Distance to the polygon corners (s1, s2) and (s1+s2)/2 midline apex.
        best_corner1 = std::min(best_corner1, std::hypot(x - s1, y - s2));
        best_corner2 = std::min(best_corner2,
                                std::hypot(x - (s1 + s2) / 2, y - (s1 + s2) / 2));
    }
    CHECK(best_corner1 < 0.02);
    CHECK(best_corner2 < 0.02);
}
