#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "specdiag/construct_finite.hpp"
#include "specdiag/majorization.hpp"
#include "specdiag/oracle.hpp"
#include "specdiag/verify.hpp"

using namespace specdiag;

namespace {

std::vector<double> singulars(const DenseMatrix& A) { return jacobi_svd(A).sigma; }

void expect_witness(const DenseMatrix& A, const std::vector<Complex>& d,
                    std::vector<double> s) {
    std::sort(s.begin(), s.end(), std::greater<>());
    auto rep = verify_construction(A, d, s);
    CAPTURE(rep.diag_residual);
    CAPTURE(rep.sv_residual);
    CHECK(rep.pass);
}

} // namespace

TEST_CASE("solve_2x2: worked examples") {
    DenseMatrix a = solve_2x2(1, 1, 1.5, 0.5);
    CHECK(a(0, 0).real() == doctest::Approx(1.0));
    CHECK(a(0, 1).real() == doctest::Approx(0.5));
    CHECK(a(1, 0).real() == doctest::Approx(0.5));
    CHECK(a(1, 1).real() == doctest::Approx(1.0));

    DenseMatrix b = solve_2x2(0, 0, 1, 1);
    CHECK(b(0, 1).real() == doctest::Approx(1.0));
    CHECK(b(1, 0).real() == doctest::Approx(-1.0));

    DenseMatrix c = solve_2x2(1, 0, 1, 0);
    CHECK(c(0, 1).real() == doctest::Approx(0.0));
    CHECK(c(1, 0).real() == doctest::Approx(0.0));
}

TEST_CASE("solve_2x2: closed-form identities on dyadic inputs") {
    CounterRng rng(64);
    int built = 0;
    while (built < 200) {
        // Dyadic rationals keep P and T exactly representable.
        auto dy = [&](double scale) {
            return std::round(rng.uniform01() * scale * 64.0) / 64.0;
        };
        double s1 = dy(2.0), s2 = dy(2.0);
        if (s1 < s2) std::swap(s1, s2);
        double d1 = dy(2.0), d2 = dy(2.0);
        double x = std::max(d1, d2), y = std::min(d1, d2);
        if (x > s1 || x + y > s1 + s2 || x - y > s1 - s2) continue;
        ++built;
        DenseMatrix A = solve_2x2(d1, d2, s1, s2);
        double bb = A(0, 1).real(), cc = A(1, 0).real();
        double P = d1 * d2 - s1 * s2;
        double T = s1 * s1 + s2 * s2 - d1 * d1 - d2 * d2;
        CHECK(std::abs(bb * bb + cc * cc - T) <= 1e-12 * std::max(1.0, std::abs(T)));
        CHECK(std::abs(bb * cc - P) <= 1e-12 * std::max(1.0, std::abs(P)));
        expect_witness(A, {d1, d2}, {s1, s2});
    }
    CHECK_THROWS_AS(solve_2x2(2, 0, 1, 1), Error);
    CHECK_THROWS_AS(solve_2x2(2, 0, 2, 1), Error);  // spread exceeds s1-s2
}

TEST_CASE("schur_horn: worked examples") {
    DenseMatrix g = schur_horn({2, 2}, {3, 1});
    CHECK(g(0, 0).real() == doctest::Approx(2.0));
    CHECK(g(1, 1).real() == doctest::Approx(2.0));
    CHECK(std::abs(g(0, 1).real()) == doctest::Approx(1.0));
    CHECK(g(0, 1).real() == doctest::Approx(g(1, 0).real()));

    // Trace-4 rank-one with unit diagonal: the all-ones matrix.
    DenseMatrix ones = schur_horn({1, 1, 1, 1}, {4, 0, 0, 0});
    auto eig = symmetric_eigen(ones);
    CHECK(eig.eigenvalues[0] == doctest::Approx(4.0));
    for (std::size_t i = 1; i < 4; ++i)
        CHECK(eig.eigenvalues[i] == doctest::Approx(0.0).epsilon(1e-10));
    for (std::size_t i = 0; i < 4; ++i) CHECK(ones(i, i).real() == doctest::Approx(1.0));

    DenseMatrix d = schur_horn({5, 1, -2}, {5, 1, -2});
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(d(i, j).real() == doctest::Approx(i == j ? d(i, i).real() : 0.0));

    CHECK_THROWS_AS(schur_horn({3, 0}, {2, 1}), Error);
    CHECK_THROWS_AS(schur_horn({1, 1}, {3, 1}), Error);  // sums differ
}

TEST_CASE("schur_horn: random round trips with orthogonal factor") {
    CounterRng rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = 2 + rng.next_u64() % 7;
        std::vector<double> lam(n);
        for (auto& v : lam) v = 4.0 * rng.uniform01() - 1.0;
        std::sort(lam.begin(), lam.end(), std::greater<>());
        // Random majorized diagonal: repeated Robin Hood averaging.
        std::vector<double> d(lam);
        for (int mix = 0; mix < 40; ++mix) {
            std::size_t i = rng.next_u64() % n, j = rng.next_u64() % n;
            if (i == j) continue;
            double t = rng.uniform01() * 0.5;
            double di = d[i], dj = d[j];
            d[i] = (1 - t) * di + t * dj;
            d[j] = t * di + (1 - t) * dj;
        }
        SchurHornResult sh = schur_horn_with_factor(d, lam);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(sh.matrix(i, i).real() == d[i]);
        CHECK(selfadjoint_residual(sh.matrix) <= 1e-12);
        CHECK(unitary_residual(sh.factor) <= 1e-12 * n);
        auto eig = symmetric_eigen(sh.matrix);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(eig.eigenvalues[i] == doctest::Approx(lam[i]).epsilon(1e-9));
        // factor^T diag(lam) factor reproduces the matrix.
        DenseMatrix re = multiply(multiply(transpose(sh.factor), DenseMatrix::diagonal(lam)),
                                  sh.factor);
        CHECK(frobenius_norm(subtract(re, sh.matrix)) <= 1e-10 * std::max(1.0, frobenius_norm(sh.matrix)));
    }
}

TEST_CASE("phase_reduce examples") {
    using namespace std::complex_literals;
    auto pr = phase_reduce({-2.0, 3.0i});
    CHECK(pr.moduli == std::vector<double>{2, 3});
    CHECK(pr.phases(0, 0) == Complex(-1.0, 0.0));
    CHECK(std::abs(pr.phases(1, 1) - Complex(0.0, -1.0)) <= 1e-15);

    auto zr = phase_reduce({0.0, 5.0});
    CHECK(zr.phases(0, 0) == Complex(1.0, 0.0));
    CHECK(zr.phases(1, 1) == Complex(1.0, 0.0));

    auto rr = phase_reduce({-1.0, 2.0});
    CHECK(rr.phases.is_real());
}

TEST_CASE("thompson_construct: worked spec examples") {
    auto a = thompson_construct({8, 2, 2}, {10, 5, 3});
    CHECK(a.is_real());
    expect_witness(a, {8, 2, 2}, {10, 5, 3});

    auto b = thompson_construct({2, 2, 2}, {6, 1, 1});
    CHECK(b.is_real());
    expect_witness(b, {2, 2, 2}, {6, 1, 1});

    auto c = thompson_construct({3, 2, 1}, {3, 2, 1});
    expect_witness(c, {3, 2, 1}, {3, 2, 1});

    CHECK_THROWS_AS(thompson_construct({2, 0}, {2, 1}), Error);
}

TEST_CASE("thompson_construct: complex diagonals get complex witnesses") {
    using namespace std::complex_literals;
    std::vector<Complex> d{3.0i, -2.0, 1.0 + 1.0i};
    std::vector<double> s{5.0, 3.0, 1.0};
    auto rep = thompson_majorizes(SequenceSpec::finite_complex(d), SequenceSpec::finite(s));
    REQUIRE(rep.verdict);
    auto A = thompson_construct(d, s);
    expect_witness(A, d, s);
}

TEST_CASE("thompson_construct: randomized feasible pairs stay real and verified") {
    CounterRng rng(31337);
    int built = 0;
    while (built < 300) {
        std::size_t n = 2 + rng.next_u64() % 9;
        std::vector<double> d(n), s(n);
        for (auto& v : d) v = 2.0 * rng.uniform01();
        for (auto& v : s) v = 2.0 * rng.uniform01();
        std::sort(d.begin(), d.end(), std::greater<>());
        std::sort(s.begin(), s.end(), std::greater<>());
        if (!thompson_majorizes(SequenceSpec::finite(d), SequenceSpec::finite(s)).verdict)
            continue;
        ++built;
        std::vector<Complex> dz(d.begin(), d.end());
        DenseMatrix A = thompson_construct(dz, s);
        CHECK(A.is_real());
        expect_witness(A, dz, s);
    }
}

TEST_CASE("apply_splice keeps the host diagonal and swaps spectra") {
    CounterRng rng(404);
    // Host with a known singular value t in the middle.
    std::vector<double> hs{3.0, 1.25, 0.5};
    DenseMatrix U = haar_orthogonal(3, rng.next_u64());
    DenseMatrix V = haar_orthogonal(3, rng.next_u64());
    DenseMatrix host = multiply(multiply(U, DenseMatrix::diagonal(hs)), V);

    Splice sp;
    sp.host = host;
    sp.slot = 1;  // the 1.25 slot
    sp.interface_value = 1.25;
    sp.block = solve_2x2(1.25, 0.75, 2.0, 1.0);
    DenseMatrix out = apply_splice(sp);

    REQUIRE(out.rows() == 4);
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(std::abs(out(i, i) - host(i, i)) <= 1e-10);
    CHECK(out(3, 3).real() == doctest::Approx(0.75));

    auto sv = singulars(out);
    std::vector<double> want{3.0, 2.0, 1.0, 0.5};
    for (std::size_t i = 0; i < 4; ++i) CHECK(sv[i] == doctest::Approx(want[i]).epsilon(1e-9));
}

TEST_CASE("rank_one: the lemma's three cases") {
    // Equal-sum case: alpha = 1 gives the all-ones pattern.
    DenseMatrix a = rank_one(SequenceSpec::finite({1, 1}), 2.0, 2);
    CHECK(a(0, 0).real() == doctest::Approx(1.0));
    CHECK(a(0, 1).real() == doctest::Approx(1.0));
    CHECK(a(1, 0).real() == doctest::Approx(1.0));
    CHECK(a(1, 1).real() == doctest::Approx(1.0));

    // Zero diagonal: s1 e1 (x) e2 padded.
    DenseMatrix b = rank_one(SequenceSpec::finite({0.0}), 1.0, 1);
    REQUIRE(b.rows() == 3);
    CHECK(b(0, 1).real() == doctest::Approx(1.0));
    auto bs = singulars(b);
    CHECK(bs[0] == doctest::Approx(1.0));
    CHECK(bs[1] <= 1e-12);

    // Single positive entry: two spare coordinates.
    DenseMatrix c = rank_one(SequenceSpec::finite({0.5}), 1.0, 1);
    REQUIRE(c.rows() == 3);
    CHECK(c(0, 0).real() == doctest::Approx(0.5));
    CHECK(c(1, 1).real() == doctest::Approx(0.0));
    auto cs = singulars(c);
    CHECK(cs[0] == doctest::Approx(1.0));
    CHECK(cs[1] <= 1e-12);

    CHECK_THROWS_AS(rank_one(SequenceSpec::finite({2, 1}), 2.0, 2), Error);
}

TEST_CASE("rank_one: geometric tails truncate at the requested depth") {
    SequenceSpec d = SequenceSpec::with_tail({}, Tail::geometric(0.25, 0.5));
    DenseMatrix A = rank_one(d, 1.0, 5);
    REQUIRE(A.rows() == 5);
    for (std::size_t i = 0; i < 5; ++i)
        CHECK(A(i, i).real() == doctest::Approx(0.25 * std::pow(0.5, double(i))));
    auto sv = singulars(A);
    CHECK(sv[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sv[1] <= 1e-12);
}

TEST_CASE("projection_from_diagonal: examples and integrality") {
    DenseMatrix half = projection_from_diagonal({0.5, 0.5});
    CHECK(std::abs(half(0, 1).real()) == doctest::Approx(0.5));
    CHECK(idempotency_residual(half) <= 1e-10);

    DenseMatrix basis = projection_from_diagonal({1.0, 0.0});
    CHECK(basis(0, 0).real() == doctest::Approx(1.0));
    CHECK(basis(1, 1).real() == doctest::Approx(0.0));
    CHECK(std::abs(basis(0, 1)) <= 1e-12);

    DenseMatrix rank2 = projection_from_diagonal({0.5, 0.5, 1.0});
    CHECK(idempotency_residual(rank2) <= 1e-10);
    Complex tr = rank2(0, 0) + rank2(1, 1) + rank2(2, 2);
    CHECK(tr.real() == doctest::Approx(2.0));

    CHECK_THROWS_AS(projection_from_diagonal({0.7}), Error);
    CHECK_THROWS_AS(projection_from_diagonal({1.5, 0.5}), Error);
}

TEST_CASE("unitary_from_diagonal: worked finite-sum examples") {
    // (0.9, 0.92, 0.95) with Ones tail: 4x4 witness.
    UnitaryWitness w =
        unitary_from_diagonal(SequenceSpec::with_tail({0.9, 0.92, 0.95}, Tail::ones()));
    CHECK(w.covered == 3);
    REQUIRE(w.matrix.rows() == 4);
    CHECK(unitary_residual(w.matrix) <= 1e-10);
    CHECK(w.matrix(0, 0).real() == doctest::Approx(0.9));
    CHECK(w.matrix(1, 1).real() == doctest::Approx(0.92));
    CHECK(w.matrix(2, 2).real() == doctest::Approx(0.95));
    CHECK(w.matrix(3, 3).real() == doctest::Approx(1.0));
    CHECK(w.matrix.is_real());

    // (0, 0): a plane rotation padded by the identity.
    UnitaryWitness r = unitary_from_diagonal(SequenceSpec::with_tail({0.0, 0.0}, Tail::ones()));
    CHECK(unitary_residual(r.matrix) <= 1e-10);
    CHECK(std::abs(r.matrix(0, 0)) <= 1e-12);
    CHECK(std::abs(r.matrix(1, 1)) <= 1e-12);

    // All ones: the identity.
    UnitaryWitness id = unitary_from_diagonal(SequenceSpec::with_tail({1, 1, 1}, Tail::ones()));
    CHECK(frobenius_norm(subtract(id.matrix, DenseMatrix::identity(id.matrix.rows()))) <= 1e-12);

    CHECK_THROWS_AS(
        unitary_from_diagonal(SequenceSpec::with_tail({0.6, 0.8}, Tail::ones())), Error);
}

TEST_CASE("unitary_from_diagonal: zero tail routes through a projection symmetry") {
    UnitaryWitness w = unitary_from_diagonal(SequenceSpec::finite({1.0, 0.5, 0.5}));
    CHECK(unitary_residual(w.matrix) <= 1e-10);
    CHECK(selfadjoint_residual(w.matrix) <= 1e-10);  // a symmetry
    CHECK(w.matrix(0, 0).real() == doctest::Approx(1.0));
    CHECK(w.matrix(1, 1).real() == doctest::Approx(0.5));
    CHECK(w.matrix(2, 2).real() == doctest::Approx(0.5));
    for (std::size_t i = 3; i < w.matrix.rows(); ++i)
        CHECK(std::abs(w.matrix(i, i)) <= 1e-12);

    // Non-integer head sum cannot be truncated exactly.
    CHECK_THROWS_AS(unitary_from_diagonal(SequenceSpec::finite({0.9})), Error);
}

TEST_CASE("unitary_from_diagonal: geometric-in-deficit tails") {
    // Moduli 1 - 0.3*0.5^(t-1) approach one; the covered prefix must satisfy
    // the finite condition.
    SequenceSpec d = SequenceSpec::with_tail({0.8}, Tail::geometric(0.3, 0.5));
    UnitaryWitness w = unitary_from_diagonal(d);
    CHECK(unitary_residual(w.matrix) <= 1e-10);
    CHECK(w.matrix(0, 0).real() == doctest::Approx(0.8));
    for (std::size_t t = 1; t + 1 <= w.covered; ++t)
        CHECK(w.matrix(t, t).real() ==
              doctest::Approx(1.0 - 0.3 * std::pow(0.5, double(t - 1))));
}

TEST_CASE("unitary_from_diagonal: complex phases carry through") {
    using namespace std::complex_literals;
    std::vector<Complex> head{0.9i, -0.92, 0.95};
    SequenceSpec d = SequenceSpec(std::vector<Complex>(head), Tail::ones());
    UnitaryWitness w = unitary_from_diagonal(d);
    CHECK(unitary_residual(w.matrix) <= 1e-10);
    CHECK(std::abs(w.matrix(0, 0) - head[0]) <= 1e-12);
    CHECK(std::abs(w.matrix(1, 1) - head[1]) <= 1e-12);
    CHECK(std::abs(w.matrix(2, 2) - head[2]) <= 1e-12);
}
