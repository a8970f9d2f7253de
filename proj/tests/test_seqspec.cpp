#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "specdiag/oracle.hpp"
#include "specdiag/seqspec.hpp"

using namespace specdiag;

namespace {

// Brute-force oracle: enumerate enough represented values and sort.
std::vector<double> brute_rearrangement(const SequenceSpec& x, std::size_t K) {
    std::vector<double> vals;
    const bool infinite = x.has_infinite_support();
    std::size_t depth = x.head_size() + K + 8;
    for (std::size_t i = 1; i <= depth; ++i) vals.push_back(x.at(i).real());
    std::sort(vals.begin(), vals.end(), std::greater<>());
    std::vector<double> out;
    for (double v : vals) {
        if (out.size() == K) break;
        if (infinite && v == 0.0) continue;
        out.push_back(v);
    }
    while (out.size() < K) out.push_back(0.0);
    return out;
}

SequenceSpec random_spec(CounterRng& rng, bool with_tail) {
    std::vector<double> head;
    std::size_t n = rng.next_u64() % 6;
    for (std::size_t i = 0; i < n; ++i) head.push_back(rng.uniform01() * 3.0);
    Tail t = Tail::zero();
    if (with_tail && (rng.next_u64() & 1)) {
        t = Tail::geometric(rng.uniform01(), 0.2 + 0.6 * rng.uniform01());
    }
    return SequenceSpec::with_tail(head, t);
}

} // namespace

TEST_CASE("tail closed forms") {
    Tail g = Tail::geometric(1.0, 0.5);
    CHECK(g.value_at(1) == doctest::Approx(1.0));
    CHECK(g.value_at(3) == doctest::Approx(0.25));
    CHECK(g.prefix_sum(3) == doctest::Approx(1.75));
    CHECK(g.total_sum() == doctest::Approx(2.0));
    CHECK(std::isinf(Tail::ones().total_sum()));
    CHECK(Tail::zero().total_sum() == 0.0);
}

TEST_CASE("nonincreasing rearrangement: finite sort") {
    auto r = nonincreasing_rearrangement(SequenceSpec::finite({1, 3, 2}), 3);
    CHECK(r == std::vector<double>{3, 2, 1});
}

TEST_CASE("nonincreasing rearrangement: head merged with geometric tail") {
    // Infinite support: the head zero is skipped and the tail values
    // (1, 1/2, 1/4, ...) interleave after the head's 5.
    SequenceSpec x = SequenceSpec::with_tail({0, 5}, Tail::geometric(1.0, 0.5));
    auto r = nonincreasing_rearrangement(x, 3);
    CHECK(r == brute_rearrangement(x, 3));
    CHECK(r == std::vector<double>{5.0, 1.0, 0.5});
}

TEST_CASE("nonincreasing rearrangement: empty") {
    CHECK(nonincreasing_rearrangement(SequenceSpec::finite({}), 0).empty());
}

TEST_CASE("nonincreasing rearrangement: errors") {
    CHECK_THROWS_AS(nonincreasing_rearrangement(SequenceSpec::finite({-1.0}), 1), Error);
    CHECK_THROWS_AS(
        nonincreasing_rearrangement(SequenceSpec::with_tail({1}, Tail::ones()), 2), Error);
    CHECK_THROWS_AS(nonincreasing_rearrangement(SequenceSpec::finite({1}), 3, false), Error);
    CHECK(nonincreasing_rearrangement(SequenceSpec::finite({1}), 3) ==
          std::vector<double>{1, 0, 0});
}

TEST_CASE("modulus rearrangement examples") {
    using namespace std::complex_literals;
    SequenceSpec x = SequenceSpec::finite_complex({2.0i, -1.0, 3.0});
    auto r = modulus_rearrangement(x, 3);
    REQUIRE(r.size() == 3);
    CHECK(r[0] == Complex(3.0, 0.0));
    CHECK(r[1] == Complex(0.0, 2.0));
    CHECK(r[2] == Complex(-1.0, 0.0));

    // Stable tie-break keeps original order.
    auto tie = modulus_rearrangement(SequenceSpec::finite_complex({1.0, -1.0}), 2);
    CHECK(tie[0] == Complex(1.0, 0.0));
    CHECK(tie[1] == Complex(-1.0, 0.0));

    // Finite support keeps its zero.
    auto fin = modulus_rearrangement(SequenceSpec::finite_complex({0.0, 2.0i}), 2);
    CHECK(fin[0] == Complex(0.0, 2.0));
    CHECK(fin[1] == Complex(0.0, 0.0));
}

TEST_CASE("modulus rearrangement agrees with modulus of rearrangement") {
    CounterRng rng(2024);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<Complex> head;
        std::size_t n = rng.next_u64() % 7;
        for (std::size_t i = 0; i < n; ++i)
            head.push_back(Complex(rng.normal(), rng.normal()));
        SequenceSpec x = SequenceSpec::finite_complex(head);
        std::vector<double> mods(n);
        for (std::size_t i = 0; i < n; ++i) mods[i] = std::abs(head[i]);
        std::size_t K = rng.next_u64() % (n + 2);
        auto lhs = modulus_rearrangement(x, K);
        auto rhs = nonincreasing_rearrangement(SequenceSpec::finite(mods), K);
        REQUIRE(lhs.size() == rhs.size());
        for (std::size_t i = 0; i < K; ++i)
            CHECK(std::abs(lhs[i]) == doctest::Approx(rhs[i]).epsilon(1e-14));
    }
}

TEST_CASE("delta sequence: identical specs vanish") {
    SequenceSpec d = SequenceSpec::with_tail({1.0, 0.5}, Tail::geometric(0.25, 0.5));
    DeltaSequence ds = delta_sequence(d, d, 5);
    for (double v : ds.values) CHECK(v == doctest::Approx(0.0));
    REQUIRE(ds.limit.has_value());
    CHECK(*ds.limit == doctest::Approx(0.0));
}

TEST_CASE("delta sequence: the worked two-power pair") {
    // s_j = 2^(1-j), d_j = 2^-j.
    SequenceSpec s = SequenceSpec::with_tail({1.0}, Tail::geometric(0.5, 0.5));
    SequenceSpec d = SequenceSpec::with_tail({0.5}, Tail::geometric(0.25, 0.5));
    DeltaSequence ds = delta_sequence(d, s, 3);
    REQUIRE(ds.values.size() == 3);
    CHECK(ds.values[0] == doctest::Approx(0.5));
    CHECK(ds.values[1] == doctest::Approx(0.75));
    CHECK(ds.values[2] == doctest::Approx(0.875));
    REQUIRE(ds.limit.has_value());
    CHECK(*ds.limit == doctest::Approx(1.0));
    REQUIRE(ds.liminf.has_value());
    CHECK(*ds.liminf == doctest::Approx(1.0));
}

TEST_CASE("delta sequence: finite pair") {
    DeltaSequence ds =
        delta_sequence(SequenceSpec::finite({1, 1, 0}), SequenceSpec::finite({3, 1, 1}), 3);
    CHECK(ds.values == std::vector<double>{2, 2, 3});
    CHECK(*ds.limit == doctest::Approx(3.0));
}

TEST_CASE("delta sequence: telescoping and errors") {
    SequenceSpec s = SequenceSpec::with_tail({2.0, 1.0}, Tail::geometric(0.5, 0.5));
    SequenceSpec d = SequenceSpec::with_tail({0.5}, Tail::geometric(0.3, 0.4));
    DeltaSequence ds = delta_sequence(d, s, 8);
    for (std::size_t n = 1; n < 8; ++n) {
        double inc = ds.values[n] - ds.values[n - 1];
        CHECK(inc == doctest::Approx(s.at(n + 1).real() - d.at(n + 1).real()).epsilon(1e-13));
    }
    CHECK_THROWS_AS(
        delta_sequence(d, SequenceSpec::finite({1.0, 2.0}), 2), Error);  // s increasing
    SequenceSpec ones = SequenceSpec::with_tail({1.0}, Tail::ones());
    CHECK_FALSE(delta_sequence(d, s, 3).values.empty());
    CHECK_FALSE(delta_sequence(ones, s, 3).limit.has_value());
}

TEST_CASE("direct sum: multiset union and tail handling") {
    SequenceSpec a = SequenceSpec::finite({1});
    SequenceSpec b = SequenceSpec::finite({2, 3});
    SequenceSpec ab = direct_sum(a, b);
    std::vector<double> got;
    for (const Complex& z : ab.head) got.push_back(z.real());
    std::sort(got.begin(), got.end());
    CHECK(got == std::vector<double>{1, 2, 3});

    SequenceSpec id = direct_sum(SequenceSpec::finite({}), b);
    CHECK(id.head == b.head);

    SequenceSpec withOnes = direct_sum(SequenceSpec::finite({5}),
                                       SequenceSpec::with_tail({}, Tail::ones()));
    CHECK(withOnes.head.size() == 1);
    CHECK(withOnes.tail.kind == TailKind::Ones);

    CHECK_THROWS_AS(direct_sum(SequenceSpec::with_tail({}, Tail::ones()),
                               SequenceSpec::with_tail({}, Tail::geometric(1, 0.5))),
                    Error);
}

TEST_CASE("direct sum: random multiset property with tails") {
    CounterRng rng(77);
    for (int trial = 0; trial < 200; ++trial) {
        SequenceSpec a = random_spec(rng, true);
        SequenceSpec b = random_spec(rng, a.tail.vanishes());
        SequenceSpec ab = direct_sum(a, b);
        std::size_t K = a.head_size() + b.head_size() + 6;
        auto merged = nonincreasing_rearrangement(ab, K);
        // Oracle: merge the two rearranged parts.
        auto ra = nonincreasing_rearrangement(a, K);
        auto rb = nonincreasing_rearrangement(b, K);
        std::vector<double> both(ra);
        both.insert(both.end(), rb.begin(), rb.end());
        std::sort(both.begin(), both.end(), std::greater<>());
        both.resize(K);
        for (std::size_t i = 0; i < K; ++i)
            CHECK(merged[i] == doctest::Approx(both[i]).epsilon(1e-13));
    }
}

TEST_CASE("rearrangement output is nonincreasing (random specs)") {
    CounterRng rng(5150);
    for (int trial = 0; trial < 300; ++trial) {
        SequenceSpec x = random_spec(rng, true);
        auto r = nonincreasing_rearrangement(x, 10);
        for (std::size_t i = 0; i + 1 < r.size(); ++i) CHECK(r[i] >= r[i + 1]);
    }
}
