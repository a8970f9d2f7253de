#include "specdiag/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "specdiag/majorization.hpp"

namespace specdiag {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

std::uint64_t splitmix_finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace

std::uint64_t CounterRng::next_u64() {
    ++counter_;
    return splitmix_finalize(seed_ + counter_ * kGamma);
}

double CounterRng::uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
}

double CounterRng::normal() {
    if (has_cache_) {
        has_cache_ = false;
        return cache_;
    }
    double u1 = uniform01();
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * std::numbers::pi * u2;
    cache_ = r * std::sin(a);
    has_cache_ = true;
    return r * std::cos(a);
}

std::uint64_t CounterRng::derive(std::uint64_t seed, std::uint64_t stream) {
    return splitmix_finalize(seed ^ splitmix_finalize(stream + kGamma));
}

namespace {

DenseMatrix haar_factor(std::size_t n, std::uint64_t seed, bool complex_field) {
    if (n == 0) raise(Errc::OutOfRange, "haar factor needs n >= 1");
    CounterRng rng(seed);
    DenseMatrix G(n, n, complex_field ? FieldTag::Complex : FieldTag::Real);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (complex_field) {
                G(i, j) = Complex(rng.normal(), rng.normal()) / std::sqrt(2.0);
            } else {
                G(i, j) = rng.normal();
            }
        }
    }
    // Modified Gram-Schmidt, re-orthogonalized once. Normalization constants
    // are positive, so the implicit R has a positive diagonal.
    for (std::size_t j = 0; j < n; ++j) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t k = 0; k < j; ++k) {
                Complex dot(0.0, 0.0);
                for (std::size_t i = 0; i < n; ++i) dot += std::conj(G(i, k)) * G(i, j);
                for (std::size_t i = 0; i < n; ++i) G(i, j) -= dot * G(i, k);
            }
        }
        double nrm = 0.0;
        for (std::size_t i = 0; i < n; ++i) nrm += std::norm(G(i, j));
        nrm = std::sqrt(nrm);
        if (nrm == 0.0) raise(Errc::NoConvergence, "degenerate Gaussian draw");
        for (std::size_t i = 0; i < n; ++i) G(i, j) /= nrm;
    }
    G.normalize_field();
    return G;
}

} // namespace

DenseMatrix haar_orthogonal(std::size_t n, std::uint64_t seed) {
    return haar_factor(n, seed, /*complex_field=*/false);
}

DenseMatrix haar_unitary(std::size_t n, std::uint64_t seed) {
    return haar_factor(n, seed, /*complex_field=*/true);
}

OrbitSample sample_orbit_diagonals(const std::vector<double>& s, std::size_t trials,
                                   std::uint64_t seed, bool real_flag) {
    const std::size_t n = s.size();
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (s[i] < s[i + 1]) raise(Errc::NotNonincreasing, "s must be nonincreasing");
    if (!s.empty() && s.back() < 0.0) raise(Errc::NegativeEntry, "s must be nonnegative");

    OrbitSample out;
    out.seed = seed;
    out.s = s;
    out.diagonals.reserve(trials);
    for (std::size_t t = 0; t < trials; ++t) {
        DenseMatrix U = real_flag ? haar_orthogonal(n, CounterRng::derive(seed, 2 * t))
                                  : haar_unitary(n, CounterRng::derive(seed, 2 * t));
        DenseMatrix V = real_flag ? haar_orthogonal(n, CounterRng::derive(seed, 2 * t + 1))
                                  : haar_unitary(n, CounterRng::derive(seed, 2 * t + 1));
        std::vector<Complex> diag(n, Complex(0.0, 0.0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) diag[i] += U(i, k) * s[k] * V(k, i);

        std::vector<double> mods(n);
        for (std::size_t i = 0; i < n; ++i) mods[i] = std::abs(diag[i]);
        std::sort(mods.begin(), mods.end(), std::greater<>());
        if (!detail::weak_feasible(mods, s, defaults::kVerdictTol)) {
            std::ostringstream msg;
            msg << "orbit diagonal violates Fan majorization at trial " << t;
            raise(Errc::OracleViolation, msg.str());
        }
        out.diagonals.push_back(std::move(diag));
    }
    return out;
}

NecessityReport necessity_sweep(const std::vector<double>& s, std::size_t trials,
                                std::uint64_t seed, double slack) {
    const std::size_t n = s.size();
    NecessityReport rep;
    rep.trials = trials;
    rep.min_prefix_gap = std::numeric_limits<double>::infinity();
    rep.min_final_gap = std::numeric_limits<double>::infinity();

    OrbitSample sample = sample_orbit_diagonals(s, trials, seed, /*real_flag=*/false);
    double shead = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) shead += s[i];

    for (std::size_t t = 0; t < trials; ++t) {
        std::vector<double> mods(n);
        for (std::size_t i = 0; i < n; ++i) mods[i] = std::abs(sample.diagonals[t][i]);
        std::sort(mods.begin(), mods.end(), std::greater<>());
        double gap = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            gap += s[k] - mods[k];
            rep.min_prefix_gap = std::min(rep.min_prefix_gap, gap);
            if (gap < -slack) ++rep.violations;
        }
        if (n > 0) {
            double dhead = 0.0;
            for (std::size_t i = 0; i + 1 < n; ++i) dhead += mods[i];
            double fgap = (shead - s[n - 1]) - (dhead - mods[n - 1]);
            rep.min_final_gap = std::min(rep.min_final_gap, fgap);
            if (fgap < -slack) ++rep.violations;
        }
    }
    if (rep.violations > 0) {
        std::ostringstream msg;
        msg << "necessity violated " << rep.violations << " times over " << trials << " trials";
        raise(Errc::OracleViolation, msg.str());
    }
    return rep;
}

} // namespace specdiag
