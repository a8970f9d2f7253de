#include "specdiag/seqspec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace specdiag {

const char* errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::NegativeEntry: return "NegativeEntry";
        case Errc::InsufficientSupport: return "InsufficientSupport";
        case Errc::UnsupportedTail: return "UnsupportedTail";
        case Errc::NotNonincreasing: return "NotNonincreasing";
        case Errc::IncompatibleTails: return "IncompatibleTails";
        case Errc::UndecidableDepth: return "UndecidableDepth";
        case Errc::LengthMismatch: return "LengthMismatch";
        case Errc::OutOfRange: return "OutOfRange";
        case Errc::Infeasible: return "Infeasible";
        case Errc::NotMajorized: return "NotMajorized";
        case Errc::SearchExhausted: return "SearchExhausted";
        case Errc::NotInteger: return "NotInteger";
        case Errc::NoConvergence: return "NoConvergence";
        case Errc::DimensionMismatch: return "DimensionMismatch";
        case Errc::NotUnitary: return "NotUnitary";
        case Errc::PatternMismatch: return "PatternMismatch";
        case Errc::CaseMismatch: return "CaseMismatch";
        case Errc::OracleViolation: return "OracleViolation";
        case Errc::ParseError: return "ParseError";
    }
    return "UnknownError";
}

Tail Tail::geometric(double c, double r) {
    if (c < 0.0) raise(Errc::OutOfRange, "geometric tail requires c >= 0");
    if (!(r > 0.0 && r < 1.0)) raise(Errc::OutOfRange, "geometric tail requires r in (0,1)");
    return Tail{TailKind::Geometric, c, r};
}

double Tail::value_at(std::size_t i) const {
    switch (kind) {
        case TailKind::Zero: return 0.0;
        case TailKind::Ones: return 1.0;
        case TailKind::Geometric: return c * std::pow(r, static_cast<double>(i - 1));
    }
    return 0.0;
}

double Tail::prefix_sum(std::size_t n) const {
    switch (kind) {
        case TailKind::Zero: return 0.0;
        case TailKind::Ones: return static_cast<double>(n);
        case TailKind::Geometric:
            if (c == 0.0 || n == 0) return 0.0;
            return c * (1.0 - std::pow(r, static_cast<double>(n))) / (1.0 - r);
    }
    return 0.0;
}

double Tail::total_sum() const {
    switch (kind) {
        case TailKind::Zero: return 0.0;
        case TailKind::Ones: return std::numeric_limits<double>::infinity();
        case TailKind::Geometric: return c / (1.0 - r);
    }
    return 0.0;
}

bool Tail::vanishes() const {
    return kind == TailKind::Zero || (kind == TailKind::Geometric && c == 0.0);
}

SequenceSpec::SequenceSpec(std::vector<Complex> head_, Tail tail_)
    : head(std::move(head_)), tail(tail_) {}

SequenceSpec SequenceSpec::finite(const std::vector<double>& values) {
    std::vector<Complex> h(values.begin(), values.end());
    return SequenceSpec(std::move(h), Tail::zero());
}

SequenceSpec SequenceSpec::finite_complex(std::vector<Complex> values) {
    return SequenceSpec(std::move(values), Tail::zero());
}

SequenceSpec SequenceSpec::with_tail(const std::vector<double>& values, Tail t) {
    std::vector<Complex> h(values.begin(), values.end());
    return SequenceSpec(std::move(h), t);
}

Complex SequenceSpec::at(std::size_t i) const {
    if (i == 0) raise(Errc::OutOfRange, "sequence positions are 1-based");
    if (i <= head.size()) return head[i - 1];
    return Complex(tail.value_at(i - head.size()), 0.0);
}

bool SequenceSpec::is_real() const {
    for (const Complex& z : head)
        if (z.imag() != 0.0) return false;
    return true;
}

bool SequenceSpec::is_nonnegative(double tol) const {
    for (const Complex& z : head)
        if (z.imag() != 0.0 || z.real() < -tol) return false;
    return true;
}

double SequenceSpec::total_sum_real() const {
    double s = 0.0;
    for (const Complex& z : head) s += z.real();
    return s + tail.total_sum();
}

namespace detail {

RearrangedPrefix rearranged_prefix(const SequenceSpec& x, std::size_t K, bool allow_zero_pad) {
    if (x.tail.kind == TailKind::Ones)
        raise(Errc::UnsupportedTail, "Ones tails carry unit-modulus semantics and are not rearranged");
    for (const Complex& z : x.head) {
        if (z.imag() != 0.0 || z.real() < 0.0)
            raise(Errc::NegativeEntry, "rearrangement requires nonnegative real entries");
    }

    // Head values, largest first; stable on ties so origins are deterministic.
    std::vector<std::size_t> order(x.head.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return x.head[a].real() > x.head[b].real();
    });

    const bool infinite = x.has_infinite_support();
    RearrangedPrefix out;
    out.values.reserve(K);
    out.origin.reserve(K);

    std::size_t hi = 0;               // next head value (descending)
    std::size_t ti = 1;               // next tail position (tail values are descending)
    while (out.values.size() < K) {
        double hv = hi < order.size() ? x.head[order[hi]].real() : -1.0;
        double tv = infinite ? x.tail.value_at(ti) : -1.0;
        if (hi < order.size() && hv >= tv) {
            if (hv == 0.0 && infinite) { ++hi; continue; }  // zeros skipped for infinite support
            out.values.push_back(hv);
            out.origin.push_back(order[hi] + 1);
            ++hi;
        } else if (infinite) {
            out.values.push_back(tv);
            out.origin.push_back(x.head.size() + ti);
            ++ti;
        } else {
            if (!allow_zero_pad)
                raise(Errc::InsufficientSupport, "finite-support spec shorter than requested depth");
            out.values.push_back(0.0);
            out.origin.push_back(0);
        }
    }
    out.tail_consumed = ti - 1;
    return out;
}

} // namespace detail

std::vector<double> nonincreasing_rearrangement(const SequenceSpec& x, std::size_t K,
                                                bool allow_zero_pad) {
    return detail::rearranged_prefix(x, K, allow_zero_pad).values;
}

std::vector<Complex> modulus_rearrangement(const SequenceSpec& x, std::size_t K,
                                           bool allow_zero_pad) {
    if (x.tail.kind == TailKind::Ones)
        raise(Errc::UnsupportedTail, "Ones tails carry unit-modulus semantics and are not rearranged");

    const bool infinite = x.has_infinite_support();
    // Collect enough candidates: all head entries plus the first K tail values.
    struct Entry { Complex value; double mod; std::size_t pos; };
    std::vector<Entry> entries;
    entries.reserve(x.head.size() + (infinite ? K : 0));
    for (std::size_t i = 0; i < x.head.size(); ++i)
        entries.push_back({x.head[i], std::abs(x.head[i]), i + 1});
    if (infinite)
        for (std::size_t i = 1; i <= K; ++i)
            entries.push_back({Complex(x.tail.value_at(i), 0.0), x.tail.value_at(i),
                               x.head.size() + i});
    std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.mod != b.mod) return a.mod > b.mod;
        return a.pos < b.pos;
    });

    std::vector<Complex> out;
    out.reserve(K);
    for (const Entry& e : entries) {
        if (out.size() == K) break;
        if (infinite && e.mod == 0.0) continue;
        out.push_back(e.value);
    }
    while (out.size() < K) {
        if (!allow_zero_pad)
            raise(Errc::InsufficientSupport, "finite-support spec shorter than requested depth");
        out.push_back(Complex(0.0, 0.0));
    }
    return out;
}

DeltaSequence delta_sequence(const SequenceSpec& d, const SequenceSpec& s, std::size_t K) {
    if (!d.is_nonnegative() || !s.is_nonnegative())
        raise(Errc::NegativeEntry, "delta_sequence requires nonnegative real sequences");
    for (std::size_t n = 1; n + 1 <= K; ++n) {
        if (s.at(n).real() < s.at(n + 1).real())
            raise(Errc::NotNonincreasing, "s must be nonincreasing over the first K terms");
    }

    DeltaSequence out;
    out.values.reserve(K);
    double acc = 0.0;
    for (std::size_t n = 1; n <= K; ++n) {
        acc += s.at(n).real() - d.at(n).real();
        out.values.push_back(acc);
    }
    if (d.tail.kind != TailKind::Ones && s.tail.kind != TailKind::Ones) {
        double lim = s.total_sum_real() - d.total_sum_real();
        out.limit = lim;
        out.liminf = lim;  // eventually monotone for Zero/Geometric tails
    }
    return out;
}

SequenceSpec direct_sum(const SequenceSpec& a, const SequenceSpec& b) {
    if (!a.tail.vanishes() && !b.tail.vanishes())
        raise(Errc::IncompatibleTails, "at most one operand may carry a non-zero tail");
    SequenceSpec out;
    out.head = a.head;
    out.head.insert(out.head.end(), b.head.begin(), b.head.end());
    out.tail = a.tail.vanishes() ? b.tail : a.tail;
    return out;
}

} // namespace specdiag
