#include "specdiag/majorization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "specdiag/verify.hpp"

namespace specdiag {

namespace detail {

bool weak_feasible(const std::vector<double>& d_desc, const std::vector<double>& s_desc,
                   double tol) {
    double gap = 0.0;
    for (std::size_t k = 0; k < d_desc.size(); ++k) {
        gap += s_desc[k] - d_desc[k];
        if (gap < -tol) return false;
    }
    return true;
}

bool thompson_feasible(const std::vector<double>& d_desc, const std::vector<double>& s_desc,
                       double tol) {
    const std::size_t n = d_desc.size();
    if (n == 0) return true;
    if (!weak_feasible(d_desc, s_desc, tol)) return false;
    double dsum = 0.0, ssum = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        dsum += d_desc[i];
        ssum += s_desc[i];
    }
    return dsum - d_desc[n - 1] <= ssum - s_desc[n - 1] + tol;
}

double tail_gap_infimum(double Ts, double rs, double Td, double rd) {
    auto partial = [&](double n) {
        double acc = 0.0;
        if (Ts > 0.0) acc += Ts * (1.0 - std::pow(rs, n)) / (1.0 - rs);
        if (Td > 0.0) acc -= Td * (1.0 - std::pow(rd, n)) / (1.0 - rd);
        return acc;
    };
    double limit = (Ts > 0.0 ? Ts / (1.0 - rs) : 0.0) - (Td > 0.0 ? Td / (1.0 - rd) : 0.0);

    if (Td <= 0.0) return std::min(limit, Ts > 0.0 ? partial(1.0) : 0.0);
    if (Ts <= 0.0) return limit;  // strictly decreasing, infimum at the limit

    double best = std::min(partial(1.0), limit);
    if (rs == rd) return best;  // increments share one sign

    // Increment sign flips once where Ts*rs^(n-1) = Td*rd^(n-1).
    double x = std::log(Td / Ts) / std::log(rs / rd) + 1.0;
    if (std::isfinite(x) && x > 1.0) {
        for (double n : {std::floor(x) - 1.0, std::floor(x), std::ceil(x), std::ceil(x) + 1.0})
            if (n >= 1.0) best = std::min(best, partial(n));
    }
    return best;
}

PureTailDepth pure_tail_depth(const SequenceSpec& x) {
    PureTailDepth out;
    std::size_t positives = 0;
    double hmin = std::numeric_limits<double>::infinity();
    for (const Complex& z : x.head) {
        if (z.real() > 0.0) {
            ++positives;
            hmin = std::min(hmin, z.real());
        }
    }
    if (positives == 0 || x.tail.vanishes()) {
        out.depth = positives;
        out.tail_consumed = 0;
        return out;
    }
    // Count tail values >= hmin; the merge may emit them before the smallest
    // head positive. A logarithm gives the region, a short scan pins it down.
    std::size_t count = 0;
    if (x.tail.c >= hmin) {
        double est = std::log(hmin / x.tail.c) / std::log(x.tail.r);  // tail(t) < hmin for t-1 > est
        std::size_t t = est > 0.0 ? static_cast<std::size_t>(est) + 1 : 1;
        while (t > 1 && x.tail.value_at(t - 1) < hmin) --t;
        while (x.tail.value_at(t) >= hmin) ++t;
        count = t - 1;
    }
    out.depth = positives + count;
    out.tail_consumed = count;
    return out;
}

} // namespace detail

namespace {

// Hard cap on the internally inspected depth; tails flatter than this are
// reported as undecidable rather than scanned.
constexpr std::size_t kMaxCertDepth = 1u << 22;

std::vector<std::size_t> tight_indices(const std::vector<double>& gaps, double tol) {
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < gaps.size(); ++k)
        if (std::abs(gaps[k]) <= tol) idx.push_back(k + 1);
    return idx;
}

void require_real_nonnegative(const SequenceSpec& x, const char* who) {
    if (!x.is_nonnegative())
        raise(Errc::NegativeEntry, std::string(who) + " requires nonnegative real sequences");
}

double next_tail_value(const SequenceSpec& x, std::size_t consumed) {
    if (x.tail.vanishes()) return 0.0;
    return x.tail.value_at(consumed + 1);
}

} // namespace

MajorizationReport weak_majorizes(const SequenceSpec& d, const SequenceSpec& s, std::size_t K,
                                  double tol) {
    require_real_nonnegative(d, "weak_majorizes");
    require_real_nonnegative(s, "weak_majorizes");
    if (d.tail.kind == TailKind::Ones || s.tail.kind == TailKind::Ones)
        raise(Errc::UndecidableDepth, "Ones tails admit no c0 rearrangement certificate");

    auto pd = detail::pure_tail_depth(d);
    auto ps = detail::pure_tail_depth(s);
    const std::size_t deep = std::max({K, pd.depth, ps.depth});
    if (deep > kMaxCertDepth)
        raise(Errc::UndecidableDepth, "tail certification needs an impractically deep scan");

    auto rd = detail::rearranged_prefix(d, deep, /*allow_zero_pad=*/true);
    auto rs = detail::rearranged_prefix(s, deep, /*allow_zero_pad=*/true);

    MajorizationReport rep;
    rep.order = Order::Weak;
    rep.gaps.reserve(K);
    bool ok = true;
    double gap = 0.0;
    for (std::size_t k = 0; k < deep; ++k) {
        gap += rs.values[k] - rd.values[k];
        if (k < K) rep.gaps.push_back(gap);
        if (gap < -tol) ok = false;
    }
    if (ok) {
        // Beyond `deep` both rearrangements are pure tail runs.
        double inf_beyond = detail::tail_gap_infimum(
            next_tail_value(s, rs.tail_consumed), s.tail.r,
            next_tail_value(d, rd.tail_consumed), d.tail.r);
        if (gap + inf_beyond < -tol) ok = false;
    }
    rep.verdict = ok;
    rep.binding_k = tight_indices(rep.gaps, tol);
    return rep;
}

MajorizationReport plain_majorizes(const SequenceSpec& d, const SequenceSpec& s, std::size_t K,
                                   double tol) {
    MajorizationReport rep = weak_majorizes(d, s, K, tol);
    rep.order = Order::Plain;
    double total_gap = s.total_sum_real() - d.total_sum_real();
    rep.final_gap = total_gap;
    double scale = std::max(1.0, std::abs(s.total_sum_real()));
    rep.verdict = rep.verdict && std::abs(total_gap) <= tol * scale;
    return rep;
}

MajorizationReport thompson_majorizes(const SequenceSpec& d, const SequenceSpec& s, double tol) {
    if (!d.tail.vanishes() || !s.tail.vanishes())
        raise(Errc::LengthMismatch, "thompson_majorizes requires finite sequences");
    if (d.head_size() != s.head_size())
        raise(Errc::LengthMismatch, "thompson_majorizes requires equal lengths");
    require_real_nonnegative(s, "thompson_majorizes (s)");

    const std::size_t n = d.head_size();
    std::vector<double> dm(n), sv(n);
    for (std::size_t i = 0; i < n; ++i) {
        dm[i] = std::abs(d.head[i]);
        sv[i] = s.head[i].real();
    }
    std::sort(dm.begin(), dm.end(), std::greater<>());
    std::sort(sv.begin(), sv.end(), std::greater<>());

    MajorizationReport rep;
    rep.order = Order::Thompson;
    bool weak_ok = true;
    double gap = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        gap += sv[k] - dm[k];
        rep.gaps.push_back(gap);
        if (gap < -tol) weak_ok = false;
    }
    if (n > 0) {
        double dhead = 0.0, shead = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            dhead += dm[i];
            shead += sv[i];
        }
        rep.final_gap = (shead - sv[n - 1]) - (dhead - dm[n - 1]);
        rep.verdict = weak_ok && *rep.final_gap >= -tol;
    } else {
        rep.verdict = true;
    }
    rep.binding_k = tight_indices(rep.gaps, tol);
    return rep;
}

MajorizationReport strong_majorizes(const SequenceSpec& d, const SequenceSpec& s, std::size_t K,
                                    double tol) {
    MajorizationReport rep = weak_majorizes(d, s, K, tol);
    rep.order = Order::Strong;
    double liminf = s.total_sum_real() - d.total_sum_real();
    rep.final_gap = liminf;
    rep.verdict = rep.verdict && std::abs(liminf) <= tol * std::max(1.0, s.total_sum_real());
    return rep;
}

MajorizationReport fan_necessary(const DenseMatrix& A, double tol) {
    if (!A.square()) raise(Errc::DimensionMismatch, "fan_necessary requires a square matrix");
    std::vector<Complex> diag = A.diagonal_entries();
    std::vector<double> mods(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) mods[i] = std::abs(diag[i]);
    SvdResult svd = jacobi_svd(A);
    return weak_majorizes(SequenceSpec::finite(mods), SequenceSpec::finite(svd.sigma),
                          diag.size(), tol);
}

KadisonReport kadison_check(const SequenceSpec& d, double tol) {
    KadisonReport rep;
    double a = 0.0, b = 0.0;
    for (const Complex& z : d.head) {
        if (z.imag() != 0.0 || z.real() < -tol || z.real() > 1.0 + tol)
            raise(Errc::OutOfRange, "kadison_check requires values in [0,1]");
        double v = std::clamp(z.real(), 0.0, 1.0);
        if (v < 0.5) a += v;
        else b += 1.0 - v;
    }
    switch (d.tail.kind) {
        case TailKind::Zero:
            break;  // zeros contribute nothing to a
        case TailKind::Ones:
            break;  // each 1-d_j vanishes
        case TailKind::Geometric: {
            if (d.tail.c > 1.0 + tol)
                raise(Errc::OutOfRange, "kadison_check requires values in [0,1]");
            // Values c*r^(i-1) fall below 1/2 after finitely many terms.
            std::size_t n_half = 0;
            while (d.tail.value_at(n_half + 1) >= 0.5) {
                if (++n_half > kMaxCertDepth)
                    raise(Errc::UndecidableDepth, "geometric tail decays too slowly to classify");
            }
            b += static_cast<double>(n_half) - d.tail.prefix_sum(n_half);
            a += d.tail.total_sum() - d.tail.prefix_sum(n_half);
            break;
        }
    }
    rep.a = a;
    rep.b = b;
    rep.finite = std::isfinite(a + b);
    if (rep.finite) {
        rep.integer_gap = a - b;
        rep.verdict = std::abs(a - b - std::round(a - b)) <= tol;
    } else {
        rep.verdict = true;
    }
    return rep;
}

MajorizationReport unitary_diagonal_check(const SequenceSpec& d, double tol) {
    MajorizationReport rep;
    rep.order = Order::Thompson;

    double deficit_sum = 0.0;  // sum of 1 - |d_j|
    double inf_mod = std::numeric_limits<double>::infinity();
    for (const Complex& z : d.head) {
        double m = std::abs(z);
        if (m > 1.0 + tol) raise(Errc::OutOfRange, "unitary diagonal entries must have modulus <= 1");
        deficit_sum += 1.0 - m;
        inf_mod = std::min(inf_mod, m);
    }
    switch (d.tail.kind) {
        case TailKind::Zero:
            // Literal zeros: infinitely many unit deficits.
            deficit_sum = std::numeric_limits<double>::infinity();
            inf_mod = 0.0;
            break;
        case TailKind::Ones:
            inf_mod = std::min(inf_mod, 1.0);
            break;
        case TailKind::Geometric:
            // Read as 1-|d| following the geometric rule: moduli 1 - c*r^(i-1).
            if (d.tail.c > 1.0 + tol)
                raise(Errc::OutOfRange, "unitary diagonal entries must have modulus <= 1");
            deficit_sum += d.tail.total_sum();
            inf_mod = std::min(inf_mod, 1.0 - d.tail.c);
            break;
    }
    if (!std::isfinite(inf_mod)) inf_mod = 1.0;  // empty head with Ones tail

    if (std::isinf(deficit_sum)) {
        rep.verdict = true;
        rep.final_gap = std::numeric_limits<double>::infinity();
    } else {
        double slack = deficit_sum - 2.0 * (1.0 - inf_mod);
        rep.final_gap = slack;
        rep.verdict = slack >= -tol;
    }
    return rep;
}

} // namespace specdiag
