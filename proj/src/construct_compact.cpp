#include "specdiag/construct_compact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "specdiag/construct_finite.hpp"
#include "specdiag/majorization.hpp"
#include "specdiag/verify.hpp"

namespace specdiag {

namespace {

constexpr std::size_t kMaxPlanDepth = 200000;

// Finite witnesses stay desk-scale; a plan whose blocks outgrow these bounds
// is reported as undecidable rather than ground through.
constexpr std::size_t kMaxThompsonBlock = 160;
constexpr std::size_t kMaxRealizedBlock = 2000;

// Joint view of the rearranged pair: gap prefix sums, the closed-form limit,
// and a depth beyond which both streams are pure tails with single-signed
// increments.
class PairAnalysis {
public:
    PairAnalysis(const SequenceSpec& d, const SequenceSpec& s, std::size_t K, double tol)
        : d_(d), s_(s) {
        if (!d.is_nonnegative() || !s.is_nonnegative())
            raise(Errc::NegativeEntry, "compact planning requires nonnegative sequences");
        if (d.tail.kind == TailKind::Ones || s.tail.kind == TailKind::Ones)
            raise(Errc::UndecidableDepth, "compact planning requires c0 sequences");
        for (std::size_t i = 1; i + 1 <= s.head_size(); ++i)
            if (s.at(i).real() < s.at(i + 1).real() - tol)
                raise(Errc::NotNonincreasing, "s must be nonincreasing");
        if (!s.tail.vanishes() && s.head_size() > 0 &&
            s.head.back().real() < s.tail.value_at(1) - tol)
            raise(Errc::NotNonincreasing, "s head must dominate its tail");

        auto pd = detail::pure_tail_depth(d);
        auto ps = detail::pure_tail_depth(s);
        merge_depth_ = std::max({K, pd.depth, ps.depth, d.head_size(), s.head_size()});
        if (merge_depth_ > kMaxPlanDepth)
            raise(Errc::UndecidableDepth, "merge depth exceeds the planning cap");

        // Tail state once both streams are pure runs.
        auto rdm = detail::rearranged_prefix(d, merge_depth_, /*allow_zero_pad=*/true);
        Td_ = d.tail.vanishes() ? 0.0 : d.tail.value_at(rdm.tail_consumed + 1);
        Ts_ = s.tail.vanishes() ? 0.0
                                : s.tail.value_at(merge_depth_ - s.head_size() + 1);
        rd_ = d.tail.r;
        rs_ = s.tail.r;

        // Push the horizon past any increment sign change.
        if (Ts_ > 0.0 && Td_ > 0.0 && rs_ != rd_) {
            double x = std::log(Td_ / Ts_) / std::log(rs_ / rd_);
            if (std::isfinite(x) && x > 0.0) {
                if (x > static_cast<double>(kMaxPlanDepth))
                    raise(Errc::UndecidableDepth, "tail crossover beyond the planning horizon");
                merge_depth_ += static_cast<std::size_t>(x) + 8;
            }
        }
        ensure(merge_depth_ + 2);
        limit_ = s.total_sum_real() - d.total_sum_real();
    }

    double delta(std::size_t n) {
        ensure(n);
        return delta_[n - 1];
    }
    double dstar(std::size_t n) {
        ensure(n);
        return dstar_[n - 1];
    }
    std::size_t dorigin(std::size_t n) {
        ensure(n);
        return dorigin_[n - 1];
    }
    double sval(std::size_t n) {
        ensure(n);
        return svals_[n - 1];
    }
    double limit() const { return limit_; }
    std::size_t merge_depth() const { return merge_depth_; }
    double Ts() const { return Ts_; }
    double Td() const { return Td_; }
    double rs() const { return rs_; }
    double rd() const { return rd_; }
    double scale() const { return std::max(1.0, s_.total_sum_real()); }

private:
    void ensure(std::size_t n) {
        if (n <= delta_.size()) return;
        if (n > kMaxPlanDepth)
            raise(Errc::UndecidableDepth, "plan scan exceeded the depth cap");
        std::size_t want = std::max<std::size_t>(n, delta_.size() * 2 + 16);
        want = std::min(want, kMaxPlanDepth);
        auto rd = detail::rearranged_prefix(d_, want, /*allow_zero_pad=*/true);
        dstar_ = std::move(rd.values);
        dorigin_ = std::move(rd.origin);
        svals_.resize(want);
        for (std::size_t i = 0; i < want; ++i) svals_[i] = s_.at(i + 1).real();
        delta_.resize(want);
        double acc = 0.0;
        for (std::size_t i = 0; i < want; ++i) {
            acc += svals_[i] - dstar_[i];
            delta_[i] = acc;
        }
    }

    SequenceSpec d_, s_;
    std::vector<double> dstar_, svals_, delta_;
    std::vector<std::size_t> dorigin_;
    std::size_t merge_depth_ = 0;
    double limit_ = 0.0;
    double Ts_ = 0.0, Td_ = 0.0, rs_ = 0.0, rd_ = 0.0;
};

CaseTag decide_case(PairAnalysis& pa, double tol) {
    if (std::abs(pa.limit()) <= tol * pa.scale()) return CaseTag::Case1_Majorized;
    const double Ts = pa.Ts(), Td = pa.Td(), rs = pa.rs(), rd = pa.rd();
    if (Ts == Td && (Ts == 0.0 || rs == rd)) return CaseTag::Case3_TailDominated_EventuallyConstant;
    bool increasing;
    if (Td == 0.0) increasing = true;
    else if (Ts == 0.0) increasing = false;
    else if (rs != rd) increasing = rs > rd;
    else increasing = Ts > Td;
    return increasing ? CaseTag::Case2_InfimumNotAttained : CaseTag::Case3_TailDominated_Split;
}

void check_block(const BlockDescriptor& b, double tol) {
    if (b.d_part.size() != b.s_part.size())
        raise(Errc::DimensionMismatch, "block d/s parts differ in length");
    if (b.d_part.size() > kMaxRealizedBlock ||
        (b.kind == BlockKind::Thompson && b.d_part.size() > kMaxThompsonBlock))
        raise(Errc::UndecidableDepth, "planned block exceeds the supported size");
    switch (b.kind) {
        case BlockKind::Thompson:
            if (!detail::thompson_feasible(b.d_part, b.s_part, std::max(tol, 1e-9))) {
                std::ostringstream msg;
                msg << "planned Thompson block violates its precondition; d = [";
                for (double v : b.d_part) msg << v << " ";
                msg << "], s = [";
                for (double v : b.s_part) msg << v << " ";
                msg << "]";
                raise(Errc::Infeasible, msg.str());
            }
            break;
        case BlockKind::SchurHorn: {
            double ds = 0.0, ss = 0.0, run = 0.0;
            for (std::size_t i = 0; i < b.d_part.size(); ++i) {
                ds += b.d_part[i];
                ss += b.s_part[i];
                run = std::max(run, ds - ss);
            }
            if (run > tol || std::abs(ds - ss) > std::max(tol, 1e-9))
                raise(Errc::Infeasible, "planned Schur-Horn block violates majorization");
            break;
        }
        case BlockKind::Diagonal:
            if (b.d_part != b.s_part)
                raise(Errc::Infeasible, "diagonal block must carry identical parts");
            break;
    }
}

} // namespace

CasePlan classify_case(const SequenceSpec& d, const SequenceSpec& s, std::size_t K, double tol) {
    MajorizationReport weak = weak_majorizes(d, s, std::max<std::size_t>(K, 4), tol);
    if (!weak.verdict)
        raise(Errc::NotMajorized, "classify_case requires weak majorization");
    PairAnalysis pa(d, s, K, tol);
    CasePlan plan;
    plan.tag = decide_case(pa, tol);
    return plan;
}

CasePlan case2_partition(const SequenceSpec& d, const SequenceSpec& s, std::size_t J, double tol) {
    CasePlan probe = classify_case(d, s, 4, tol);
    if (probe.tag != CaseTag::Case2_InfimumNotAttained)
        raise(Errc::CaseMismatch, "case2_partition requires a Case-2 pair");
    PairAnalysis pa(d, s, 4, tol);

    CasePlan plan;
    plan.tag = CaseTag::Case2_InfimumNotAttained;
    if (J == 0) return plan;

    // k_0 = 0 and k_{j+1} = the largest argmin of the gaps past k_j; one
    // extra index is needed because m_j's bound looks into the next window.
    std::vector<std::size_t> ks{0};
    for (std::size_t j = 1; j <= J + 1; ++j) {
        const std::size_t kprev = ks.back();
        const std::size_t scan_end = std::max(kprev + 1, pa.merge_depth() + 1);
        double inf = std::numeric_limits<double>::infinity();
        for (std::size_t n = kprev + 1; n <= scan_end; ++n) inf = std::min(inf, pa.delta(n));
        std::size_t kj = kprev + 1;
        for (std::size_t n = kprev + 1; n <= scan_end; ++n)
            if (pa.delta(n) == inf) kj = n;  // largest attaining index
        ks.push_back(kj);
    }

    // m_j: smallest distinct index >= k_j + j below both the next-window
    // minimum min{delta_n - delta_{k_j}} and the block's own increment.
    std::vector<std::size_t> ms;
    std::set<std::size_t> used_m;
    for (std::size_t j = 1; j <= J; ++j) {
        const double own = pa.delta(ks[j]) - (ks[j - 1] > 0 ? pa.delta(ks[j - 1]) : 0.0);
        const double next_window = pa.delta(ks[j + 1]) - pa.delta(ks[j]);
        const double bound = std::min(own, next_window);
        std::size_t m = ks[j] + j;
        while (!(pa.dstar(m) < bound) || used_m.count(m)) {
            if (++m > kMaxPlanDepth)
                raise(Errc::UndecidableDepth, "no admissible m_j within the depth cap");
        }
        ms.push_back(m);
        used_m.insert(m);
    }

    std::set<std::size_t> taken(used_m);
    std::size_t cursor = 1;
    for (std::size_t j = 1; j <= J; ++j) {
        const std::size_t count = ks[j] - ks[j - 1];
        if (count + 1 > kMaxThompsonBlock)
            raise(Errc::UndecidableDepth, "case-2 chunk exceeds the supported block size");
        std::vector<std::size_t> members;
        for (std::size_t c = 0; c < count; ++c) {
            while (taken.count(cursor)) ++cursor;
            members.push_back(cursor);
            taken.insert(cursor);
        }
        members.push_back(ms[j - 1]);
        std::sort(members.begin(), members.end());

        BlockDescriptor b;
        b.kind = BlockKind::Thompson;
        for (std::size_t idx : members) {
            b.d_part.push_back(pa.dstar(idx));
            b.d_indices.push_back(pa.dorigin(idx));
        }
        for (std::size_t n = ks[j - 1] + 1; n <= ks[j]; ++n) {
            b.s_part.push_back(pa.sval(n));
            b.s_indices.push_back(n);
        }
        b.s_part.push_back(0.0);
        b.s_indices.push_back(0);
        check_block(b, tol);
        plan.blocks.push_back(std::move(b));
    }
    return plan;
}

CasePlan case3_split(const SequenceSpec& d, const SequenceSpec& s, double tol) {
    CasePlan probe = classify_case(d, s, 4, tol);
    if (probe.tag != CaseTag::Case3_TailDominated_EventuallyConstant &&
        probe.tag != CaseTag::Case3_TailDominated_Split)
        raise(Errc::CaseMismatch, "case3_split requires a Case-3 pair");
    PairAnalysis pa(d, s, 4, tol);
    const double L = pa.limit();

    CasePlan plan;
    plan.tag = probe.tag;

    if (probe.tag == CaseTag::Case3_TailDominated_EventuallyConstant) {
        // Terms become identical after some index; cut just past the last
        // disagreement and carry a diagonal block for the shared remainder.
        std::size_t last_diff = 1;
        for (std::size_t n = 1; n <= pa.merge_depth() + 1; ++n)
            if (pa.sval(n) != pa.dstar(n)) last_diff = n;
        const std::size_t head_len = last_diff + 1;
        const std::size_t tail_len = static_cast<std::size_t>(std::max<std::ptrdiff_t>(
            4, static_cast<std::ptrdiff_t>(pa.merge_depth()) + 2 -
                   static_cast<std::ptrdiff_t>(head_len)));
        if (head_len > kMaxThompsonBlock || tail_len > kMaxRealizedBlock)
            raise(Errc::UndecidableDepth, "case-3 coverage exceeds the supported block size");

        BlockDescriptor headb;
        headb.kind = BlockKind::Thompson;
        for (std::size_t n = 1; n <= head_len; ++n) {
            headb.d_part.push_back(pa.dstar(n));
            headb.d_indices.push_back(pa.dorigin(n));
            headb.s_part.push_back(pa.sval(n));
            headb.s_indices.push_back(n);
        }
        check_block(headb, tol);
        plan.blocks.push_back(std::move(headb));

        BlockDescriptor tailb;
        tailb.kind = BlockKind::Diagonal;
        for (std::size_t n = head_len + 1; n <= head_len + tail_len; ++n) {
            tailb.d_part.push_back(pa.sval(n));
            tailb.d_indices.push_back(pa.dorigin(n));
            tailb.s_part.push_back(pa.sval(n));
            tailb.s_indices.push_back(n);
        }
        check_block(tailb, tol);
        plan.blocks.push_back(std::move(tailb));
        return plan;
    }

    // Split subcase. k: the gap sequence stays at or above its limit from
    // k-1 on, and the diagonal strictly drops entering position k.
    const double slack = 1e-12 * pa.scale();
    std::size_t last_below = 0;
    for (std::size_t n = 1; n <= pa.merge_depth() + 1; ++n)
        if (pa.delta(n) < L - slack) last_below = n;
    std::size_t k = std::max<std::size_t>(last_below + 2, 2);
    while (!(pa.dstar(k - 1) > pa.dstar(k))) {
        if (++k > kMaxPlanDepth)
            raise(Errc::UndecidableDepth, "no strict diagonal drop within the depth cap");
    }

    const double cap = std::min(pa.dstar(k - 1) - pa.dstar(k), L);
    std::size_t kp = k + 1;
    while (!(pa.delta(kp) - L <= cap && pa.delta(kp - 1) >= pa.delta(kp))) {
        if (++kp > kMaxPlanDepth)
            raise(Errc::UndecidableDepth, "no admissible k' within the depth cap");
    }
    const double a = pa.dstar(k) + pa.delta(kp) - L;

    // Cover far enough that the truncation boundary sits in the eventually
    // monotone region (the merge block's final inequality needs s_n <= d_n).
    const std::size_t T = static_cast<std::size_t>(std::max<std::ptrdiff_t>(
        4, static_cast<std::ptrdiff_t>(pa.merge_depth()) + 2 - static_cast<std::ptrdiff_t>(kp)));
    if (kp > kMaxThompsonBlock || T + 1 > kMaxThompsonBlock)
        raise(Errc::UndecidableDepth, "case-3 split exceeds the supported block size");

    BlockDescriptor host;
    host.kind = BlockKind::Thompson;
    for (std::size_t n = 1; n <= kp; ++n) {
        host.d_part.push_back(n == k ? a : pa.dstar(n));
        host.d_indices.push_back(n == k ? 0 : pa.dorigin(n));
        host.s_part.push_back(pa.sval(n));
        host.s_indices.push_back(n);
    }
    check_block(host, tol);

    BlockDescriptor tailb;
    tailb.kind = BlockKind::Diagonal;
    for (std::size_t n = kp + 1; n <= kp + T; ++n) {
        tailb.d_part.push_back(pa.sval(n));
        tailb.d_indices.push_back(0);
        tailb.s_part.push_back(pa.sval(n));
        tailb.s_indices.push_back(n);
    }
    check_block(tailb, tol);

    BlockDescriptor merge;
    merge.kind = BlockKind::Thompson;
    merge.d_part.push_back(pa.dstar(k));
    merge.d_indices.push_back(pa.dorigin(k));
    merge.s_part.push_back(a);
    merge.s_indices.push_back(0);
    for (std::size_t n = kp + 1; n <= kp + T; ++n) {
        merge.d_part.push_back(pa.dstar(n));
        merge.d_indices.push_back(pa.dorigin(n));
        merge.s_part.push_back(pa.sval(n));
        merge.s_indices.push_back(n);
    }
    check_block(merge, tol);

    plan.blocks.push_back(std::move(host));
    plan.blocks.push_back(std::move(tailb));
    plan.blocks.push_back(std::move(merge));
    plan.splice_points.push_back(SplicePoint{0, k - 1, 1, 2});
    return plan;
}

CasePlan case1_truncation(const SequenceSpec& d, const SequenceSpec& s, std::size_t K,
                          double tol) {
    CasePlan probe = classify_case(d, s, K, tol);
    if (probe.tag != CaseTag::Case1_Majorized)
        raise(Errc::CaseMismatch, "case1_truncation requires a plainly majorized pair");
    PairAnalysis pa(d, s, K, tol);

    CasePlan plan;
    plan.tag = CaseTag::Case1_Majorized;
    BlockDescriptor b;
    b.kind = BlockKind::SchurHorn;
    for (std::size_t n = 1; n <= K; ++n) {
        b.d_part.push_back(pa.dstar(n));
        b.d_indices.push_back(pa.dorigin(n));
        b.s_part.push_back(pa.sval(n));
        b.s_indices.push_back(n);
    }
    check_block(b, tol);
    plan.blocks.push_back(std::move(b));
    return plan;
}

namespace {

bool is_merge_block(const CasePlan& plan, std::size_t idx) {
    for (const SplicePoint& sp : plan.splice_points)
        if (sp.merge_block == idx) return true;
    return false;
}

DenseMatrix build_block(const BlockDescriptor& b, double tol) {
    switch (b.kind) {
        case BlockKind::Thompson: {
            std::vector<Complex> dz(b.d_part.begin(), b.d_part.end());
            return thompson_construct(dz, b.s_part, std::max(tol, 1e-9));
        }
        case BlockKind::SchurHorn:
            return schur_horn(b.d_part, b.s_part, std::max(tol, 1e-9));
        case BlockKind::Diagonal:
            return DenseMatrix::diagonal(b.d_part);
    }
    raise(Errc::CaseMismatch, "unknown block kind");
}

} // namespace

DenseMatrix realize_truncation(const CasePlan& plan, double tol) {
    for (const BlockDescriptor& b : plan.blocks) check_block(b, tol);

    std::vector<std::size_t> offsets(plan.blocks.size(), 0);
    DenseMatrix full(0, 0, FieldTag::Real);
    for (std::size_t i = 0; i < plan.blocks.size(); ++i) {
        if (is_merge_block(plan, i)) continue;
        offsets[i] = full.rows();
        full = direct_sum(full, build_block(plan.blocks[i], tol));
    }

    for (const SplicePoint& sp : plan.splice_points) {
        const BlockDescriptor& mb = plan.blocks[sp.merge_block];
        DenseMatrix B = build_block(mb, tol);
        SvdResult svd = jacobi_svd(B);

        // Coordinates of the compression: the host slot plus the tail block.
        std::vector<std::size_t> coords{offsets[sp.host_block] + sp.slot};
        const std::size_t tail_off = offsets[sp.tail_block];
        for (std::size_t i = 0; i < plan.blocks[sp.tail_block].d_part.size(); ++i)
            coords.push_back(tail_off + i);
        if (coords.size() != B.rows())
            raise(Errc::DimensionMismatch, "splice block size does not match its compression");

        // Two-sided rotation supported on the compression: svd.U (x) C (x)
        // svd.V* reproduces the merge witness while singular values of the
        // whole matrix are untouched.
        const std::size_t n = full.rows();
        DenseMatrix L = DenseMatrix::identity(n, FieldTag::Complex);
        DenseMatrix R = DenseMatrix::identity(n, FieldTag::Complex);
        for (std::size_t i = 0; i < coords.size(); ++i) {
            for (std::size_t j = 0; j < coords.size(); ++j) {
                L(coords[i], coords[j]) = svd.U(i, j);
                R(coords[i], coords[j]) = std::conj(svd.V(j, i));
            }
        }
        full = multiply(multiply(L, full), R);
        for (std::size_t i = 0; i < coords.size(); ++i)
            full(coords[i], coords[i]) = B(i, i);
        full.normalize_field();
    }
    return full;
}

std::vector<double> plan_expected_diagonal(const CasePlan& plan) {
    std::vector<std::vector<double>> parts;
    std::vector<std::size_t> offsets(plan.blocks.size(), 0);
    std::size_t total = 0;
    for (std::size_t i = 0; i < plan.blocks.size(); ++i) {
        if (is_merge_block(plan, i)) continue;
        offsets[i] = total;
        total += plan.blocks[i].d_part.size();
        parts.push_back(plan.blocks[i].d_part);
    }
    std::vector<double> diag;
    for (const auto& p : parts) diag.insert(diag.end(), p.begin(), p.end());
    for (const SplicePoint& sp : plan.splice_points) {
        const BlockDescriptor& mb = plan.blocks[sp.merge_block];
        diag[offsets[sp.host_block] + sp.slot] = mb.d_part[0];
        for (std::size_t i = 1; i < mb.d_part.size(); ++i)
            diag[offsets[sp.tail_block] + i - 1] = mb.d_part[i];
    }
    return diag;
}

std::vector<double> plan_expected_singulars(const CasePlan& plan) {
    std::vector<double> sv;
    for (std::size_t i = 0; i < plan.blocks.size(); ++i) {
        if (is_merge_block(plan, i)) continue;
        sv.insert(sv.end(), plan.blocks[i].s_part.begin(), plan.blocks[i].s_part.end());
    }
    return sv;
}

} // namespace specdiag
