#include "specdiag/construct_finite.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "specdiag/majorization.hpp"
#include "specdiag/verify.hpp"

namespace specdiag {

namespace {

double vec_sum(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0);
}

void force_diagonal(DenseMatrix& A, const std::vector<Complex>& d) {
    for (std::size_t i = 0; i < d.size(); ++i) A(i, i) = d[i];
    A.normalize_field();
}

void force_diagonal(DenseMatrix& A, const std::vector<double>& d) {
    for (std::size_t i = 0; i < d.size(); ++i) A(i, i) = Complex(d[i], 0.0);
    A.normalize_field();
}

} // namespace

DenseMatrix solve_2x2(double d1, double d2, double s1, double s2, double tol) {
    if (!(s1 >= s2 && s2 >= -tol))
        raise(Errc::Infeasible, "solve_2x2: singular values must satisfy s1 >= s2 >= 0");
    if (d1 < -tol || d2 < -tol)
        raise(Errc::Infeasible, "solve_2x2: diagonal entries must be nonnegative");
    s2 = std::max(s2, 0.0);
    const double x = std::max(d1, d2), y = std::min(d1, d2);
    const double scale = std::max(1.0, s1);
    if (x > s1 + tol * scale)
        raise(Errc::Infeasible, "solve_2x2: max diagonal exceeds s1");
    if (x + y > s1 + s2 + tol * scale)
        raise(Errc::Infeasible, "solve_2x2: diagonal sum exceeds s1 + s2");
    if (x - y > s1 - s2 + tol * scale)
        raise(Errc::Infeasible, "solve_2x2: diagonal spread exceeds s1 - s2");

    const double P = d1 * d2 - s1 * s2;
    const double T = s1 * s1 + s2 * s2 - d1 * d1 - d2 * d2;
    // Radicands below the rounding floor of T and P are genuine zeros of the
    // tight cases; snapping them keeps tight witnesses exactly rigid instead
    // of sqrt(eps)-asymmetric. The floor scales with s1^2, the magnitude the
    // radicand arithmetic actually carries.
    const double snap = 64.0 * 2.220446049250313e-16 * s1 * s1;
    double up = T + 2.0 * P;
    double vm = T - 2.0 * P;
    if (std::abs(up) <= snap) up = 0.0;
    if (std::abs(vm) <= snap) vm = 0.0;
    const double u = std::sqrt(std::max(up, 0.0));
    const double v = std::sqrt(std::max(vm, 0.0));

    DenseMatrix A(2, 2, FieldTag::Real);
    A(0, 0) = d1;
    A(0, 1) = (u + v) / 2.0;
    A(1, 0) = (u - v) / 2.0;
    A(1, 1) = d2;
    return A;
}

SchurHornResult schur_horn_with_factor(const std::vector<double>& d,
                                       const std::vector<double>& lam, double tol) {
    const std::size_t n = d.size();
    if (lam.size() != n)
        raise(Errc::DimensionMismatch, "schur_horn: diagonal and spectrum sizes differ");

    std::vector<double> ds(d), ls(lam);
    std::sort(ds.begin(), ds.end(), std::greater<>());
    std::sort(ls.begin(), ls.end(), std::greater<>());
    double scale = std::max(1.0, std::accumulate(ls.begin(), ls.end(), 0.0,
                                                 [](double a, double b) { return a + std::abs(b); }));
    double dsum = 0.0, lsum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        dsum += ds[k];
        lsum += ls[k];
        if (dsum > lsum + tol * scale) {
            std::ostringstream msg;
            msg << "schur_horn: prefix sum violated at k=" << (k + 1);
            raise(Errc::NotMajorized, msg.str());
        }
    }
    if (n > 0 && std::abs(dsum - lsum) > tol * scale)
        raise(Errc::NotMajorized, "schur_horn: total sums differ (k=N)");

    DenseMatrix A = DenseMatrix::diagonal(ls);
    DenseMatrix Q = DenseMatrix::identity(n);

    struct Active { std::size_t coord; double value; };
    std::vector<Active> active(n);
    for (std::size_t i = 0; i < n; ++i) active[i] = {i, ls[i]};

    // Targets smallest-first, remembering where each requested entry lands.
    std::vector<std::size_t> torder(n);
    std::iota(torder.begin(), torder.end(), std::size_t{0});
    std::stable_sort(torder.begin(), torder.end(),
                     [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
    std::vector<std::size_t> coord_of(n);

    auto rotate = [&](std::size_t xc, std::size_t yc, double c, double s) {
        for (std::size_t i = 0; i < n; ++i) {  // columns
            Complex ax = A(i, xc), ay = A(i, yc);
            A(i, xc) = c * ax + s * ay;
            A(i, yc) = -s * ax + c * ay;
        }
        for (std::size_t j = 0; j < n; ++j) {  // rows
            Complex ax = A(xc, j), ay = A(yc, j);
            A(xc, j) = c * ax + s * ay;
            A(yc, j) = -s * ax + c * ay;
        }
        for (std::size_t i = 0; i < n; ++i) {
            Complex qx = Q(i, xc), qy = Q(i, yc);
            Q(i, xc) = c * qx + s * qy;
            Q(i, yc) = -s * qx + c * qy;
        }
    };

    for (std::size_t step = 0; step + 1 < n; ++step) {
        const double target = d[torder[step]];
        // Last active index with value >= target; clamp into a valid bracket.
        std::size_t j = 0;
        for (std::size_t i = 0; i < active.size(); ++i)
            if (active[i].value >= target) j = i;
        if (j + 1 == active.size()) j = active.size() - 2;

        const Active x = active[j], y = active[j + 1];
        const double denom = x.value - y.value;
        double c2 = denom > 0.0 ? std::clamp((target - y.value) / denom, 0.0, 1.0) : 1.0;
        const double c = std::sqrt(c2), s = std::sqrt(1.0 - c2);
        rotate(x.coord, y.coord, c, s);

        coord_of[torder[step]] = x.coord;
        active[j + 1].value = x.value + y.value - target;
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(j));
    }
    if (n > 0) {
        coord_of[torder[n - 1]] = active[0].coord;
        if (std::abs(active[0].value - d[torder[n - 1]]) > std::max(tol, 1e-8) * scale)
            raise(Errc::NotMajorized, "schur_horn: residual eigenvalue misses the last target");
    }

    // Reorder coordinates so the diagonal appears in the requested order.
    DenseMatrix M(n, n, FieldTag::Real);
    DenseMatrix F(n, n, FieldTag::Real);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            M(i, j) = A(coord_of[i], coord_of[j]);
            F(i, j) = Q(i, coord_of[j]);
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            Complex avg = 0.5 * (M(i, j) + M(j, i));
            M(i, j) = avg;
            M(j, i) = avg;
        }
    force_diagonal(M, d);
    return SchurHornResult{std::move(M), std::move(F)};
}

DenseMatrix schur_horn(const std::vector<double>& d, const std::vector<double>& lam, double tol) {
    return schur_horn_with_factor(d, lam, tol).matrix;
}

PhaseReduction phase_reduce(const std::vector<Complex>& d) {
    PhaseReduction out;
    out.moduli.resize(d.size());
    std::vector<Complex> z(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        double m = std::abs(d[i]);
        out.moduli[i] = m;
        z[i] = m > 0.0 ? m / d[i] : Complex(1.0, 0.0);
    }
    out.phases = DenseMatrix::diagonal(z);
    return out;
}

namespace {

bool triple_feasible(double t, double dp, double sk, double sl, double tol, double scale) {
    const double x = std::max(t, dp), y = std::min(t, dp);
    return x <= sk + tol * scale && x + y <= sk + sl + tol * scale &&
           x - y <= sk - sl + tol * scale;
}

std::vector<double> insert_sorted_desc(const std::vector<double>& s, std::size_t k, std::size_t l,
                                       double t) {
    std::vector<double> out;
    out.reserve(s.size() - 1);
    bool placed = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i == k || i == l) continue;
        if (!placed && t >= s[i]) {
            out.push_back(t);
            placed = true;
        }
        out.push_back(s[i]);
    }
    if (!placed) out.push_back(t);
    return out;
}

// Splice a 2x2 block carrying (t, dp) vs (sk, sl) into the t-slot of the
// child's SVD; the child's diagonal survives and dp lands last.
DenseMatrix splice_block(const DenseMatrix& child, double t, double dp, double sk, double sl,
                         double tol) {
    const std::size_t n = child.rows();
    SvdResult svd = jacobi_svd(child);
    std::size_t slot = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (std::abs(svd.sigma[i] - t) < std::abs(svd.sigma[slot] - t)) slot = i;
    const double that = svd.sigma[slot];

    DenseMatrix B = solve_2x2(that, dp, sk, sl, std::max(tol, 1e-9));

    DenseMatrix mid(n + 1, n + 1, FieldTag::Real);
    for (std::size_t i = 0; i < n; ++i) mid(i, i) = svd.sigma[i];
    mid(slot, slot) = B(0, 0);  // equals `that`
    mid(slot, n) = B(0, 1);
    mid(n, slot) = B(1, 0);
    mid(n, n) = B(1, 1);

    DenseMatrix Ue = direct_sum(svd.U, DenseMatrix::identity(1));
    DenseMatrix Ve = direct_sum(svd.V, DenseMatrix::identity(1));
    DenseMatrix out = multiply(multiply(Ue, mid), adjoint(Ve));

    std::vector<Complex> diag = child.diagonal_entries();
    diag.push_back(Complex(dp, 0.0));
    force_diagonal(out, diag);
    return out;
}

DenseMatrix thompson_recurse(const std::vector<double>& m, std::vector<double> s, double tol,
                             int depth) {
    const std::size_t n = m.size();
    const double scale = std::max(1.0, s.empty() ? 0.0 : s.front());

    if (n == 0) return DenseMatrix(0, 0);
    if (n == 1) {
        DenseMatrix A(1, 1, FieldTag::Real);
        A(0, 0) = m[0];
        return A;
    }

    // Absorb rounding debt up front: lift the top singular value by the worst
    // deficiency so the level works on an exactly feasible problem. The lift
    // never exceeds the acceptance floor of the level above, far inside the
    // delivered-spectrum budget.
    {
        double gap = 0.0, min_gap = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            gap += s[k] - m[k];
            min_gap = std::min(min_gap, gap);
        }
        double dh = 0.0, sh = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            dh += m[i];
            sh += s[i];
        }
        double final_gap = (sh - s[n - 1]) - (dh - m[n - 1]);
        double lift = std::max(0.0, std::max(-min_gap, -final_gap));
        if (lift > 8.0 * std::max(tol, 1e-9) * scale)
            raise(Errc::Infeasible, "thompson_construct: infeasible beyond repairable rounding");
        if (lift > 0.0) s[0] += lift;
    }

    if (std::abs(vec_sum(m) - vec_sum(s)) <= tol * scale * static_cast<double>(n)) {
        // Tight sums force a positive witness; delegate to eigenvalue peeling.
        return schur_horn(m, s, 4.0 * tol * static_cast<double>(n));
    }
    if (n == 2) return solve_2x2(m[0], m[1], s[0], s[1], tol);

    for (int pass = 0; pass < 2; ++pass) {
        std::vector<std::size_t> peels;
        if (pass == 0) {
            peels = {n - 1, 0};
        } else {
            for (std::size_t i = 1; i + 1 < n; ++i) peels.push_back(i);
        }
        for (std::size_t peel : peels) {
            const double dp = m[peel];
            std::vector<double> rest;
            rest.reserve(n - 1);
            for (std::size_t i = 0; i < n; ++i)
                if (i != peel) rest.push_back(m[i]);

            for (std::size_t k = 0; k + 1 < n; ++k) {
                for (std::size_t l = k + 1; l < n; ++l) {
                    const double sk = s[k], sl = s[l];
                    const double tlo = std::max(0.0, dp - (sk - sl));
                    const double thi = std::min(sk + sl - dp, dp + (sk - sl));
                    if (thi < tlo - tol * scale) continue;

                    // Breakpoints of the piecewise-linear feasibility in t.
                    // Interior midpoints go first: they carry real margin, so
                    // tolerance debt cannot pile up down the recursion.
                    std::vector<double> pts{tlo, std::max(tlo, thi)};
                    for (double v : s)
                        if (v > tlo && v < thi) pts.push_back(v);
                    if (dp > tlo && dp < thi) pts.push_back(dp);
                    std::sort(pts.begin(), pts.end());
                    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
                    std::vector<double> cands;
                    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
                        cands.push_back(0.5 * (pts[i] + pts[i + 1]));
                    cands.insert(cands.end(), pts.begin(), pts.end());

                    // Acceptance floor at rounding scale only; inherited debt
                    // is erased by the per-level repair, so it cannot grow.
                    const double accept_tol = 1e-12 * scale * static_cast<double>(n);
                    for (double t : cands) {
                        if (!triple_feasible(t, dp, sk, sl, accept_tol, scale)) continue;
                        std::vector<double> schild = insert_sorted_desc(s, k, l, t);
                        if (!detail::thompson_feasible(rest, schild, accept_tol)) continue;
                        DenseMatrix child = thompson_recurse(rest, schild, tol, depth + 1);
                        DenseMatrix spliced = splice_block(child, t, dp, sk, sl, tol);
                        // Move the appended coordinate back to the peel slot.
                        std::vector<std::size_t> perm(n);
                        for (std::size_t i = 0; i < peel; ++i) perm[i] = i;
                        perm[peel] = n - 1;
                        for (std::size_t i = peel + 1; i < n; ++i) perm[i] = i - 1;
                        return permute_conjugate(spliced, perm);
                    }
                }
            }
        }
    }
    std::ostringstream msg;
    msg.precision(17);
    msg << "thompson_construct: no splice candidate at depth " << depth << " for N=" << n
        << " (peels {smallest, largest, interior} x all singular pairs x breakpoint grid); d = [";
    for (double v : m) msg << v << " ";
    msg << "], s = [";
    for (double v : s) msg << v << " ";
    msg << "]";
    raise(Errc::SearchExhausted, msg.str());
}

} // namespace

DenseMatrix thompson_construct(const std::vector<Complex>& d, const std::vector<double>& s,
                               double tol) {
    const std::size_t n = d.size();
    if (s.size() != n)
        raise(Errc::LengthMismatch, "thompson_construct: diagonal and spectrum sizes differ");
    for (double v : s)
        if (v < -tol) raise(Errc::Infeasible, "thompson_construct: negative singular value");

    MajorizationReport rep =
        thompson_majorizes(SequenceSpec::finite_complex(d),
                           SequenceSpec::finite(s), tol);
    if (!rep.verdict)
        raise(Errc::Infeasible, "thompson_construct: |d|* is not Thompson majorized by s");

    PhaseReduction pr = phase_reduce(d);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return pr.moduli[a] > pr.moduli[b];
    });
    std::vector<double> msorted(n), ssorted(s);
    for (std::size_t i = 0; i < n; ++i) msorted[i] = pr.moduli[order[i]];
    std::sort(ssorted.begin(), ssorted.end(), std::greater<>());
    for (double& v : ssorted) v = std::max(v, 0.0);

    DenseMatrix core = thompson_recurse(msorted, ssorted, tol, 0);

    std::vector<std::size_t> rank(n);
    for (std::size_t i = 0; i < n; ++i) rank[order[i]] = i;
    DenseMatrix arranged = permute_conjugate(core, rank);

    DenseMatrix out(n, n, FieldTag::Complex);
    for (std::size_t i = 0; i < n; ++i) {
        const Complex w = std::conj(pr.phases(i, i));
        for (std::size_t j = 0; j < n; ++j) out(i, j) = w * arranged(i, j);
    }
    force_diagonal(out, d);
    return out;
}

DenseMatrix apply_splice(const Splice& sp, double tol) {
    if (sp.block.rows() != 2 || sp.block.cols() != 2)
        raise(Errc::DimensionMismatch, "apply_splice: block must be 2x2");
    SvdResult svd = jacobi_svd(sp.host);
    if (sp.slot >= svd.sigma.size())
        raise(Errc::OutOfRange, "apply_splice: slot outside the singular spectrum");
    const double t = svd.sigma[sp.slot];
    if (std::abs(sp.block(0, 0).real() - t) > std::max(tol, 1e-8) * std::max(1.0, t) ||
        sp.block(0, 0).imag() != 0.0)
        raise(Errc::Infeasible, "apply_splice: block (1,1) entry must equal the slot value");

    const std::size_t n = sp.host.rows();
    DenseMatrix mid(n + 1, n + 1, sp.block.field());
    for (std::size_t i = 0; i < n; ++i) mid(i, i) = svd.sigma[i];
    mid(sp.slot, sp.slot) = sp.block(0, 0);
    mid(sp.slot, n) = sp.block(0, 1);
    mid(n, sp.slot) = sp.block(1, 0);
    mid(n, n) = sp.block(1, 1);
    DenseMatrix Ue = direct_sum(svd.U, DenseMatrix::identity(1));
    DenseMatrix Ve = direct_sum(svd.V, DenseMatrix::identity(1));
    return multiply(multiply(Ue, mid), adjoint(Ve));
}

DenseMatrix rank_one(const SequenceSpec& d, double s1, std::size_t K, double tol) {
    if (!(s1 > 0.0)) raise(Errc::OutOfRange, "rank_one: s1 must be positive");
    if (!d.is_nonnegative(tol)) raise(Errc::NegativeEntry, "rank_one: d must be nonnegative");
    for (std::size_t i = 1; i + 1 <= std::max<std::size_t>(K, d.head_size()); ++i) {
        if (d.at(i).real() < d.at(i + 1).real() - tol)
            raise(Errc::NotNonincreasing, "rank_one: d must be nonincreasing");
    }
    const double total = d.total_sum_real();
    if (total > s1 + tol * std::max(1.0, s1))
        raise(Errc::Infeasible, "rank_one: sum of d exceeds s1");

    std::vector<double> prefix(K);
    for (std::size_t i = 0; i < K; ++i) prefix[i] = std::max(d.at(i + 1).real(), 0.0);
    const double d1 = K > 0 ? prefix[0] : 0.0;
    const double T = vec_sum(prefix) - d1;

    DenseMatrix A;
    if (d1 <= 0.0) {
        // All-zero diagonal: s1 * e1 (x) e2 with two spare coordinates.
        A = DenseMatrix(K + 2, K + 2, FieldTag::Real);
        A(0, 1) = s1;
    } else if (T <= 0.0) {
        // Single positive entry: spare coordinates carry the slack.
        const double rem = std::sqrt(std::max(s1 - d1, 0.0));
        std::vector<double> v(K + 2, 0.0), w(K + 2, 0.0);
        v[0] = std::sqrt(d1);
        w[0] = std::sqrt(d1);
        v[K] = rem;
        w[K + 1] = rem;
        A = DenseMatrix(K + 2, K + 2, FieldTag::Real);
        for (std::size_t i = 0; i < K + 2; ++i)
            for (std::size_t j = 0; j < K + 2; ++j) A(i, j) = v[i] * w[j];
    } else {
        // At least two positive entries: tune alpha so ||v|| ||w|| = s1.
        const double q = std::max((s1 * s1 - d1 * d1 - T * T) / (d1 * T), 2.0);
        const double alpha = std::sqrt((q + std::sqrt(std::max(q * q - 4.0, 0.0))) / 2.0);
        std::vector<double> v(K), w(K);
        v[0] = alpha * std::sqrt(d1);
        w[0] = std::sqrt(d1) / alpha;
        for (std::size_t i = 1; i < K; ++i) v[i] = w[i] = std::sqrt(prefix[i]);
        A = DenseMatrix(K, K, FieldTag::Real);
        for (std::size_t i = 0; i < K; ++i)
            for (std::size_t j = 0; j < K; ++j) A(i, j) = v[i] * w[j];
    }
    for (std::size_t i = 0; i < K; ++i) A(i, i) = prefix[i];
    A.normalize_field();
    return A;
}

DenseMatrix projection_from_diagonal(const std::vector<double>& d, double tol) {
    const std::size_t n = d.size();
    double sum = 0.0;
    for (double v : d) {
        if (v < -tol || v > 1.0 + tol)
            raise(Errc::OutOfRange, "projection_from_diagonal: entries must lie in [0,1]");
        sum += v;
    }
    const double m = std::round(sum);
    if (std::abs(sum - m) > tol)
        raise(Errc::NotInteger, "projection_from_diagonal: sum of d must be an integer");

    std::vector<double> lam(n, 0.0);
    for (std::size_t i = 0; i < static_cast<std::size_t>(m); ++i) lam[i] = 1.0;
    DenseMatrix P = schur_horn(d, lam, std::max(tol, 1e-9));
    return P;
}

namespace {

// Reindex a Schur-Horn factor so Qr^T diag(raw_eigs) Qr has the prescribed
// diagonal, where raw_eigs is in caller coordinate order.
DenseMatrix factor_for_raw_order(const SchurHornResult& sh, const std::vector<double>& raw_eigs) {
    const std::size_t n = raw_eigs.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return raw_eigs[a] > raw_eigs[b]; });
    // order[k] = raw coordinate holding the k-th largest eigenvalue.
    DenseMatrix Qr(n, n, FieldTag::Real);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j) Qr(order[k], j) = sh.factor(k, j);
    return Qr;
}

} // namespace

UnitaryWitness unitary_from_diagonal(const SequenceSpec& d, double tol) {
    MajorizationReport cond = unitary_diagonal_check(d, tol);
    if (!cond.verdict)
        raise(Errc::Infeasible, "unitary_from_diagonal: the diagonal condition fails");

    const std::size_t n = d.head_size();
    std::vector<Complex> head = d.head;
    std::vector<double> hmod(n);
    std::vector<Complex> hphase(n);  // z_i with z_i d_i = |d_i|
    for (std::size_t i = 0; i < n; ++i) {
        hmod[i] = std::abs(head[i]);
        hphase[i] = hmod[i] > 0.0 ? hmod[i] / head[i] : Complex(1.0, 0.0);
    }

    if (d.tail.kind == TailKind::Zero) {
        // Infinite deficit sum: realize the symmetry 2P - I on an integer-sum
        // truncation (head plus just enough literal zeros).
        double msum = vec_sum(hmod);
        if (std::abs(msum - std::round(msum)) > tol)
            raise(Errc::UndecidableDepth,
                  "unitary_from_diagonal: head moduli sum is not an integer, no exact "
                  "finite truncation exists");
        std::size_t extra = (n + static_cast<std::size_t>(std::llround(msum))) % 2 == 0 ? 0 : 1;
        const std::size_t J = n + extra;
        std::vector<double> e(J, 0.5);
        for (std::size_t i = 0; i < n; ++i) e[i] = (hmod[i] + 1.0) / 2.0;
        DenseMatrix P = projection_from_diagonal(e, std::max(tol, 1e-9));
        DenseMatrix U(J, J, FieldTag::Real);
        for (std::size_t i = 0; i < J; ++i)
            for (std::size_t j = 0; j < J; ++j)
                U(i, j) = 2.0 * P(i, j) - (i == j ? 1.0 : 0.0);

        UnitaryWitness out;
        out.phases.assign(J, Complex(1.0, 0.0));
        for (std::size_t i = 0; i < n; ++i) out.phases[i] = hphase[i];
        DenseMatrix res(J, J, FieldTag::Complex);
        for (std::size_t i = 0; i < J; ++i) {
            Complex w = std::conj(out.phases[i]);
            for (std::size_t j = 0; j < J; ++j) res(i, j) = w * U(i, j);
        }
        std::vector<Complex> want(head);
        want.resize(J, Complex(0.0, 0.0));
        force_diagonal(res, want);
        out.matrix = std::move(res);
        out.covered = J;
        return out;
    }

    // Finite deficit sum: Ones tail, or Geometric read as 1-|d|.
    std::vector<double> mv(hmod);
    if (d.tail.kind == TailKind::Geometric && !d.tail.vanishes()) {
        double head_deficit = 0.0;
        for (double m : hmod) head_deficit += 1.0 - m;
        double inf_mod = 1.0 - d.tail.c;
        for (double m : hmod) inf_mod = std::min(inf_mod, m);
        const double total = head_deficit + d.tail.total_sum();
        const double slack = total - 2.0 * (1.0 - inf_mod);
        if (slack <= tol)
            raise(Errc::UndecidableDepth,
                  "unitary_from_diagonal: tight condition with a geometric tail has no "
                  "finite truncation");
        // Leave at most slack/2 of the deficit uncovered.
        std::size_t T = 1;
        while (d.tail.total_sum() - d.tail.prefix_sum(T) > slack / 2.0) ++T;
        for (std::size_t t = 1; t <= T; ++t) mv.push_back(1.0 - d.tail.value_at(t));
        hphase.resize(mv.size(), Complex(1.0, 0.0));
    }
    const std::size_t L = mv.size();
    for (double m : mv)
        if (m > 1.0 + tol) raise(Errc::OutOfRange, "unitary_from_diagonal: modulus above one");

    double S = 0.0;
    for (double m : mv) S += 1.0 - m;

    UnitaryWitness out;
    out.covered = L;
    out.phases.assign(L, Complex(1.0, 0.0));
    for (std::size_t i = 0; i < std::min(n, L); ++i) out.phases[i] = hphase[i];

    std::vector<Complex> want(L);
    for (std::size_t p = 0; p < L; ++p)
        want[p] = p < n ? head[p] : Complex(mv[p], 0.0);

    if (S == 0.0) {
        // Every modulus is exactly one: the diagonal itself is unitary.
        out.matrix = DenseMatrix::diagonal(want);
        return out;
    }

    // Nondecreasing arrangement of the covered moduli.
    std::vector<std::size_t> asc(L);
    std::iota(asc.begin(), asc.end(), std::size_t{0});
    std::stable_sort(asc.begin(), asc.end(),
                     [&](std::size_t a, std::size_t b) { return mv[a] < mv[b]; });
    std::vector<double> ms(L);
    std::vector<std::size_t> sortpos(L);
    for (std::size_t k = 0; k < L; ++k) {
        ms[k] = mv[asc[k]];
        sortpos[asc[k]] = k;
    }
    std::vector<double> pre(L + 1, 0.0);
    for (std::size_t k = 0; k < L; ++k) pre[k + 1] = pre[k] + (1.0 - ms[k]);

    std::size_t N = 1;
    while (N <= L && !(2.0 * pre[N] > S)) ++N;
    if (N > L) N = L;  // unreachable for S > 0; guard against rounding
    const double tail_def = S - pre[N];
    std::size_t M = 1;
    while (M < N && !(pre[M] > tail_def)) ++M;

    std::vector<double> s_nondec(N);
    for (std::size_t k = 0; k < N; ++k) {
        if (k + 1 < M) s_nondec[k] = ms[k];
        else if (k + 1 == M) s_nondec[k] = 1.0 + pre[M - 1] - tail_def;
        else s_nondec[k] = 1.0;
    }

    std::vector<double> s_star(s_nondec.rbegin(), s_nondec.rend());
    std::vector<double> dbar_star(N);
    for (std::size_t i = 0; i < N; ++i) dbar_star[i] = ms[N - 1 - i];

    DenseMatrix A_top = thompson_construct(
        std::vector<Complex>(dbar_star.begin(), dbar_star.end()), s_star, std::max(tol, 1e-9));
    SvdResult top = jacobi_svd(A_top);

    const std::size_t Jid = L > 2 * N ? L - 2 * N : 0;
    const std::size_t total_dim = 2 * N + Jid;
    const std::size_t Dsh = N + Jid;  // dimension of the complement block

    // Rotation-block orthogonal matrix in the f-basis. The exact s values
    // matter here: entries past M are exactly one, so their blocks carry no
    // rotation at all, which the tight-case rigidity depends on.
    DenseMatrix Uhat = DenseMatrix::identity(total_dim);
    for (std::size_t i = 0; i < N; ++i) {
        const double cs = std::min(s_star[i], 1.0);
        const double sn = std::sqrt(std::max((1.0 - cs) * (1.0 + cs), 0.0));
        Uhat(i, i) = cs;
        Uhat(i, N + i) = sn;
        Uhat(N + i, i) = -sn;
        Uhat(N + i, N + i) = cs;
    }
    DenseMatrix left = direct_sum(top.U, DenseMatrix::identity(N + Jid));
    DenseMatrix right = direct_sum(adjoint(top.V), DenseMatrix::identity(N + Jid));
    DenseMatrix Ut = multiply(multiply(left, Uhat), right);

    // Place the leftover deficits on the complement by Schur-Horn.
    std::vector<double> dhat(Dsh, 0.0);
    for (std::size_t k = N; k < L; ++k) dhat[k - N] = 1.0 - ms[k];
    std::vector<double> raw_eigs(Dsh, 0.0);
    for (std::size_t i = 0; i < N; ++i)
        raw_eigs[i] = 1.0 - std::min(s_star[i], 1.0);
    SchurHornResult sh = schur_horn_with_factor(dhat, raw_eigs, std::max(tol, 1e-9));
    DenseMatrix Qr = factor_for_raw_order(sh, raw_eigs);

    DenseMatrix conj_full = direct_sum(DenseMatrix::identity(N), Qr);
    DenseMatrix W = multiply(multiply(transpose(conj_full), Ut), conj_full);

    // Coordinates back to the requested order; surplus coordinates carry 1.
    std::vector<std::size_t> perm(total_dim);
    std::vector<bool> used(total_dim, false);
    for (std::size_t p = 0; p < L; ++p) {
        std::size_t sp = sortpos[p];
        std::size_t coord = sp < N ? (N - 1 - sp) : sp;
        perm[p] = coord;
        used[coord] = true;
    }
    std::size_t next = L;
    for (std::size_t cPos = 0; cPos < total_dim; ++cPos)
        if (!used[cPos]) perm[next++] = cPos;
    DenseMatrix arranged = permute_conjugate(W, perm);

    DenseMatrix res(total_dim, total_dim, FieldTag::Complex);
    for (std::size_t i = 0; i < total_dim; ++i) {
        Complex w = i < L ? std::conj(out.phases[i]) : Complex(1.0, 0.0);
        for (std::size_t j = 0; j < total_dim; ++j) res(i, j) = w * arranged(i, j);
    }
    std::vector<Complex> full_want(want);
    full_want.resize(total_dim, Complex(1.0, 0.0));
    force_diagonal(res, full_want);
    out.matrix = std::move(res);
    return out;
}

} // namespace specdiag
