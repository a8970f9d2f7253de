#include "specdiag/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace specdiag {

namespace {

struct Rotation {
    double c = 1.0, s = 0.0;
    Complex phase = Complex(1.0, 0.0);  // applied to the q side
};

// Diagonalizing rotation for the Hermitian 2x2 [[app, g],[conj(g), aqq]].
Rotation make_rotation(double app, double aqq, Complex g) {
    Rotation rot;
    double mag = std::abs(g);
    if (mag == 0.0) return rot;
    rot.phase = std::conj(g) / mag;
    double tau = (aqq - app) / (2.0 * mag);
    double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    rot.c = 1.0 / std::sqrt(1.0 + t * t);
    rot.s = t * rot.c;
    return rot;
}

// Orthonormal completion of the columns of U flagged as undetermined: each
// missing column is the best standard basis vector orthogonalized (twice)
// against the columns already in place.
void complete_columns(DenseMatrix& U, const std::vector<bool>& fill) {
    const std::size_t m = U.rows();
    const std::size_t n = U.cols();
    std::vector<bool> built(n);
    for (std::size_t k = 0; k < n; ++k) built[k] = !fill[k];

    auto project_out = [&](std::vector<Complex>& v) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t k = 0; k < n; ++k) {
                if (!built[k]) continue;
                Complex dot(0.0, 0.0);
                for (std::size_t i = 0; i < m; ++i) dot += std::conj(U(i, k)) * v[i];
                for (std::size_t i = 0; i < m; ++i) v[i] -= dot * U(i, k);
            }
        }
        double nrm = 0.0;
        for (const Complex& z : v) nrm += std::norm(z);
        return std::sqrt(nrm);
    };

    for (std::size_t j = 0; j < n; ++j) {
        if (!fill[j]) continue;
        std::vector<Complex> best;
        double best_norm = -1.0;
        for (std::size_t cand = 0; cand < m; ++cand) {
            std::vector<Complex> v(m, Complex(0.0, 0.0));
            v[cand] = 1.0;
            double nrm = project_out(v);
            if (nrm > best_norm) {
                best_norm = nrm;
                best = std::move(v);
            }
            if (best_norm > 0.9) break;  // good enough, stop scanning
        }
        if (best_norm <= 0.0)
            raise(Errc::NoConvergence, "failed to complete an orthonormal basis");
        for (std::size_t i = 0; i < m; ++i) U(i, j) = best[i] / best_norm;
        built[j] = true;
    }
}

} // namespace

SvdResult jacobi_svd(const DenseMatrix& A, double tol) {
    if (A.rows() == 0 || A.cols() == 0) {
        return SvdResult{DenseMatrix::identity(A.rows()), {}, DenseMatrix::identity(A.cols())};
    }
    if (A.rows() < A.cols()) {
        SvdResult t = jacobi_svd(adjoint(A), tol);
        return SvdResult{t.V, std::move(t.sigma), t.U};
    }
    const std::size_t m = A.rows();
    const std::size_t n = A.cols();

    DenseMatrix B = A;
    DenseMatrix V = DenseMatrix::identity(n, A.field());

    // Columns this far below the initial scale are numerical kernel; pairs
    // among them never settle under the relative criterion, so freeze them.
    double max_col = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double nrm = 0.0;
        for (std::size_t i = 0; i < m; ++i) nrm += std::norm(B(i, j));
        max_col = std::max(max_col, nrm);
    }
    const double dead_col =
        max_col * std::pow(4.0 * static_cast<double>(m) * 2.220446049250313e-16, 2);

    const double thresh = std::max(tol, 1e-15);
    bool converged = false;
    for (int sweep = 0; sweep < defaults::kJacobiMaxSweeps && !converged; ++sweep) {
        converged = true;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double app = 0.0, aqq = 0.0;
                Complex apq(0.0, 0.0);
                for (std::size_t i = 0; i < m; ++i) {
                    app += std::norm(B(i, p));
                    aqq += std::norm(B(i, q));
                    apq += std::conj(B(i, p)) * B(i, q);
                }
                if (app <= dead_col || aqq <= dead_col) continue;
                if (std::abs(apq) <= thresh * std::sqrt(app * aqq)) continue;
                converged = false;
                Rotation rot = make_rotation(app, aqq, apq);
                for (std::size_t i = 0; i < m; ++i) {
                    Complex bp = B(i, p), bq = rot.phase * B(i, q);
                    B(i, p) = rot.c * bp - rot.s * bq;
                    B(i, q) = rot.s * bp + rot.c * bq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    Complex vp = V(i, p), vq = rot.phase * V(i, q);
                    V(i, p) = rot.c * vp - rot.s * vq;
                    V(i, q) = rot.s * vp + rot.c * vq;
                }
            }
        }
    }
    if (!converged) raise(Errc::NoConvergence, "Jacobi SVD did not converge");

    std::vector<double> sigma(n);
    for (std::size_t j = 0; j < n; ++j) {
        double nrm = 0.0;
        for (std::size_t i = 0; i < m; ++i) nrm += std::norm(B(i, j));
        sigma[j] = std::sqrt(nrm);
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return sigma[a] > sigma[b]; });

    double smax = sigma.empty() ? 0.0 : sigma[order[0]];
    double zero_cut = std::max(smax * static_cast<double>(m) * 1e-16, std::sqrt(dead_col));

    SvdResult out;
    out.sigma.resize(n);
    out.U = DenseMatrix(m, n, A.field());
    out.V = DenseMatrix(n, n, A.field());
    std::vector<bool> fill(n, false);
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t src = order[j];
        out.sigma[j] = sigma[src];
        for (std::size_t i = 0; i < n; ++i) out.V(i, j) = V(i, src);
        if (sigma[src] <= zero_cut) {
            fill[j] = true;
            out.sigma[j] = sigma[src];
            continue;
        }
        for (std::size_t i = 0; i < m; ++i) out.U(i, j) = B(i, src) / sigma[src];
    }
    complete_columns(out.U, fill);
    out.U.normalize_field();
    out.V.normalize_field();
    return out;
}

EigenResult symmetric_eigen(const DenseMatrix& A, double tol) {
    if (!A.square()) raise(Errc::DimensionMismatch, "symmetric_eigen requires a square matrix");
    const std::size_t n = A.rows();

    // Work on the selfadjoint part; callers pass (numerically) Hermitian input.
    DenseMatrix H(n, n, A.field());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) H(i, j) = 0.5 * (A(i, j) + std::conj(A(j, i)));

    DenseMatrix Q = DenseMatrix::identity(n, A.field());
    const double thresh = std::max(tol, 1e-15);
    double scale = frobenius_norm(H);
    if (scale == 0.0) scale = 1.0;

    bool converged = false;
    for (int sweep = 0; sweep < defaults::kJacobiMaxSweeps && !converged; ++sweep) {
        converged = true;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                Complex hpq = H(p, q);
                if (std::abs(hpq) <= thresh * scale) continue;
                converged = false;
                Rotation rot = make_rotation(H(p, p).real(), H(q, q).real(), hpq);
                // Columns, with the phase folded into column q.
                for (std::size_t i = 0; i < n; ++i) {
                    Complex xp = H(i, p), xq = rot.phase * H(i, q);
                    H(i, p) = rot.c * xp - rot.s * xq;
                    H(i, q) = rot.s * xp + rot.c * xq;
                }
                // Matching row update (conjugated phase).
                for (std::size_t j = 0; j < n; ++j) {
                    Complex xp = H(p, j), xq = std::conj(rot.phase) * H(q, j);
                    H(p, j) = rot.c * xp - rot.s * xq;
                    H(q, j) = rot.s * xp + rot.c * xq;
                }
                H(p, q) = Complex(0.0, 0.0);
                H(q, p) = Complex(0.0, 0.0);
                for (std::size_t i = 0; i < n; ++i) {
                    Complex qp = Q(i, p), qq = rot.phase * Q(i, q);
                    Q(i, p) = rot.c * qp - rot.s * qq;
                    Q(i, q) = rot.s * qp + rot.c * qq;
                }
            }
        }
    }
    if (!converged) raise(Errc::NoConvergence, "Jacobi eigensolver did not converge");

    std::vector<double> lam(n);
    for (std::size_t i = 0; i < n; ++i) lam[i] = H(i, i).real();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return lam[a] > lam[b]; });

    EigenResult out;
    out.eigenvalues.resize(n);
    out.Q = DenseMatrix(n, n, A.field());
    for (std::size_t j = 0; j < n; ++j) {
        out.eigenvalues[j] = lam[order[j]];
        for (std::size_t i = 0; i < n; ++i) out.Q(i, j) = Q(i, order[j]);
    }
    out.Q.normalize_field();
    return out;
}

VerificationReport verify_construction(const DenseMatrix& A, const std::vector<Complex>& d,
                                       const std::vector<double>& s,
                                       const VerifyTolerances& tol) {
    if (!A.square() || A.rows() != d.size() || d.size() != s.size())
        raise(Errc::DimensionMismatch, "verify_construction: matrix/diagonal/spectrum sizes differ");

    VerificationReport rep;
    for (std::size_t i = 0; i < d.size(); ++i)
        rep.diag_residual = std::max(rep.diag_residual, std::abs(A(i, i) - d[i]));

    std::vector<double> want(s);
    std::sort(want.begin(), want.end(), std::greater<>());
    SvdResult svd = jacobi_svd(A);
    double scale = want.empty() ? 1.0 : std::max(want.front(), 1e-30);
    for (std::size_t i = 0; i < want.size(); ++i)
        rep.sv_residual = std::max(rep.sv_residual, std::abs(svd.sigma[i] - want[i]) / scale);

    rep.pass = rep.diag_residual <= tol.diag && rep.sv_residual <= tol.sv_rel;
    for (const auto& [name, value] : rep.aux_residuals)
        rep.pass = rep.pass && value <= tol.aux;
    return rep;
}

double orthogonality_defect(const DenseMatrix& A) { return unitary_residual(A); }

namespace {

// Positivity defect of the selfadjoint part plus the skew mass, normalized.
double positivity_defect(const DenseMatrix& B) {
    double scale = std::max(1.0, frobenius_norm(B));
    double skew = selfadjoint_residual(B) / scale;
    EigenResult eig = symmetric_eigen(B);
    double neg = 0.0;
    for (double lam : eig.eigenvalues) neg = std::max(neg, -lam);
    return std::max(skew, neg / scale);
}

} // namespace

Certificate certify_trace_equality(const DenseMatrix& A, double tol) {
    if (!A.square()) raise(Errc::DimensionMismatch, "certify_trace_equality: square input required");
    Certificate cert;
    cert.theorem_tag = TheoremTag::TraceEquality_ThmPositive;

    Complex tr(0.0, 0.0);
    for (std::size_t i = 0; i < A.rows(); ++i) tr += A(i, i);
    SvdResult svd = jacobi_svd(A);
    double trace_norm = std::accumulate(svd.sigma.begin(), svd.sigma.end(), 0.0);

    double scale = std::max(1.0, trace_norm);
    cert.hypothesis_gap = trace_norm - std::abs(tr);
    if (cert.hypothesis_gap > tol * scale) {
        cert.verdict = CertVerdict::HypothesisFails;
        return cert;
    }
    Complex c = std::abs(tr) > 0.0 ? std::conj(tr) / std::abs(tr) : Complex(1.0, 0.0);
    DenseMatrix B(A.rows(), A.cols(), FieldTag::Complex);
    for (std::size_t i = 0; i < A.entries().size(); ++i) B.entries()[i] = c * A.entries()[i];
    B.normalize_field();

    cert.extracted = c;
    cert.conclusion_residual = positivity_defect(B);
    cert.verdict = cert.conclusion_residual <= std::max(tol, 1e-8)
                       ? CertVerdict::HypothesisHoldsConclusionVerified
                       : CertVerdict::Violation;
    return cert;
}

Certificate certify_tight_strong(const DenseMatrix& A, double tol) {
    if (!A.square()) raise(Errc::DimensionMismatch, "certify_tight_strong: square input required");
    Certificate cert;
    cert.theorem_tag = TheoremTag::TightStrong_UPositive;

    std::vector<Complex> diag = A.diagonal_entries();
    std::vector<double> mods(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) mods[i] = std::abs(diag[i]);
    std::sort(mods.begin(), mods.end(), std::greater<>());
    SvdResult svd = jacobi_svd(A);

    // Finite rendering of the liminf: the minimum prefix gap. Extending by
    // zeros, every gap beyond n = dim repeats the final one.
    double gap = 0.0, min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < mods.size(); ++k) {
        gap += svd.sigma[k] - mods[k];
        min_gap = std::min(min_gap, gap);
    }
    if (mods.empty()) min_gap = 0.0;

    double scale = std::max(1.0, svd.sigma.empty() ? 0.0 : svd.sigma.front());
    cert.hypothesis_gap = min_gap;
    if (min_gap > tol * scale) {
        cert.verdict = CertVerdict::HypothesisFails;
        return cert;
    }

    std::vector<Complex> phases(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) {
        double m = std::abs(diag[i]);
        phases[i] = m > 0.0 ? diag[i] / m : Complex(1.0, 0.0);  // phase 1 at zeros
    }
    DenseMatrix U = DenseMatrix::diagonal(phases);
    DenseMatrix B = multiply(adjoint(U), A);

    cert.extracted = U;
    cert.conclusion_residual = positivity_defect(B);
    cert.verdict = cert.conclusion_residual <= std::max(tol, 1e-8)
                       ? CertVerdict::HypothesisHoldsConclusionVerified
                       : CertVerdict::Violation;
    return cert;
}

Certificate certify_tight_unitary(const DenseMatrix& U, double tol) {
    if (!U.square()) raise(Errc::DimensionMismatch, "certify_tight_unitary: square input required");
    double udef = unitary_residual(U);
    if (udef > std::max(tol, 1e-8) * std::sqrt(static_cast<double>(U.rows())))
        raise(Errc::NotUnitary, "input is not unitary within tolerance");

    Certificate cert;
    cert.theorem_tag = TheoremTag::TightUnitary_Selfadjoint;

    std::vector<Complex> diag = U.diagonal_entries();
    std::size_t negatives = 0, positives = 0;
    double d1 = 0.0;
    for (const Complex& z : diag) {
        if (std::abs(z.imag()) > tol)
            raise(Errc::PatternMismatch, "diagonal must be real");
        if (z.real() < -tol) {
            ++negatives;
            d1 = -z.real();
        } else if (z.real() > tol) {
            ++positives;
        }
    }
    if (negatives != 1 || negatives + positives != diag.size())
        raise(Errc::PatternMismatch,
              "diagonal must have exactly one negative entry and positive remainder");

    double deficit = 0.0;  // identity part beyond the matrix contributes zero
    for (const Complex& z : diag) deficit += 1.0 - std::abs(z);
    cert.hypothesis_gap = std::abs(2.0 * (1.0 - d1) - deficit);
    if (cert.hypothesis_gap > tol * std::max(1.0, deficit)) {
        cert.verdict = CertVerdict::HypothesisFails;
        return cert;
    }
    cert.conclusion_residual = selfadjoint_residual(U) / std::max(1.0, frobenius_norm(U));
    cert.verdict = cert.conclusion_residual <= std::max(tol, 1e-8)
                       ? CertVerdict::HypothesisHoldsConclusionVerified
                       : CertVerdict::Violation;
    return cert;
}

Certificate check_2x2_lemmas(const DenseMatrix& A, double tol) {
    if (A.rows() != 2 || A.cols() != 2)
        raise(Errc::DimensionMismatch, "check_2x2_lemmas requires a 2x2 matrix");
    Complex z1 = A(0, 0), z2 = A(1, 1);
    if (std::abs(z1.imag()) > tol || std::abs(z2.imag()) > tol)
        raise(Errc::PatternMismatch, "lemma patterns need a real diagonal");
    double d1 = z1.real(), d2 = z2.real();

    SvdResult svd = jacobi_svd(A);
    double s1 = svd.sigma[0], s2 = svd.sigma[1];
    double scale = std::max(1.0, s1);

    Certificate cert;
    if (d1 >= -tol && d2 >= -tol) {
        cert.theorem_tag = TheoremTag::TwoByTwoTrace;
        cert.hypothesis_gap = (s1 + s2) - (d1 + d2);
        if (cert.hypothesis_gap < -tol * scale) {
            cert.verdict = CertVerdict::Violation;  // the inequality itself failed
            return cert;
        }
        if (cert.hypothesis_gap > tol * scale) {
            cert.verdict = CertVerdict::HypothesisFails;
            return cert;
        }
        cert.conclusion_residual = positivity_defect(A);
        cert.verdict = cert.conclusion_residual <= std::max(tol, 1e-8)
                           ? CertVerdict::HypothesisHoldsConclusionVerified
                           : CertVerdict::Violation;
        return cert;
    }
    if (d1 > tol && d2 < -tol && d1 >= -d2 - tol) {
        cert.theorem_tag = TheoremTag::TwoByTwoSelfadjoint;
        cert.hypothesis_gap = (s1 - s2) - (d1 - std::abs(d2));
        if (cert.hypothesis_gap < -tol * scale) {
            cert.verdict = CertVerdict::Violation;
            return cert;
        }
        if (cert.hypothesis_gap > tol * scale) {
            cert.verdict = CertVerdict::HypothesisFails;
            return cert;
        }
        cert.conclusion_residual = selfadjoint_residual(A) / std::max(1.0, frobenius_norm(A));
        cert.verdict = cert.conclusion_residual <= std::max(tol, 1e-8)
                           ? CertVerdict::HypothesisHoldsConclusionVerified
                           : CertVerdict::Violation;
        return cert;
    }
    raise(Errc::PatternMismatch, "diagonal matches neither 2x2 lemma pattern");
}

} // namespace specdiag
