#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "specdiag/errors.hpp"

namespace specdiag {

using Complex = std::complex<double>;

enum class TailKind { Zero, Ones, Geometric };

/// Analytic tail rule. A Geometric(c, r) tail contributes the values
/// c, c*r, c*r^2, ... at the positions following the head, so its i-th
/// value (1-based within the tail) is c * r^(i-1) and every partial sum
/// has a closed form. Zero and Ones tails are the constant rules.
struct Tail {
    TailKind kind = TailKind::Zero;
    double c = 0.0;
    double r = 0.0;

    static Tail zero() { return Tail{TailKind::Zero, 0.0, 0.0}; }
    static Tail ones() { return Tail{TailKind::Ones, 0.0, 0.0}; }
    static Tail geometric(double c, double r);

    /// i-th tail value, 1-based.
    double value_at(std::size_t i) const;
    /// Sum of the first n tail values (closed form).
    double prefix_sum(std::size_t n) const;
    /// Sum of all tail values; +infinity for a Ones tail.
    double total_sum() const;
    /// True when every tail value is zero (Zero kind, or Geometric with c=0).
    bool vanishes() const;
};

/// A real or complex sequence given as an explicit finite head plus a tail
/// rule evaluated at positions |head|+1, |head|+2, ...  A spec with a
/// vanishing tail represents exactly the finite sequence in its head.
struct SequenceSpec {
    std::vector<Complex> head;
    Tail tail;

    SequenceSpec() = default;
    SequenceSpec(std::vector<Complex> head_, Tail tail_);

    static SequenceSpec finite(const std::vector<double>& values);
    static SequenceSpec finite_complex(std::vector<Complex> values);
    static SequenceSpec with_tail(const std::vector<double>& values, Tail t);

    std::size_t head_size() const { return head.size(); }
    /// Value at 1-based global position i.
    Complex at(std::size_t i) const;
    bool has_infinite_support() const { return !tail.vanishes(); }
    bool is_real() const;
    /// All head entries real and >= -tol (tail rules are nonnegative by construction).
    bool is_nonnegative(double tol = 0.0) const;
    /// Head sum plus tail total; +infinity for a Ones tail.
    double total_sum_real() const;
};

/// Partial sums delta_n = sum_{j<=n} (s_j - d_j) together with the closed-form
/// limit/liminf when both tails admit one.
struct DeltaSequence {
    std::vector<double> values;
    std::optional<double> limit;
    std::optional<double> liminf;
};

/// K largest values of a nonnegative real spec, nonincreasing. When the
/// represented sequence has infinite support its zeros are skipped; a
/// finite-support spec is padded with zeros unless the caller forbids it.
std::vector<double> nonincreasing_rearrangement(const SequenceSpec& x, std::size_t K,
                                                bool allow_zero_pad = true);

/// First K entries of a complex spec reordered so moduli are nonincreasing.
/// Ties keep original index order. Zeros are skipped only for infinite support.
std::vector<Complex> modulus_rearrangement(const SequenceSpec& x, std::size_t K,
                                           bool allow_zero_pad = true);

/// delta_n = sum_{j<=n}(s_j - d_j) for n = 1..K on the represented sequences.
/// The limit (= liminf; the gap sequence is eventually monotone for Zero and
/// Geometric tails) is populated unless either spec has a Ones tail.
DeltaSequence delta_sequence(const SequenceSpec& d, const SequenceSpec& s, std::size_t K);

/// Multiset union. Head concatenation (left head, then right head) followed by
/// the unique non-vanishing tail; raises IncompatibleTails when both tails are
/// non-Zero.
SequenceSpec direct_sum(const SequenceSpec& a, const SequenceSpec& b);

namespace detail {
/// Merge a nonnegative spec into its K largest values, returning also how many
/// tail values were consumed. Used by rearrangements and by the tail
/// certification logic in the majorization module.
struct RearrangedPrefix {
    std::vector<double> values;        // nonincreasing
    std::vector<std::size_t> origin;   // 1-based global positions, 0 = zero padding
    std::size_t tail_consumed = 0;
};
RearrangedPrefix rearranged_prefix(const SequenceSpec& x, std::size_t K, bool allow_zero_pad);
} // namespace detail

} // namespace specdiag
