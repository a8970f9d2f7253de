#pragma once

#include <cstddef>
#include <vector>

#include "specdiag/dense_matrix.hpp"
#include "specdiag/seqspec.hpp"
#include "specdiag/tolerances.hpp"

namespace specdiag {

enum class CaseTag {
    Case1_Majorized,
    Case2_InfimumNotAttained,
    Case3_TailDominated_EventuallyConstant,
    Case3_TailDominated_Split,
};

enum class BlockKind { Thompson, SchurHorn, Diagonal };

/// One finite subproblem of a plan. Index provenance is 1-based into the
/// nonincreasing rearrangement of the input d (resp. into s); 0 marks a
/// synthetic value (an inserted zero singular value or interface value).
struct BlockDescriptor {
    BlockKind kind = BlockKind::Thompson;
    std::vector<double> d_part;
    std::vector<double> s_part;
    std::vector<std::size_t> d_indices;
    std::vector<std::size_t> s_indices;
};

/// Links a host block's diagonal slot and a diagonal tail block to a merge
/// witness: realization rotates the compression spanned by the slot and the
/// tail block into the merge block, swapping the interface value out of the
/// diagonal while preserving all singular values.
struct SplicePoint {
    std::size_t host_block = 0;
    std::size_t slot = 0;
    std::size_t tail_block = 0;
    std::size_t merge_block = 0;
};

struct CasePlan {
    CaseTag tag = CaseTag::Case1_Majorized;
    std::vector<BlockDescriptor> blocks;
    std::vector<SplicePoint> splice_points;
};

/// Classify the compact sufficiency case of a weakly majorized pair from the
/// closed-form limit of the gap sequence and its eventual monotonicity.
CasePlan classify_case(const SequenceSpec& d, const SequenceSpec& s, std::size_t K,
                       double tol = defaults::kVerdictTol);

/// Case-2 partition into J finite Thompson blocks d^j vs (s-chunk, 0): the
/// largest-argmin indices k_j, the smallest admissible distinct m_j, and the
/// order-preserving fill of the index sets N_j.
CasePlan case2_partition(const SequenceSpec& d, const SequenceSpec& s, std::size_t J,
                         double tol = defaults::kVerdictTol);

/// Case-3 plan: either a head Thompson block plus an identical diagonal tail,
/// or the k/k' split with interface value a and a merge splice.
CasePlan case3_split(const SequenceSpec& d, const SequenceSpec& s,
                     double tol = defaults::kVerdictTol);

/// Case-1 truncation: a single Schur-Horn block on the depth-K prefix. The
/// truncation must close the sums exactly (the infinite construction is used
/// as a black box and is out of scope).
CasePlan case1_truncation(const SequenceSpec& d, const SequenceSpec& s, std::size_t K,
                          double tol = defaults::kVerdictTol);

/// Realize a plan as one finite matrix: block-diagonal assembly of the
/// non-merge blocks followed by the splice rotations. The diagonal covers the
/// planned d-entries exactly; singular values match the covered s-entries.
DenseMatrix realize_truncation(const CasePlan& plan, double tol = defaults::kVerdictTol);

/// Diagonal (in realized coordinate order) and singular values a realization
/// of the plan must carry.
std::vector<double> plan_expected_diagonal(const CasePlan& plan);
std::vector<double> plan_expected_singulars(const CasePlan& plan);

} // namespace specdiag
