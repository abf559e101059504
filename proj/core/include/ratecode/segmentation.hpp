#ifndef RATECODE_SEGMENTATION_HPP_
#define RATECODE_SEGMENTATION_HPP_

#include <vector>

#include "ratecode/types.hpp"

namespace ratecode {

/// Disjoint, non-empty index sets covering {0..m-1}. Groups and their members
/// are kept sorted ascending; group order follows each group's smallest
/// member.
struct Partition {
    std::vector<std::vector<Index>> groups;
    /// Optional cache of per-group data coding lengths (bits), aligned with
    /// groups. Populated by the segmentation routines; informational only.
    std::vector<double> per_group_length;

    /// Throws InvalidPartition unless the groups exactly cover {0..m-1}.
    void validate(Index m) const;
    /// Canonical form: members sorted, groups ordered by smallest member.
    void canonicalize();
    static Partition singletons(Index m);
    static Partition single_group(Index m);
    /// Builds groups from per-sample integer labels (one group per distinct
    /// label, ordered by label value).
    static Partition from_labels(const std::vector<int>& labels);
};

struct MergeRecord {
    Index group_a = 0;  // groups are named by their smallest member index
    Index group_b = 0;
    double length_delta = 0.0;  // change in total segmented length, in bits
};

struct SegmentationResult {
    Partition partition;
    double total_length = 0.0;
    double epsilon = 0.0;
    std::vector<MergeRecord> merge_trace;
};

/// Total bits to code W under partition p: per-group coding length (deviation
/// plus mean term) plus the entropy cost of coding group membership,
///   sum_i L(W_i) + |W_i| * (-log2(|W_i|/m)).
double segmented_coding_length(const Matrix& samples, const Partition& p,
                               const Distortion& eps);

/// Change in total segmented length if groups `a` and `b` of p were merged,
/// with the membership term re-evaluated for the merged size. Negative means
/// merging shortens the code. Groups are addressed by their position in
/// p.groups; a == b throws InvalidGroup.
double merge_gain(const Matrix& samples, const Partition& p, std::size_t a, std::size_t b,
                  const Distortion& eps);

/// Bottom-up pairwise steepest descent: start from singletons, repeatedly
/// merge the pair with the most negative gain, stop when no merge helps or
/// one group remains. Ties go to the pair with the lexicographically smallest
/// (min member, max member) names. Candidate gains for the merged group are
/// re-evaluated against all survivors each round; other table entries stay
/// valid because the objective is additive over groups.
SegmentationResult segment_greedy(const Matrix& samples, const Distortion& eps);

/// Global optimum by enumerating every set partition (restricted-growth-string
/// order; first minimum wins ties, which is the lexicographically smallest
/// canonical encoding). Throws TooManySamples when m exceeds max_m.
SegmentationResult segment_bruteforce(const Matrix& samples, const Distortion& eps,
                                      Index max_m = 12);

/// One grid point of the penalized distortion-selection objective.
struct DistortionGridPoint {
    double epsilon = 0.0;
    double objective = 0.0;     // L^s + m n log2(eps)
    double total_length = 0.0;  // L^s at this epsilon
    std::size_t num_groups = 0;
};

struct DistortionSelection {
    double epsilon_star = 0.0;
    std::size_t best_index = 0;
    std::vector<DistortionGridPoint> curve;
};

/// Runs segment_greedy at every grid epsilon and minimizes
/// L^s + m n log2(eps). The first grid point attaining the minimum wins.
DistortionSelection select_distortion(const Matrix& samples,
                                      const std::vector<Distortion>& eps_grid);

}  // namespace ratecode

#endif  // RATECODE_SEGMENTATION_HPP_
