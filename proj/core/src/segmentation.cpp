#include "ratecode/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>

#include "ratecode/coding.hpp"
#include "ratecode/parallel.hpp"

namespace ratecode {

namespace {

double membership_bits(Index group_size, Index m) {
    if (group_size == m) return 0.0;
    return -static_cast<double>(group_size) *
           std::log2(static_cast<double>(group_size) / static_cast<double>(m));
}

Matrix extract_columns(const Matrix& samples, const std::vector<Index>& members) {
    Matrix out(samples.rows(), static_cast<Index>(members.size()));
    for (std::size_t i = 0; i < members.size(); ++i)
        out.col(static_cast<Index>(i)) = samples.col(members[i]);
    return out;
}

// Running first/second moments of a group; merging groups is additive in
// (count, sum, scatter), which keeps candidate-merge evaluation O(n^3)
// instead of touching the member columns.
struct GroupStats {
    Index count = 0;
    Vector sum;
    Matrix scatter;

    static GroupStats of_column(const Matrix& samples, Index col) {
        GroupStats g;
        g.count = 1;
        g.sum = samples.col(col);
        g.scatter = g.sum * g.sum.transpose();
        return g;
    }
    GroupStats merged_with(const GroupStats& other) const {
        GroupStats g;
        g.count = count + other.count;
        g.sum = sum + other.sum;
        g.scatter = scatter + other.scatter;
        return g;
    }
    double coding_length(const Distortion& eps) const {
        GaussianMoments mom;
        mom.count = count;
        mom.mean = sum / static_cast<double>(count);
        mom.covariance =
            scatter / static_cast<double>(count) - mom.mean * mom.mean.transpose();
        return coding_length_from_moments(mom, eps);
    }
};

struct LiveGroup {
    std::vector<Index> members;  // sorted ascending; front() is the group name
    GroupStats stats;
    double length_bits = 0.0;
    bool alive = true;
};

}  // namespace

void Partition::validate(Index m) const {
    if (m < 1) throw InvalidPartition("partition target must have at least one sample");
    std::vector<char> seen(static_cast<std::size_t>(m), 0);
    Index covered = 0;
    for (const auto& group : groups) {
        if (group.empty()) throw InvalidPartition("partition contains an empty group");
        for (Index idx : group) {
            if (idx < 0 || idx >= m)
                throw InvalidPartition("partition index " + std::to_string(idx) +
                                       " outside [0, " + std::to_string(m) + ")");
            if (seen[static_cast<std::size_t>(idx)])
                throw InvalidPartition("partition index " + std::to_string(idx) +
                                       " appears in two groups");
            seen[static_cast<std::size_t>(idx)] = 1;
            ++covered;
        }
    }
    if (covered != m)
        throw InvalidPartition("partition covers " + std::to_string(covered) + " of " +
                               std::to_string(m) + " samples");
}

void Partition::canonicalize() {
    for (auto& group : groups) std::sort(group.begin(), group.end());
    std::vector<std::size_t> order(groups.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [this](std::size_t a, std::size_t b) {
        return groups[a].front() < groups[b].front();
    });
    std::vector<std::vector<Index>> sorted_groups;
    sorted_groups.reserve(groups.size());
    std::vector<double> sorted_lengths;
    const bool keep_cache = per_group_length.size() == groups.size();
    for (std::size_t i : order) {
        sorted_groups.push_back(std::move(groups[i]));
        if (keep_cache) sorted_lengths.push_back(per_group_length[i]);
    }
    groups = std::move(sorted_groups);
    per_group_length = std::move(sorted_lengths);
}

Partition Partition::singletons(Index m) {
    Partition p;
    p.groups.reserve(static_cast<std::size_t>(m));
    for (Index i = 0; i < m; ++i) p.groups.push_back({i});
    return p;
}

Partition Partition::single_group(Index m) {
    Partition p;
    p.groups.emplace_back();
    for (Index i = 0; i < m; ++i) p.groups.front().push_back(i);
    return p;
}

Partition Partition::from_labels(const std::vector<int>& labels) {
    std::vector<int> distinct(labels);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    Partition p;
    p.groups.resize(distinct.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto slot = static_cast<std::size_t>(
            std::lower_bound(distinct.begin(), distinct.end(), labels[i]) - distinct.begin());
        p.groups[slot].push_back(static_cast<Index>(i));
    }
    p.canonicalize();
    return p;
}

double segmented_coding_length(const Matrix& samples, const Partition& p,
                               const Distortion& eps) {
    const Index m = samples.cols();
    p.validate(m);
    double total = 0.0;
    for (const auto& group : p.groups) {
        const Matrix sub = extract_columns(samples, group);
        total += coding_length_with_mean(sub, eps);
        total += membership_bits(static_cast<Index>(group.size()), m);
    }
    return total;
}

double merge_gain(const Matrix& samples, const Partition& p, std::size_t a, std::size_t b,
                  const Distortion& eps) {
    const Index m = samples.cols();
    p.validate(m);
    if (a >= p.groups.size() || b >= p.groups.size())
        throw InvalidGroup("group id outside the partition");
    if (a == b) throw InvalidGroup("cannot merge a group with itself");

    const auto& ga = p.groups[a];
    const auto& gb = p.groups[b];
    std::vector<Index> merged;
    merged.reserve(ga.size() + gb.size());
    std::merge(ga.begin(), ga.end(), gb.begin(), gb.end(), std::back_inserter(merged));

    const double before = coding_length_with_mean(extract_columns(samples, ga), eps) +
                          membership_bits(static_cast<Index>(ga.size()), m) +
                          coding_length_with_mean(extract_columns(samples, gb), eps) +
                          membership_bits(static_cast<Index>(gb.size()), m);
    const double after = coding_length_with_mean(extract_columns(samples, merged), eps) +
                         membership_bits(static_cast<Index>(merged.size()), m);
    return after - before;
}

SegmentationResult segment_greedy(const Matrix& samples, const Distortion& eps) {
    const Index m = samples.cols();
    if (m < 1 || samples.rows() < 1)
        throw InvalidInput("sample matrix must have at least one row and one column");
    if (!samples.allFinite()) throw InvalidInput("sample matrix contains non-finite entries");

    std::vector<LiveGroup> groups(static_cast<std::size_t>(m));
    double total = 0.0;
    for (Index i = 0; i < m; ++i) {
        auto& g = groups[static_cast<std::size_t>(i)];
        g.members = {i};
        g.stats = GroupStats::of_column(samples, i);
        g.length_bits = g.stats.coding_length(eps);
        total += g.length_bits + membership_bits(1, m);
    }

    SegmentationResult result;
    result.epsilon = eps.value();

    // Pairwise gain table, slot-indexed; entry (a, b) with a < b.
    const auto slots = static_cast<std::size_t>(m);
    std::vector<double> gain(slots * slots, 0.0);
    auto gain_at = [&gain, slots](std::size_t a, std::size_t b) -> double& {
        return a < b ? gain[a * slots + b] : gain[b * slots + a];
    };
    auto eval_gain = [&groups, m, &eps](std::size_t a, std::size_t b) {
        const auto& ga = groups[a];
        const auto& gb = groups[b];
        const GroupStats merged = ga.stats.merged_with(gb.stats);
        const double after = merged.coding_length(eps) + membership_bits(merged.count, m);
        const double before = ga.length_bits + membership_bits(ga.stats.count, m) +
                              gb.length_bits + membership_bits(gb.stats.count, m);
        return after - before;
    };

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(slots * (slots - 1) / 2);
    for (std::size_t a = 0; a < slots; ++a)
        for (std::size_t b = a + 1; b < slots; ++b) pairs.emplace_back(a, b);
    parallel_for(pairs.size(), [&](std::size_t p) {
        gain_at(pairs[p].first, pairs[p].second) = eval_gain(pairs[p].first, pairs[p].second);
    });

    std::size_t alive = slots;
    while (alive > 1) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_a = slots, best_b = slots;
        Index best_lo = 0, best_hi = 0;
        for (std::size_t a = 0; a < slots; ++a) {
            if (!groups[a].alive) continue;
            for (std::size_t b = a + 1; b < slots; ++b) {
                if (!groups[b].alive) continue;
                const double g = gain_at(a, b);
                if (g > best) continue;
                const Index lo = std::min(groups[a].members.front(), groups[b].members.front());
                const Index hi = std::max(groups[a].members.front(), groups[b].members.front());
                if (g < best || lo < best_lo || (lo == best_lo && hi < best_hi)) {
                    best = g;
                    best_a = a;
                    best_b = b;
                    best_lo = lo;
                    best_hi = hi;
                }
            }
        }
        if (!(best < 0.0)) break;  // no merge shortens the code

        // Merge into the slot holding the smaller group name.
        std::size_t keep = best_a, drop = best_b;
        if (groups[drop].members.front() < groups[keep].members.front()) std::swap(keep, drop);
        result.merge_trace.push_back({best_lo, best_hi, best});

        auto& gk = groups[keep];
        auto& gd = groups[drop];
        std::vector<Index> merged_members;
        merged_members.reserve(gk.members.size() + gd.members.size());
        std::merge(gk.members.begin(), gk.members.end(), gd.members.begin(), gd.members.end(),
                   std::back_inserter(merged_members));
        gk.members = std::move(merged_members);
        gk.stats = gk.stats.merged_with(gd.stats);
        gk.length_bits = gk.stats.coding_length(eps);
        gd.alive = false;
        --alive;
        total += best;

        std::vector<std::size_t> others;
        others.reserve(alive - 1);
        for (std::size_t s = 0; s < slots; ++s)
            if (groups[s].alive && s != keep) others.push_back(s);
        parallel_for(others.size(),
                     [&](std::size_t i) { gain_at(keep, others[i]) = eval_gain(keep, others[i]); });
    }

    for (const auto& g : groups) {
        if (!g.alive) continue;
        result.partition.groups.push_back(g.members);
        result.partition.per_group_length.push_back(g.length_bits);
    }
    result.partition.canonicalize();
    result.total_length = total;
    return result;
}

SegmentationResult segment_bruteforce(const Matrix& samples, const Distortion& eps,
                                      Index max_m) {
    const Index m = samples.cols();
    if (m < 1 || samples.rows() < 1)
        throw InvalidInput("sample matrix must have at least one row and one column");
    if (m > max_m)
        throw TooManySamples("brute-force enumeration limited to " + std::to_string(max_m) +
                             " samples, got " + std::to_string(m));
    if (!samples.allFinite()) throw InvalidInput("sample matrix contains non-finite entries");

    // Lazily cached coding length per column subset (bitmask-indexed).
    std::vector<double> cache(static_cast<std::size_t>(1) << m,
                              std::numeric_limits<double>::quiet_NaN());
    auto subset_length = [&](std::uint32_t mask) {
        double& slot = cache[mask];
        if (std::isnan(slot)) {
            std::vector<Index> members;
            for (Index i = 0; i < m; ++i)
                if (mask & (1u << i)) members.push_back(i);
            slot = coding_length_with_mean(extract_columns(samples, members), eps);
        }
        return slot;
    };

    const auto mm = static_cast<std::size_t>(m);
    std::vector<int> code(mm, 0);  // restricted growth string
    std::vector<int> prefix_max(mm, 0);
    std::vector<std::uint32_t> block_mask(mm, 0);
    std::vector<Index> block_size(mm, 0);

    double best = std::numeric_limits<double>::infinity();
    std::vector<int> best_code(mm, 0);

    while (true) {
        const int k = prefix_max[mm - 1] + 1;
        std::fill(block_mask.begin(), block_mask.begin() + k, 0u);
        std::fill(block_size.begin(), block_size.begin() + k, 0);
        for (std::size_t i = 0; i < mm; ++i) {
            block_mask[static_cast<std::size_t>(code[i])] |= (1u << i);
            ++block_size[static_cast<std::size_t>(code[i])];
        }
        double total = 0.0;
        for (int j = 0; j < k; ++j)
            total += subset_length(block_mask[static_cast<std::size_t>(j)]) +
                     membership_bits(block_size[static_cast<std::size_t>(j)], m);
        if (total < best) {  // first minimum in RGS order wins ties
            best = total;
            best_code = code;
        }

        // Advance to the next restricted growth string.
        std::size_t i = mm - 1;
        while (i > 0 && code[i] > prefix_max[i - 1]) --i;
        if (i == 0) break;
        ++code[i];
        prefix_max[i] = std::max(prefix_max[i - 1], code[i]);
        for (std::size_t j = i + 1; j < mm; ++j) {
            code[j] = 0;
            prefix_max[j] = prefix_max[i];
        }
    }

    SegmentationResult result;
    result.epsilon = eps.value();
    result.total_length = best;
    const int k = 1 + *std::max_element(best_code.begin(), best_code.end());
    result.partition.groups.resize(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < mm; ++i)
        result.partition.groups[static_cast<std::size_t>(best_code[i])].push_back(
            static_cast<Index>(i));
    for (const auto& group : result.partition.groups) {
        std::uint32_t mask = 0;
        for (Index idx : group) mask |= (1u << idx);
        result.partition.per_group_length.push_back(subset_length(mask));
    }
    result.partition.canonicalize();
    return result;
}

DistortionSelection select_distortion(const Matrix& samples,
                                      const std::vector<Distortion>& eps_grid) {
    if (eps_grid.empty()) throw InvalidInput("distortion grid must not be empty");
    const double mn = static_cast<double>(samples.cols()) * static_cast<double>(samples.rows());

    DistortionSelection sel;
    sel.curve.reserve(eps_grid.size());
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < eps_grid.size(); ++i) {
        const SegmentationResult r = segment_greedy(samples, eps_grid[i]);
        DistortionGridPoint point;
        point.epsilon = eps_grid[i].value();
        point.total_length = r.total_length;
        point.objective = r.total_length + mn * std::log2(eps_grid[i].value());
        point.num_groups = r.partition.groups.size();
        sel.curve.push_back(point);
        if (point.objective < best) {
            best = point.objective;
            sel.best_index = i;
            sel.epsilon_star = point.epsilon;
        }
    }
    return sel;
}

}  // namespace ratecode
