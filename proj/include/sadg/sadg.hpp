#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sadg/seadg.hpp"

namespace sadg {

/// A forward inter-agent dependency together with its switched counterpart:
/// forward (v_i^k -> v_j^l), reverse (v_j^{l+1} -> v_i^{k-1}).
struct SwitchablePair {
    AdgEdge forward;
    AdgEdge reverse;
    int group = -1;
};

/// Maximal run of pairs between one agent pair following the same-direction
/// pattern (k+n, l+n) or the opposing pattern (k+n, l-n); one binary
/// decision per group.
struct DependencyGroup {
    int id = -1;
    std::vector<int> pair_indices;
};

/// Assignment of one bit per group: 0 selects forward edges, 1 reverse.
struct BinaryVector {
    std::vector<std::uint8_t> bits;

    int size() const { return static_cast<int>(bits.size()); }
    friend bool operator==(const BinaryVector&, const BinaryVector&) = default;
};

/// Skeleton (intra chains + non-switchable inter edges) plus switchable
/// pairs partitioned into groups; a mapping from BinaryVector to SeAdg.
/// Live statuses are kept on the skeleton.
struct Sadg {
    SeAdg skeleton;
    std::vector<SwitchablePair> pairs;
    std::vector<DependencyGroup> groups;

    int group_count() const { return static_cast<int>(groups.size()); }
    BinaryVector zero() const { return {std::vector<std::uint8_t>(groups.size(), 0)}; }
};

/// Stage 1 as in compile_seadg; stage 2 emits a switchable pair when the
/// Lemma-1 reverse endpoints exist, a fixed edge otherwise, then groups the
/// pairs. Throws if the all-forward graph is cyclic.
Sadg compile_sadg(const MapfPlan& plan, const Roadmap& r);

/// Skeleton plus, per group, all forward (bit 0) or all reverse (bit 1)
/// edges. Statuses are carried over from the skeleton.
SeAdg realize(const Sadg& s, const BinaryVector& b);

/// Diagnostic realization with an independent bit per pair (ignores groups).
SeAdg realize_per_pair(const Sadg& s, const std::vector<std::uint8_t>& pair_bits);

/// Deterministic grouping pass: single linear scan per agent pair over pairs
/// sorted by tail index. Called by compile_sadg.
void group_dependencies(Sadg& s);

/// True iff every edge present under b_new but absent under b_old has a
/// staged head (the condition for changing the active selection).
bool switch_admissible(const Sadg& s, const BinaryVector& b_old, const BinaryVector& b_new);

/// Groups whose opposite-side realization would introduce an edge with a
/// non-staged head; these must keep their current bit.
std::vector<int> inadmissible_groups(const Sadg& s, const BinaryVector& b);

/// Forward edges solid, reverse candidates dotted.
std::string to_dot(const Sadg& s, const BinaryVector* active = nullptr);

}  // namespace sadg
