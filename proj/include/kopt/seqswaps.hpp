#pragma once

#include <functional>
#include <optional>
#include <span>

#include "kopt/instance.hpp"
#include "kopt/patterns.hpp"

namespace kopt {

// Streams every sequential ell-swap whose added edges are chords, each exactly
// once: the certifying walk starts at the removed edge of minimal tour index,
// traversed left to right. Count is bounded by n * (2(d-2))^(ell-1).
void enumerate_sequential_swaps(const TourInstance& inst, int ell,
                                const std::function<void(const Swap&)>& fn);

struct CanonicalPattern {
    ConnectionPattern pattern;  // standalone, k = |removed|
    Embedding embedding;        // sorted removed indices
};

// Sequential connection pattern certified by the swap's closed alternating
// walk, via the left/right relabelling. Throws when the swap has no single
// closed alternating walk.
CanonicalPattern canonical_sequential_pattern(const Swap& s, const TourInstance& inst);

// All partial embeddings of a sequential slot class whose realized added
// edges exist in the graph (tour edges included), with their gains. The
// pattern-directed walk makes this O(n) per component for fixed ell and d.
void embeddings_of_subpattern(
    const TourInstance& inst, const ConnectionPattern& p, std::span<const int> slots,
    const std::function<void(const Embedding&, Weight)>& fn);

}  // namespace kopt
