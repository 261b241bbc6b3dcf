#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "kopt/instance.hpp"

namespace kopt {

// Perfect matching on the 2k endpoint slots of k removed tour edges.
// Slots are 0-indexed: slot i owns vertices 2i (left endpoint) and 2i+1
// (right endpoint). An edge {2i, 2i+1} re-adds slot i's removed edge; such
// patterns are excluded from the restricted enumeration universe but remain
// representable (swap transforms and the full-move universe produce them).
class ConnectionPattern {
public:
    ConnectionPattern(int k, std::vector<std::uint8_t> mate);

    static ConnectionPattern parse(std::string_view text);  // "k; a1-b1, a2-b2"
    std::string to_string() const;

    int k() const { return k_; }
    int mate(int v) const { return mate_[v]; }
    const std::vector<std::uint8_t>& mates() const { return mate_; }
    bool has_slot_edge() const;

    static int left(int slot) { return 2 * slot; }
    static int right(int slot) { return 2 * slot + 1; }
    static int slot_of(int v) { return v / 2; }

    auto operator<=>(const ConnectionPattern&) const = default;

private:
    int k_;
    std::vector<std::uint8_t> mate_;
};

// Sub-matching induced by a slot subset of a parent pattern.
struct SubPattern {
    const ConnectionPattern* parent;
    std::vector<int> slots;  // sorted
};

enum class PatternUniverse {
    Restricted,  // fixed-point-free involutions without slot edges
    FullMoves,   // every matching that is feasible (patterns of whole moves)
};

// Streams patterns of the chosen universe in canonical lexicographic order on
// the mate array. Restricted is the default universe everywhere else.
void enumerate_patterns(int k, PatternUniverse universe,
                        const std::function<void(const ConnectionPattern&)>& fn);
inline void enumerate_patterns(int k,
                               const std::function<void(const ConnectionPattern&)>& fn) {
    enumerate_patterns(k, PatternUniverse::Restricted, fn);
}

// Number of matchings on 2k points (enumeration upper bound), (2k-1)!!.
std::uint64_t double_factorial_odd(int k);

// Single-cycle test on the canonical configuration restricted to `slots`
// (relabelled to consecutive positions): matching edges plus the gap edges
// joining consecutive removed edges around the tour.
bool is_feasible(const ConnectionPattern& p, std::span<const int> slots);
bool is_feasible(const ConnectionPattern& p);

// Partition of [k] into the slot classes of M u F cycles, sorted by min slot.
// Each class, as a sub-pattern, is sequential.
std::vector<std::vector<int>> sequential_decomposition(const ConnectionPattern& p);

// True when some bipartition of the sequential components into two nonempty
// groups makes both group unions feasible.
bool is_reducible(const ConnectionPattern& p);

// Number of indices i with i in X and i+1 in Y, or i in Y and i+1 in X.
// Throws when X and Y overlap.
int interactions(std::span<const int> x, std::span<const int> y, int k);

struct InteractionGraphs {
    int components;
    std::vector<std::vector<int>> component_slots;
    std::vector<std::pair<int, int>> simple_edges;      // C_M, u < v
    std::vector<std::pair<int, int>> multi_edges;       // closure, k edges, may loop
};

InteractionGraphs interaction_graph(const ConnectionPattern& p);

struct AdjacentSwapResult {
    ConnectionPattern pattern;
    bool creates_slot_edge;
};

// Exchanges the mates of the left endpoints of slots i and i+1, and of their
// right endpoints (0-indexed i in [0, k-2]).
AdjacentSwapResult swap_adjacent(const ConnectionPattern& p, int i);

// Increasing assignment of (a subset of) slots to tour edge indices.
struct Embedding {
    std::vector<int> slots;   // sorted
    std::vector<int> edges;   // strictly increasing, aligned with slots
};

// Concrete swap for (pattern, embedding): removed edges e_{f(i)}, added edges
// per the left/right endpoint convention. Throws when a matching edge has no
// corresponding graph edge (swap not admissible on this instance).
Swap realize(const ConnectionPattern& p, const Embedding& f, const TourInstance& inst);

}  // namespace kopt
