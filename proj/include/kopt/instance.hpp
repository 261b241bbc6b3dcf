#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace kopt {

using Weight = std::int64_t;

// Sum that treats signed overflow as a hard error instead of wrapping.
Weight checked_add(Weight a, Weight b);

struct ParseError : std::runtime_error {
    int line;
    int column;
    ParseError(int line, int column, const std::string& what);
};

// Vertex pair normalized to u <= v.
struct VertexPair {
    int u;
    int v;
    VertexPair() : u(0), v(0) {}
    VertexPair(int a, int b) : u(a < b ? a : b), v(a < b ? b : a) {}
    auto operator<=>(const VertexPair&) const = default;
};

// An exchange (E-, E+): removed tour-edge indices and added vertex pairs.
// `added` is a multiset; validation rejects exchanges whose result is not a
// single cycle, which covers duplicated additions.
struct Swap {
    std::vector<int> removed;        // sorted tour-edge indices
    std::vector<VertexPair> added;   // sorted
    Weight gain = 0;
};

struct Move {
    std::vector<int> removed;
    std::vector<VertexPair> added;
    Weight gain = 0;
    Weight resulting_tour_weight = 0;
};

struct Infeasible {
    int cycle_count = 0;
};

using SwapValidation = std::variant<Move, Infeasible>;

// Weighted graph with a distinguished Hamiltonian tour. Immutable after
// construction; tour edge i joins tour[i] (left endpoint) and tour[i+1 mod n].
class TourInstance {
public:
    TourInstance(int n, std::vector<int> tour,
                 std::vector<std::pair<VertexPair, Weight>> edges);

    static TourInstance parse(std::string_view text);
    std::string serialize() const;

    int n() const { return n_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    int max_degree() const { return max_degree_; }
    Weight tour_weight() const { return tour_weight_; }

    const std::vector<int>& tour() const { return tour_; }
    int tour_position(int v) const { return pos_[v]; }

    int edge_left(int i) const { return tour_[i]; }
    int edge_right(int i) const { return tour_[i + 1 == n_ ? 0 : i + 1]; }
    Weight edge_weight(int i) const { return tour_edge_weight_[i]; }

    bool has_edge(int u, int v) const { return weight_of(u, v).has_value(); }
    std::optional<Weight> weight_of(int u, int v) const;

    // Neighbors of v with weights, sorted by neighbor id.
    std::span<const std::pair<int, Weight>> neighbors(int v) const;
    // Non-tour neighbors of v (chord endpoints).
    std::span<const int> chords(int v) const;

    // Tour edge indices incident to v: (ending at v, starting at v).
    int tour_edge_into(int v) const { return pos_[v] == 0 ? n_ - 1 : pos_[v] - 1; }
    int tour_edge_from(int v) const { return pos_[v]; }

private:
    int n_;
    std::vector<int> tour_;
    std::vector<int> pos_;
    std::vector<std::pair<VertexPair, Weight>> edges_;   // sorted canonical
    std::vector<std::vector<std::pair<int, Weight>>> adj_;
    std::vector<std::vector<int>> chords_;
    std::vector<Weight> tour_edge_weight_;
    int max_degree_ = 0;
    Weight tour_weight_ = 0;
};

// Checks (C \ E-) u E+ against the instance. Returns a Move with recomputed
// gain when the result is a single cycle, otherwise the resulting cycle count.
// Throws std::invalid_argument when the swap references a non-tour removed
// edge or an added edge absent from the graph.
SwapValidation validate_swap(const TourInstance& inst, const Swap& s);

// Applies a validated move; the graph is unchanged, only the tour moves.
// Throws std::invalid_argument when the move is stale.
TourInstance apply_move(const TourInstance& inst, const Move& m);

// Global tie-break: higher gain first, then lexicographic removed indices,
// then lexicographic added pairs. Returns true when a should be preferred.
bool move_better(const Move& a, const Move& b);

// JSON line for a move: {"gain":G,"remove":[[u,v],...],"add":[[u,v],...]}.
std::string move_to_json(const TourInstance& inst, const Move& m);

}  // namespace kopt
