#pragma once

#include <cstdint>
#include <vector>

namespace kopt {

// Small graph for decomposition computations (|V| <= 16).
struct SmallGraph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;

    std::vector<std::uint32_t> adjacency_masks() const;
};

struct PathDecomposition {
    std::vector<std::vector<int>> bags;  // ordered left to right
    int width = 0;
};

struct TreeDecomposition {
    std::vector<std::vector<int>> bags;
    std::vector<std::pair<int, int>> tree_edges;
    int width = 0;
};

// Exact pathwidth via the vertex-separation subset DP, with a witness
// decomposition whose bags come from the optimal layout.
std::pair<int, PathDecomposition> exact_pathwidth(const SmallGraph& g);

// Exact treewidth via the elimination-order subset DP, with a witness.
std::pair<int, TreeDecomposition> exact_treewidth(const SmallGraph& g);

struct NiceNode {
    enum class Kind { Leaf, Introduce, Forget, Join } kind;
    int vertex = -1;              // introduced/forgotten vertex
    int child = -1, child2 = -1;  // node indices
    std::vector<int> bag;         // sorted
};

// Rooted at the last node; root bag is empty.
struct NiceDecomposition {
    std::vector<NiceNode> nodes;
    int root = -1;
    int width = 0;
};

NiceDecomposition make_nice(const PathDecomposition& pd);
NiceDecomposition make_nice(const TreeDecomposition& td);

bool decomposition_valid(const SmallGraph& g, const PathDecomposition& pd);
bool decomposition_valid(const SmallGraph& g, const TreeDecomposition& td);

}  // namespace kopt
