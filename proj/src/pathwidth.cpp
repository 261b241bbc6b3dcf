#include "kopt/pathwidth.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <stdexcept>

namespace kopt {

std::vector<std::uint32_t> SmallGraph::adjacency_masks() const {
    std::vector<std::uint32_t> adj(n, 0);
    for (auto [u, v] : edges) {
        if (u == v) continue;
        adj[u] |= 1u << v;
        adj[v] |= 1u << u;
    }
    return adj;
}

namespace {

int popcount(std::uint32_t x) { return std::popcount(x); }

// vertices of S with a neighbor outside S
int boundary_size(const std::vector<std::uint32_t>& adj, std::uint32_t s, std::uint32_t all) {
    int b = 0;
    for (std::uint32_t m = s; m; m &= m - 1) {
        int v = std::countr_zero(m);
        if (adj[v] & (all & ~s)) ++b;
    }
    return b;
}

}  // namespace

std::pair<int, PathDecomposition> exact_pathwidth(const SmallGraph& g) {
    int n = g.n;
    if (n > 16) throw std::invalid_argument("exact pathwidth supports at most 16 vertices");
    if (n == 0) return {0, PathDecomposition{{{}}, 0}};
    auto adj = g.adjacency_masks();
    std::uint32_t all = n == 32 ? ~0u : (1u << n) - 1;

    std::vector<std::uint8_t> cost(1u << n, 0xff);
    std::vector<std::int8_t> pick(1u << n, -1);
    cost[0] = 0;
    for (std::uint32_t s = 1; s <= all; ++s) {
        int b = boundary_size(adj, s, all);
        int best = 0xff;
        int arg = -1;
        for (std::uint32_t m = s; m; m &= m - 1) {
            int v = std::countr_zero(m);
            int prev = cost[s & ~(1u << v)];
            if (prev < best) {
                best = prev;
                arg = v;
            }
        }
        cost[s] = static_cast<std::uint8_t>(std::max(best, b));
        pick[s] = static_cast<std::int8_t>(arg);
    }
    int width = cost[all];

    std::vector<int> layout(n);
    std::uint32_t s = all;
    for (int i = n - 1; i >= 0; --i) {
        layout[i] = pick[s];
        s &= ~(1u << layout[i]);
    }

    PathDecomposition pd;
    pd.width = width;
    std::uint32_t placed = 0;
    for (int i = 0; i < n; ++i) {
        std::uint32_t at_or_after = all & ~placed;  // layout[i] and everything later
        placed |= 1u << layout[i];
        std::vector<int> bag{layout[i]};
        for (std::uint32_t m = placed & ~(1u << layout[i]); m; m &= m - 1) {
            int v = std::countr_zero(m);
            if (adj[v] & at_or_after) bag.push_back(v);
        }
        std::sort(bag.begin(), bag.end());
        pd.bags.push_back(std::move(bag));
    }
    return {width, pd};
}

std::pair<int, TreeDecomposition> exact_treewidth(const SmallGraph& g) {
    int n = g.n;
    if (n > 16) throw std::invalid_argument("exact treewidth supports at most 16 vertices");
    if (n == 0) return {0, TreeDecomposition{{{}}, {}, 0}};
    auto adj = g.adjacency_masks();
    std::uint32_t all = (1u << n) - 1;

    // q(S, v): neighbors of v outside S u {v} reachable through S
    auto q_size = [&](std::uint32_t s, int v) {
        std::uint32_t reach = adj[v] & s;
        std::uint32_t seen = reach;
        while (true) {
            std::uint32_t next = seen;
            for (std::uint32_t m = reach; m; m &= m - 1)
                next |= adj[std::countr_zero(m)] & s;
            if (next == seen) break;
            reach = next & ~seen;
            seen = next;
            reach = next;
        }
        std::uint32_t through = seen;
        std::uint32_t outside = (adj[v] | [&] {
            std::uint32_t acc = 0;
            for (std::uint32_t m = through; m; m &= m - 1) acc |= adj[std::countr_zero(m)];
            return acc;
        }()) & ~(s | (1u << v));
        return popcount(outside);
    };

    std::vector<std::uint8_t> cost(1u << n, 0xff);
    std::vector<std::int8_t> pick(1u << n, -1);
    cost[0] = 0;
    for (std::uint32_t s = 1; s <= all; ++s) {
        int best = 0xff;
        int arg = -1;
        for (std::uint32_t m = s; m; m &= m - 1) {
            int v = std::countr_zero(m);
            std::uint32_t rest = s & ~(1u << v);
            int c = std::max<int>(cost[rest], q_size(rest, v));
            if (c < best) {
                best = c;
                arg = v;
            }
        }
        cost[s] = static_cast<std::uint8_t>(best);
        pick[s] = static_cast<std::int8_t>(arg);
    }
    int width = cost[all];

    // elimination order: pick[all] eliminated last
    std::vector<int> order(n);
    std::uint32_t s = all;
    for (int i = n - 1; i >= 0; --i) {
        order[i] = pick[s];
        s &= ~(1u << order[i]);
    }
    std::vector<int> rank(n);
    for (int i = 0; i < n; ++i) rank[order[i]] = i;

    // fill-in construction: bag(v) = {v} u higher-ranked fill neighbors
    std::vector<std::uint32_t> fill = adj;
    for (int i = 0; i < n; ++i) {
        int v = order[i];
        std::uint32_t later = 0;
        for (std::uint32_t m = fill[v]; m; m &= m - 1) {
            int u = std::countr_zero(m);
            if (rank[u] > i) later |= 1u << u;
        }
        for (std::uint32_t m = later; m; m &= m - 1) {
            int u = std::countr_zero(m);
            fill[u] |= later & ~(1u << u);
        }
    }

    TreeDecomposition td;
    td.width = width;
    td.bags.resize(n);
    for (int i = 0; i < n; ++i) {
        int v = order[i];
        std::vector<int> bag{v};
        for (std::uint32_t m = fill[v]; m; m &= m - 1) {
            int u = std::countr_zero(m);
            if (rank[u] > i) bag.push_back(u);
        }
        std::sort(bag.begin(), bag.end());
        td.bags[i] = std::move(bag);
        if (static_cast<int>(td.bags[i].size()) > width + 1)
            throw std::logic_error("fill-in bag exceeds computed width");
    }
    for (int i = 0; i < n; ++i) {
        int v = order[i];
        int best = -1;
        for (std::uint32_t m = fill[v]; m; m &= m - 1) {
            int u = std::countr_zero(m);
            if (rank[u] > i && (best == -1 || rank[u] < rank[best])) best = u;
        }
        if (best != -1) td.tree_edges.push_back({i, rank[best]});
    }
    return {width, td};
}

namespace {

// introduce/forget chain from bag `from` to bag `to`
void chain(std::vector<NiceNode>& nodes, int& cur, const std::vector<int>& from,
           const std::vector<int>& to) {
    std::vector<int> bag = from;
    for (int v : from) {
        if (std::find(to.begin(), to.end(), v) == to.end()) {
            bag.erase(std::find(bag.begin(), bag.end(), v));
            NiceNode node{NiceNode::Kind::Forget, v, cur, -1, bag};
            nodes.push_back(node);
            cur = static_cast<int>(nodes.size()) - 1;
        }
    }
    for (int v : to) {
        if (std::find(from.begin(), from.end(), v) == from.end()) {
            bag.push_back(v);
            std::sort(bag.begin(), bag.end());
            NiceNode node{NiceNode::Kind::Introduce, v, cur, -1, bag};
            nodes.push_back(node);
            cur = static_cast<int>(nodes.size()) - 1;
        }
    }
}

}  // namespace

NiceDecomposition make_nice(const PathDecomposition& pd) {
    NiceDecomposition nd;
    nd.width = pd.width;
    nd.nodes.push_back({NiceNode::Kind::Leaf, -1, -1, -1, {}});
    int cur = 0;
    std::vector<int> prev;
    for (const auto& bag : pd.bags) {
        chain(nd.nodes, cur, prev, bag);
        prev = bag;
    }
    chain(nd.nodes, cur, prev, {});
    nd.root = cur;
    return nd;
}

NiceDecomposition make_nice(const TreeDecomposition& td) {
    NiceDecomposition nd;
    nd.width = td.width;
    int m = static_cast<int>(td.bags.size());
    std::vector<std::vector<int>> children(m);
    std::vector<int> parent(m, -1);
    for (auto [a, b] : td.tree_edges) {
        // orient toward higher index (root = last bag)
        children[b].push_back(a);
        parent[a] = b;
    }
    int root_bag = m - 1;
    for (int i = 0; i < m; ++i)
        if (parent[i] == -1) root_bag = i;  // single root by construction

    auto build = [&](auto&& self, int bag_idx) -> int {
        int cur;
        if (children[bag_idx].empty()) {
            nd.nodes.push_back({NiceNode::Kind::Leaf, -1, -1, -1, {}});
            cur = static_cast<int>(nd.nodes.size()) - 1;
            chain(nd.nodes, cur, {}, td.bags[bag_idx]);
            return cur;
        }
        std::vector<int> child_roots;
        for (int c : children[bag_idx]) {
            int sub = self(self, c);
            chain(nd.nodes, sub, td.bags[c], td.bags[bag_idx]);
            child_roots.push_back(sub);
        }
        cur = child_roots[0];
        for (size_t i = 1; i < child_roots.size(); ++i) {
            nd.nodes.push_back({NiceNode::Kind::Join, -1, cur, child_roots[i],
                                td.bags[bag_idx]});
            cur = static_cast<int>(nd.nodes.size()) - 1;
        }
        return cur;
    };
    int top = build(build, root_bag);
    chain(nd.nodes, top, td.bags[root_bag], {});
    nd.root = top;
    return nd;
}

namespace {

bool covers(const SmallGraph& g, const std::vector<std::vector<int>>& bags) {
    std::vector<char> seen(g.n, 0);
    for (const auto& bag : bags)
        for (int v : bag) {
            if (v < 0 || v >= g.n) return false;
            seen[v] = 1;
        }
    for (int v = 0; v < g.n; ++v)
        if (!seen[v]) return false;
    for (auto [u, v] : g.edges) {
        bool ok = false;
        for (const auto& bag : bags)
            ok |= std::find(bag.begin(), bag.end(), u) != bag.end() &&
                  std::find(bag.begin(), bag.end(), v) != bag.end();
        if (!ok) return false;
    }
    return true;
}

}  // namespace

bool decomposition_valid(const SmallGraph& g, const PathDecomposition& pd) {
    if (g.n == 0) return true;
    if (!covers(g, pd.bags)) return false;
    for (int v = 0; v < g.n; ++v) {
        int first = -1, last = -1;
        for (int i = 0; i < static_cast<int>(pd.bags.size()); ++i) {
            if (std::find(pd.bags[i].begin(), pd.bags[i].end(), v) != pd.bags[i].end()) {
                if (first == -1) first = i;
                last = i;
            }
        }
        for (int i = first; i <= last; ++i)
            if (std::find(pd.bags[i].begin(), pd.bags[i].end(), v) == pd.bags[i].end())
                return false;
    }
    for (const auto& bag : pd.bags)
        if (static_cast<int>(bag.size()) > pd.width + 1) return false;
    return true;
}

bool decomposition_valid(const SmallGraph& g, const TreeDecomposition& td) {
    if (g.n == 0) return true;
    if (!covers(g, td.bags)) return false;
    int m = static_cast<int>(td.bags.size());
    if (static_cast<int>(td.tree_edges.size()) != m - 1 && m > 1) return false;
    // connectivity of occurrences
    std::vector<std::vector<int>> nb(m);
    for (auto [a, b] : td.tree_edges) {
        nb[a].push_back(b);
        nb[b].push_back(a);
    }
    for (int v = 0; v < g.n; ++v) {
        std::vector<int> occ;
        for (int i = 0; i < m; ++i)
            if (std::find(td.bags[i].begin(), td.bags[i].end(), v) != td.bags[i].end())
                occ.push_back(i);
        if (occ.empty()) return false;
        std::vector<char> vis(m, 0);
        std::vector<int> stack{occ[0]};
        vis[occ[0]] = 1;
        while (!stack.empty()) {
            int cur = stack.back();
            stack.pop_back();
            for (int nxt : nb[cur])
                if (!vis[nxt] &&
                    std::find(td.bags[nxt].begin(), td.bags[nxt].end(), v) != td.bags[nxt].end()) {
                    vis[nxt] = 1;
                    stack.push_back(nxt);
                }
        }
        for (int i : occ)
            if (!vis[i]) return false;
    }
    for (const auto& bag : td.bags)
        if (static_cast<int>(bag.size()) > td.width + 1) return false;
    return true;
}

}  // namespace kopt
