#include "kopt/patterns.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <stdexcept>

namespace kopt {

ConnectionPattern::ConnectionPattern(int k, std::vector<std::uint8_t> mate)
    : k_(k), mate_(std::move(mate)) {
    if (k_ < 1 || k_ > 12) throw std::invalid_argument("pattern slot count out of range");
    if (mate_.size() != static_cast<size_t>(2 * k_))
        throw std::invalid_argument("mate array size mismatch");
    for (int v = 0; v < 2 * k_; ++v) {
        int m = mate_[v];
        if (m < 0 || m >= 2 * k_ || m == v || mate_[m] != v)
            throw std::invalid_argument("mate array is not a fixed-point-free involution");
    }
}

bool ConnectionPattern::has_slot_edge() const {
    for (int i = 0; i < k_; ++i)
        if (mate_[2 * i] == 2 * i + 1) return true;
    return false;
}

ConnectionPattern ConnectionPattern::parse(std::string_view text) {
    auto semi = text.find(';');
    if (semi == std::string_view::npos)
        throw std::invalid_argument("pattern text needs 'k; edges'");
    int k = 0;
    {
        auto head = text.substr(0, semi);
        size_t i = head.find_first_not_of(" \t");
        auto [p, ec] = std::from_chars(head.data() + i, head.data() + head.size(), k");
        (void)p;
        if (ec != std::errc()) throw std::invalid_argument("bad slot count");
    }
    std::vector<std::uint8_t> mate(2 * k, 0);
    std::vector<char> seen(2 * k, 0);
    size_t i = semi + 1;
    int edges = 0;
    while (i < text.size()) {
        while (i < text.size() && (text[i] == ' ' || text[i] == ',' || text[i] == '\t')) ++i;
        if (i >= text.size()) break;
        int a = 0, b = 0;
        auto [p1, e1] = std::from_chars(text.data() + i, text.data() + text.size(), a);
        if (e1 != std::errc() || p1 == text.data() + text.size() || *p1 != '-')
            throw std::invalid_argument("bad pattern edge");
        auto [p2, e2] = std::from_chars(p1 + 1, text.data() + text.size(), b);
        if (e2 != std::errc()) throw std::invalid_argument("bad pattern edge");
        i = static_cast<size_t>(p2 - text.data());
        if (a < 1 || a > 2 * k || b < 1 || b > 2 * k || a == b)
            throw std::invalid_argument("pattern edge endpoint out of range");
        if (seen[a - 1] || seen[b - 1]) throw std::invalid_argument("pattern vertex repeated");
        seen[a - 1] = seen[b - 1] = 1;
        mate[a - 1] = static_cast<std::uint8_t>(b - 1);
        mate[b - 1] = static_cast<std::uint8_t>(a - 1);
        ++edges;
    }
    if (edges != k) throw std::invalid_argument("pattern edge count mismatch");
    return ConnectionPattern(k, std::move(mate));
}

std::string ConnectionPattern::to_string() const {
    std::ostringstream out;
    out << k_ << ";";
    bool first = true;
    for (int v = 0; v < 2 * k_; ++v) {
        if (mate_[v] > v) {
            out << (first ? " " : ", ") << (v + 1) << '-' << (mate_[v] + 1);
            first = false;
        }
    }
    return out.str();
}

std::uint64_t double_factorial_odd(int k) {
    std::uint64_t r = 1;
    for (int i = 2 * k - 1; i > 1; i -= 2) r *= static_cast<std::uint64_t>(i);
    return r;
}

namespace {

void enumerate_matchings(int k, bool allow_slot_edges, std::vector<std::uint8_t>& mate,
                         int lo, const std::function<void(std::vector<std::uint8_t>&)>& fn) {
    int n = 2 * k;
    while (lo < n && mate[lo] != 0xff) ++lo;
    if (lo == n) {
        fn(mate);
        return;
    }
    for (int j = lo + 1; j < n; ++j) {
        if (mate[j] != 0xff) continue;
        if (!allow_slot_edges && j == lo + 1 && (lo & 1) == 0) continue;
        mate[lo] = static_cast<std::uint8_t>(j);
        mate[j] = static_cast<std::uint8_t>(lo);
        enumerate_matchings(k, allow_slot_edges, mate, lo + 1, fn);
        mate[lo] = 0xff;
        mate[j] = 0xff;
    }
}

}  // namespace

void enumerate_patterns(int k, PatternUniverse universe,
                        const std::function<void(const ConnectionPattern&)>& fn) {
    if (k < 1 || k > 10) throw std::invalid_argument("pattern enumeration supports 1 <= k <= 10");
    std::vector<std::uint8_t> mate(2 * k, 0xff);
    bool full = universe == PatternUniverse::FullMoves;
    enumerate_matchings(k, full, mate, 0, [&](std::vector<std::uint8_t>& m) {
        ConnectionPattern p(k, m);
        if (full && !is_feasible(p)) return;
        fn(p);
    });
}

bool is_feasible(const ConnectionPattern& p, std::span<const int> slots) {
    int m = static_cast<int>(slots.size());
    if (m == 0) return false;
    // local relabel: slot slots[t] -> positions 2t, 2t+1
    int local[24];
    for (int t = 0; t < m; ++t) {
        local[slots[t]] = t;
    }
    // union-find over 2m canonical vertices
    int parent[24];
    for (int v = 0; v < 2 * m; ++v) parent[v] = v;
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    int comps = 2 * m;
    auto join = [&](int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) {
            parent[a] = b;
            --comps;
        }
    };
    for (int t = 0; t < m; ++t) {
        int s = slots[t];
        for (int d = 0; d < 2; ++d) {
            int mg = p.mate(2 * s + d);
            join(2 * t + d, 2 * local[mg / 2] + (mg & 1));
        }
        join(2 * t + 1, (2 * t + 2) % (2 * m));
    }
    return comps == 1;
}

bool is_feasible(const ConnectionPattern& p) {
    int slots[12];
    for (int i = 0; i < p.k(); ++i) slots[i] = i;
    return is_feasible(p, std::span<const int>(slots, p.k()));
}

std::vector<std::vector<int>> sequential_decomposition(const ConnectionPattern& p) {
    int k = p.k();
    // component = connected class of slots under matching edges and slot edges
    std::vector<int> comp(k, -1);
    std::vector<std::vector<int>> out;
    for (int s = 0; s < k; ++s) {
        if (comp[s] != -1) continue;
        std::vector<int> stack{s};
        comp[s] = static_cast<int>(out.size());
        std::vector<int> slots;
        while (!stack.empty()) {
            int cur = stack.back();
            stack.pop_back();
            slots.push_back(cur);
            for (int d = 0; d < 2; ++d) {
                int other = p.mate(2 * cur + d) / 2;
                if (comp[other] == -1) {
                    comp[other] = comp[s];
                    stack.push_back(other);
                }
            }
        }
        std::sort(slots.begin(), slots.end());
        out.push_back(std::move(slots));
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a[0] < b[0]; });
    return out;
}

bool is_reducible(const ConnectionPattern& p) {
    auto comps = sequential_decomposition(p);
    int t = static_cast<int>(comps.size());
    if (t < 2) return false;
    std::vector<int> side_a, side_b;
    for (unsigned mask = 1; mask < (1u << (t - 1)); ++mask) {
        side_a.clear();
        side_b.clear();
        for (int i = 0; i < t; ++i) {
            auto& dst = (mask >> i) & 1 ? side_a : side_b;
            dst.insert(dst.end(), comps[i].begin(), comps[i].end());
        }
        std::sort(side_a.begin(), side_a.end());
        std::sort(side_b.begin(), side_b.end());
        if (is_feasible(p, side_a) && is_feasible(p, side_b)) return true;
    }
    return false;
}

int interactions(std::span<const int> x, std::span<const int> y, int k) {
    std::uint32_t in_x = 0, in_y = 0;
    for (int s : x) in_x |= 1u << s;
    for (int s : y) in_y |= 1u << s;
    if (in_x & in_y) throw std::invalid_argument("interaction slot sets overlap");
    int count = 0;
    for (int i = 0; i + 1 < k; ++i) {
        bool a = (in_x >> i) & 1, b = (in_y >> (i + 1)) & 1;
        bool c = (in_y >> i) & 1, d = (in_x >> (i + 1)) & 1;
        if ((a && b) || (c && d)) ++count;
    }
    return count;
}

InteractionGraphs interaction_graph(const ConnectionPattern& p) {
    InteractionGraphs g;
    g.component_slots = sequential_decomposition(p);
    g.components = static_cast<int>(g.component_slots.size());
    int k = p.k();
    std::vector<int> comp_of(k);
    for (int c = 0; c < g.components; ++c)
        for (int s : g.component_slots[c]) comp_of[s] = c;
    // closure: cycle 1..k with component classes identified, k edges
    for (int i = 0; i < k; ++i) {
        int a = comp_of[i], b = comp_of[(i + 1) % k];
        g.multi_edges.push_back({std::min(a, b), std::max(a, b)});
    }
    // simple interaction graph: no wrap-around, no loops, deduplicated
    std::vector<std::pair<int, int>> simple;
    for (int i = 0; i + 1 < k; ++i) {
        int a = comp_of[i], b = comp_of[i + 1];
        if (a != b) simple.push_back({std::min(a, b), std::max(a, b)});
    }
    std::sort(simple.begin(), simple.end());
    simple.erase(std::unique(simple.begin(), simple.end()), simple.end());
    g.simple_edges = std::move(simple);
    return g;
}

AdjacentSwapResult swap_adjacent(const ConnectionPattern& p, int i) {
    if (i < 0 || i + 1 >= p.k()) throw std::invalid_argument("swap index out of range");
    auto m = p.mates();
    auto exchange = [&](int a, int b) {
        int ma = m[a], mb = m[b];
        if (ma == b) return;  // a-b edge survives a mate exchange
        m[a] = static_cast<std::uint8_t>(mb);
        m[b] = static_cast<std::uint8_t>(ma);
        m[ma] = static_cast<std::uint8_t>(b);
        m[mb] = static_cast<std::uint8_t>(a);
    };
    exchange(2 * i, 2 * i + 2);
    exchange(2 * i + 1, 2 * i + 3);
    ConnectionPattern q(p.k(), std::move(m));
    return {q, q.has_slot_edge()};
}

Swap realize(const ConnectionPattern& p, const Embedding& f, const TourInstance& inst) {
    if (f.slots.size() != f.edges.size())
        throw std::invalid_argument("embedding slots/edges size mismatch");
    int k = p.k();
    std::vector<int> edge_of(k, -1);
    for (size_t t = 0; t < f.slots.size(); ++t) {
        if (t > 0 && !(f.slots[t - 1] < f.slots[t] && f.edges[t - 1] < f.edges[t]))
            throw std::invalid_argument("embedding is not strictly increasing");
        edge_of[f.slots[t]] = f.edges[t];
    }
    auto vertex_of = [&](int pv) {
        int e = edge_of[ConnectionPattern::slot_of(pv)];
        return (pv & 1) ? inst.edge_right(e) : inst.edge_left(e);
    };

    Swap s;
    Weight removed_w = 0, added_w = 0;
    for (size_t t = 0; t < f.slots.size(); ++t) {
        s.removed.push_back(f.edges[t]);
        removed_w = checked_add(removed_w, inst.edge_weight(f.edges[t]));
    }
    for (int slot : f.slots) {
        for (int d = 0; d < 2; ++d) {
            int v = 2 * slot + d;
            int m = p.mate(v);
            if (m < v) continue;  // emit each matching edge once
            if (edge_of[ConnectionPattern::slot_of(m)] < 0)
                throw std::invalid_argument("matching edge leaves the embedded slot set");
            int a = vertex_of(v), b = vertex_of(m);
            auto w = inst.weight_of(a, b);
            if (!w)
                throw std::invalid_argument("pattern edge has no matching graph edge");
            s.added.push_back(VertexPair(a, b));
            added_w = checked_add(added_w, *w);
        }
    }
    std::sort(s.added.begin(), s.added.end());
    s.gain = checked_add(removed_w, -added_w);
    return s;
}

}  // namespace kopt
