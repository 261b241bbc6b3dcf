#include "kopt/instance.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "json.hpp"

namespace kopt {

Weight checked_add(Weight a, Weight b) {
    Weight out;
    if (__builtin_add_overflow(a, b, &out))
        throw std::overflow_error("weight sum overflows 64-bit range");
    return out;
}

ParseError::ParseError(int line, int column, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ", col " +
                         std::to_string(column) + ": " + what),
      line(line),
      column(column) {}

namespace {

struct LineReader {
    std::string_view text;
    size_t off = 0;
    int line_no = 0;

    // Next non-comment, non-empty line.
    std::optional<std::pair<std::string_view, int>> next() {
        while (off < text.size()) {
            size_t end = text.find('\n', off);
            if (end == std::string_view::npos) end = text.size();
            std::string_view line = text.substr(off, end - off);
            off = end + 1;
            ++line_no;
            size_t start = line.find_first_not_of(" \t\r");
            if (start == std::string_view::npos) continue;
            if (line[start] == '#') continue;
            return std::make_pair(line, line_no);
        }
        return std::nullopt;
    }
};

std::vector<long long> parse_ints(std::string_view line, int line_no, size_t expected) {
    std::vector<long long> out;
    size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        if (i >= line.size()) break;
        long long value = 0;
        auto [ptr, ec] = std::from_chars(line.data() + i, line.data() + line.size(), value);
        if (ec != std::errc())
            throw ParseError(line_no, static_cast<int>(i) + 1, "expected integer");
        i = static_cast<size_t>(ptr - line.data());
        out.push_back(value);
    }
    if (expected != 0 && out.size() != expected)
        throw ParseError(line_no, 1,
                         "expected " + std::to_string(expected) + " fields, got " +
                             std::to_string(out.size()));
    return out;
}

}  // namespace

TourInstance::TourInstance(int n, std::vector<int> tour,
                           std::vector<std::pair<VertexPair, Weight>> edges)
    : n_(n), tour_(std::move(tour)) {
    if (n_ < 3) throw std::invalid_argument("instance needs at least 3 vertices");
    if (static_cast<int>(tour_.size()) != n_)
        throw std::invalid_argument("tour length differs from vertex count");
    pos_.assign(n_, -1);
    for (int i = 0; i < n_; ++i) {
        int v = tour_[i];
        if (v < 0 || v >= n_) throw std::invalid_argument("tour vertex out of range");
        if (pos_[v] != -1) throw std::invalid_argument("tour is not Hamiltonian: vertex repeated");
        pos_[v] = i;
    }

    std::sort(edges.begin(), edges.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (size_t i = 0; i < edges.size(); ++i) {
        auto [e, w] = edges[i];
        if (e.u == e.v) throw std::invalid_argument("self-loop rejected");
        if (e.u < 0 || e.v >= n_) throw std::invalid_argument("edge endpoint out of range");
        if (i > 0 && edges[i - 1].first == e) {
            if (edges[i - 1].second != w)
                throw std::invalid_argument("duplicate edge with conflicting weight");
            throw std::invalid_argument("parallel edge rejected");
        }
        (void)w;
    }
    edges_ = std::move(edges);

    adj_.assign(n_, {});
    for (auto& [e, w] : edges_) {
        adj_[e.u].push_back({e.v, w});
        adj_[e.v].push_back({e.u, w});
    }
    for (auto& a : adj_) {
        std::sort(a.begin(), a.end());
        max_degree_ = std::max(max_degree_, static_cast<int>(a.size()));
    }

    tour_edge_weight_.resize(n_);
    tour_weight_ = 0;
    for (int i = 0; i < n_; ++i) {
        auto w = weight_of(edge_left(i), edge_right(i));
        if (!w) throw std::invalid_argument("consecutive tour vertices are not adjacent");
        tour_edge_weight_[i] = *w;
        tour_weight_ = checked_add(tour_weight_, *w);
    }

    chords_.assign(n_, {});
    for (int v = 0; v < n_; ++v) {
        int a = tour_[pos_[v] == 0 ? n_ - 1 : pos_[v] - 1];
        int b = tour_[pos_[v] + 1 == n_ ? 0 : pos_[v] + 1];
        for (auto& [to, w] : adj_[v])
            if (to != a && to != b) chords_[v].push_back(to);
    }
}

std::optional<Weight> TourInstance::weight_of(int u, int v) const {
    if (u < 0 || u >= n_ || v < 0 || v >= n_ || u == v) return std::nullopt;
    const auto& a = adj_[u];
    auto it = std::lower_bound(a.begin(), a.end(), std::make_pair(v, std::numeric_limits<Weight>::min()));
    if (it != a.end() && it->first == v) return it->second;
    return std::nullopt;
}

std::span<const std::pair<int, Weight>> TourInstance::neighbors(int v) const {
    return adj_[v];
}

std::span<const int> TourInstance::chords(int v) const { return chords_[v]; }

TourInstance TourInstance::parse(std::string_view text) {
    LineReader reader{text};
    auto header = reader.next();
    if (!header) throw ParseError(1, 1, "empty input");
    auto h = parse_ints(header->first, header->second, 3);
    long long n = h[0], m = h[1], d = h[2];
    if (n < 3 || n > (1 << 28)) throw ParseError(header->second, 1, "bad vertex count");
    if (m < n) throw ParseError(header->second, 1, "fewer edges than tour edges");

    auto tour_line = reader.next();
    if (!tour_line) throw ParseError(header->second + 1, 1, "missing tour line");
    auto t = parse_ints(tour_line->first, tour_line->second, static_cast<size_t>(n));
    std::vector<int> tour(t.begin(), t.end());

    std::vector<std::pair<VertexPair, Weight>> edges;
    edges.reserve(static_cast<size_t>(m));
    for (long long i = 0; i < m; ++i) {
        auto line = reader.next();
        if (!line) throw ParseError(reader.line_no + 1, 1, "missing edge line");
        auto f = parse_ints(line->first, line->second, 3);
        if (f[0] < 0 || f[0] >= n || f[1] < 0 || f[1] >= n)
            throw ParseError(line->second, 1, "edge endpoint out of range");
        edges.push_back({VertexPair(static_cast<int>(f[0]), static_cast<int>(f[1])), f[2]});
    }
    if (reader.next()) throw ParseError(reader.line_no, 1, "trailing content after edge list");

    TourInstance inst(static_cast<int>(n), std::move(tour), std::move(edges));
    if (inst.max_degree() > d)
        throw ParseError(header->second, 1,
                         "degree " + std::to_string(inst.max_degree()) +
                             " exceeds declared bound " + std::to_string(d));
    return inst;
}

std::string TourInstance::serialize() const {
    std::ostringstream out;
    out << n_ << ' ' << edges_.size() << ' ' << max_degree_ << '\n';
    for (int i = 0; i < n_; ++i) out << tour_[i] << (i + 1 == n_ ? '\n' : ' ');
    for (auto& [e, w] : edges_) out << e.u << ' ' << e.v << ' ' << w << '\n';
    return out.str();
}

namespace {

// Cycle count of the 2-regular multigraph (C \ E-) u E+ via union-find.
// Returns -1 when the exchange is not 2-regular (endpoint multisets differ).
int result_cycle_count(const TourInstance& inst, const Swap& s) {
    int n = inst.n();
    std::vector<int> deg(n, 2);
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    int comps = n;
    auto join = [&](int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) {
            parent[a] = b;
            --comps;
        }
    };

    std::vector<char> removed(n, 0);
    for (int idx : s.removed) removed[idx] = 1;
    for (int i = 0; i < n; ++i) {
        if (removed[i]) {
            --deg[inst.edge_left(i)];
            --deg[inst.edge_right(i)];
        } else {
            join(inst.edge_left(i), inst.edge_right(i));
        }
    }
    for (const auto& e : s.added) {
        ++deg[e.u];
        ++deg[e.v];
        join(e.u, e.v);
    }
    for (int v = 0; v < n; ++v)
        if (deg[v] != 2) return -1;
    // isolated union-find classes cannot exist: every vertex kept degree 2
    return comps;
}

}  // namespace

SwapValidation validate_swap(const TourInstance& inst, const Swap& s) {
    if (s.removed.size() != s.added.size())
        throw std::invalid_argument("|removed| != |added|");
    Weight removed_w = 0, added_w = 0;
    std::vector<char> seen(inst.n(), 0);
    for (int idx : s.removed) {
        if (idx < 0 || idx >= inst.n())
            throw std::invalid_argument("removed edge is not a tour edge");
        if (seen[idx]) throw std::invalid_argument("removed edge repeated");
        seen[idx] = 1;
        removed_w = checked_add(removed_w, inst.edge_weight(idx));
    }
    for (const auto& e : s.added) {
        auto w = inst.weight_of(e.u, e.v);
        if (!w) throw std::invalid_argument("added edge is not a graph edge");
        added_w = checked_add(added_w, *w);
    }

    int cycles = result_cycle_count(inst, s);
    if (cycles != 1) return Infeasible{cycles};

    Move m;
    m.removed = s.removed;
    m.added = s.added;
    std::sort(m.removed.begin(), m.removed.end());
    std::sort(m.added.begin(), m.added.end());
    m.gain = checked_add(removed_w, -added_w);
    m.resulting_tour_weight = checked_add(inst.tour_weight(), -m.gain);
    return m;
}

TourInstance apply_move(const TourInstance& inst, const Move& m) {
    Swap s{m.removed, m.added, m.gain};
    auto v = validate_swap(inst, s);
    auto* mv = std::get_if<Move>(&v);
    if (!mv) throw std::invalid_argument("move is stale: result is not a single cycle");

    int n = inst.n();
    // adjacency of the resulting cycle
    std::vector<std::array<int, 2>> nb(n, {-1, -1});
    auto attach = [&](int a, int b) {
        for (int a2 : {a, b}) {
            int other = a2 == a ? b : a;
            if (nb[a2][0] == -1) nb[a2][0] = other;
            else nb[a2][1] = other;
        }
    };
    std::vector<char> removed(n, 0);
    for (int idx : m.removed) removed[idx] = 1;
    for (int i = 0; i < n; ++i)
        if (!removed[i]) attach(inst.edge_left(i), inst.edge_right(i));
    for (const auto& e : m.added) attach(e.u, e.v);

    std::vector<int> tour;
    tour.reserve(n);
    int start = inst.tour()[0];
    int prev = -1, cur = start;
    do {
        tour.push_back(cur);
        int next = nb[cur][0] == prev ? nb[cur][1] : nb[cur][0];
        prev = cur;
        cur = next;
    } while (cur != start);
    // deterministic orientation: second vertex is the smaller neighbor
    if (n >= 3 && tour[1] > tour[n - 1]) {
        std::reverse(tour.begin() + 1, tour.end());
    }

    std::vector<std::pair<VertexPair, Weight>> edges;
    edges.reserve(inst.edge_count());
    for (int v2 = 0; v2 < n; ++v2)
        for (auto& [to, w] : inst.neighbors(v2))
            if (v2 < to) edges.push_back({VertexPair(v2, to), w});
    return TourInstance(n, std::move(tour), std::move(edges));
}

bool move_better(const Move& a, const Move& b) {
    if (a.gain != b.gain) return a.gain > b.gain;
    if (a.removed != b.removed) return a.removed < b.removed;
    return a.added < b.added;
}

std::string move_to_json(const TourInstance& inst, const Move& m) {
    nlohmann::json j;
    j["gain"] = m.gain;
    auto pairs = nlohmann::json::array();
    for (int idx : m.removed) {
        VertexPair e(inst.edge_left(idx), inst.edge_right(idx));
        pairs.push_back({e.u, e.v});
    }
    std::sort(pairs.begin(), pairs.end());
    j["remove"] = pairs;
    auto added = nlohmann::json::array();
    for (const auto& e : m.added) added.push_back({e.u, e.v});
    j["add"] = added;
    return j.dump();
}

}  // namespace kopt
