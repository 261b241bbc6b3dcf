#include "kopt/seqswaps.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace kopt {

namespace {

struct WalkState {
    const TourInstance& inst;
    int ell;
    int start;        // minimal removed index, traversed left to right
    int anchor_vertex;
    std::vector<int> removed;
    std::vector<VertexPair> added;
    Weight removed_w = 0;
    Weight added_w = 0;
    std::set<std::pair<std::vector<int>, std::vector<VertexPair>>> emitted;
    const std::function<void(const Swap&)>* fn;
};

void walk_from(WalkState& st, int cur) {
    if (static_cast<int>(st.removed.size()) == st.ell) {
        // closing chord back to the anchor's left endpoint
        if (cur == st.anchor_vertex) return;
        auto w = st.inst.weight_of(cur, st.anchor_vertex);
        if (!w) return;
        bool chord = false;
        for (int c : st.inst.chords(cur)) chord |= c == st.anchor_vertex;
        if (!chord) return;
        Swap s;
        s.removed = st.removed;
        s.added = st.added;
        s.added.push_back(VertexPair(cur, st.anchor_vertex));
        std::sort(s.removed.begin(), s.removed.end());
        std::sort(s.added.begin(), s.added.end());
        if (std::adjacent_find(s.added.begin(), s.added.end()) != s.added.end())
            return;  // an added chord used twice
        if (!st.emitted.insert({s.removed, s.added}).second) return;
        s.gain = checked_add(st.removed_w, -(checked_add(st.added_w, *w)));
        (*st.fn)(s);
        return;
    }
    for (int x : st.inst.chords(cur)) {
        Weight cw = *st.inst.weight_of(cur, x);
        // next removed tour edge at x, either direction
        for (int dir = 0; dir < 2; ++dir) {
            int e = dir == 0 ? st.inst.tour_edge_from(x) : st.inst.tour_edge_into(x);
            if (e < st.start) continue;  // canonical start is the minimum
            if (std::find(st.removed.begin(), st.removed.end(), e) != st.removed.end())
                continue;
            int far = dir == 0 ? st.inst.edge_right(e) : st.inst.edge_left(e);
            st.removed.push_back(e);
            st.added.push_back(VertexPair(cur, x));
            st.removed_w = checked_add(st.removed_w, st.inst.edge_weight(e));
            st.added_w = checked_add(st.added_w, cw);
            walk_from(st, far);
            st.removed_w -= st.inst.edge_weight(e);
            st.added_w -= cw;
            st.removed.pop_back();
            st.added.pop_back();
        }
    }
}

}  // namespace

void enumerate_sequential_swaps(const TourInstance& inst, int ell,
                                const std::function<void(const Swap&)>& fn) {
    if (ell < 2) throw std::invalid_argument("sequential swaps need ell >= 2");
    for (int s = 0; s < inst.n(); ++s) {
        WalkState st{inst, ell, s, inst.edge_left(s), {}, {}, 0, 0, {}, &fn};
        st.removed.push_back(s);
        st.removed_w = inst.edge_weight(s);
        walk_from(st, inst.edge_right(s));
    }
}

CanonicalPattern canonical_sequential_pattern(const Swap& s, const TourInstance& inst) {
    int ell = static_cast<int>(s.removed.size());
    if (ell < 1) throw std::invalid_argument("empty swap");
    std::vector<int> removed = s.removed;
    std::sort(removed.begin(), removed.end());

    // alternating closed walk over removed tour edges and added edges
    struct Edge {
        int a, b;
        bool used = false;
    };
    std::vector<Edge> minus, plus;
    for (int idx : removed) minus.push_back({inst.edge_left(idx), inst.edge_right(idx)});
    for (auto& e : s.added) plus.push_back({e.u, e.v});

    std::vector<int> walk;  // vertex sequence v_0 .. v_{2ell-1}
    std::vector<int> minus_order;
    int v0 = minus[0].a;  // left endpoint of the minimal removed edge

    std::function<bool(int, int)> extend = [&](int cur, int depth) -> bool {
        if (depth == ell) {
            for (auto& e : plus)
                if (!e.used && ((e.a == cur && e.b == v0) || (e.b == cur && e.a == v0)))
                    return true;
            return false;
        }
        for (size_t pi = 0; pi < plus.size(); ++pi) {
            auto& pe = plus[pi];
            if (pe.used || (pe.a != cur && pe.b != cur)) continue;
            int x = pe.a == cur ? pe.b : pe.a;
            for (size_t mi = 0; mi < minus.size(); ++mi) {
                auto& me = minus[mi];
                if (me.used || (me.a != x && me.b != x)) continue;
                int far = me.a == x ? me.b : me.a;
                pe.used = me.used = true;
                walk.push_back(x);
                walk.push_back(far);
                minus_order.push_back(static_cast<int>(mi));
                if (extend(far, depth + 1)) return true;
                minus_order.pop_back();
                walk.pop_back();
                walk.pop_back();
                pe.used = me.used = false;
            }
        }
        return false;
    };

    walk.push_back(v0);
    walk.push_back(minus[0].b);
    minus_order.push_back(0);
    minus[0].used = true;
    if (!extend(minus[0].b, 1))
        throw std::invalid_argument("swap is not sequential: no closed alternating walk");

    // relabel: removed edge j (by sorted index) traversed left-to-right gets
    // labels (2j, 2j+1), right-to-left (2j+1, 2j)
    std::vector<int> labels(2 * ell);
    for (int t = 0; t < ell; ++t) {
        int j = minus_order[t];
        bool ltr = walk[2 * t] == minus[j].a;
        labels[2 * t] = 2 * j + (ltr ? 0 : 1);
        labels[2 * t + 1] = 2 * j + (ltr ? 1 : 0);
    }
    std::vector<std::uint8_t> mate(2 * ell);
    for (int t = 0; t < ell; ++t) {
        int a = labels[2 * t + 1];
        int b = labels[(2 * t + 2) % (2 * ell)];
        mate[a] = static_cast<std::uint8_t>(b);
        mate[b] = static_cast<std::uint8_t>(a);
    }
    CanonicalPattern out{ConnectionPattern(ell, std::move(mate)), Embedding{}};
    for (int t = 0; t < ell; ++t) {
        out.embedding.slots.push_back(t);
        out.embedding.edges.push_back(removed[t]);
    }
    return out;
}

namespace {

struct SubWalk {
    const TourInstance& inst;
    const ConnectionPattern& p;
    std::vector<int> order;        // pattern vertices in component cycle order
    std::vector<int> edge_of;      // slot -> assigned tour edge or -1
    std::vector<int> sorted_slots;
    Weight removed_w = 0;
    Weight added_w = 0;
    const std::function<void(const Embedding&, Weight)>* fn;

    int vertex_of(int pv) const {
        int e = edge_of[ConnectionPattern::slot_of(pv)];
        return (pv & 1) ? inst.edge_right(e) : inst.edge_left(e);
    }

    bool order_ok(int slot, int edge) const {
        for (int s : sorted_slots) {
            int e = edge_of[s];
            if (e < 0 || s == slot) continue;
            if ((s < slot) != (e < edge) || e == edge) return false;
        }
        return true;
    }

    void emit() {
        Embedding f;
        Weight gain = checked_add(removed_w, -added_w);
        for (int s : sorted_slots) {
            f.slots.push_back(s);
            f.edges.push_back(edge_of[s]);
        }
        (*fn)(f, gain);
    }

    // step: order[idx] is the source pattern vertex of the next matching edge
    void step(size_t idx) {
        int src = order[idx];
        int dst = p.mate(src);
        int gsrc = vertex_of(src);
        int dslot = ConnectionPattern::slot_of(dst);
        if (idx + 1 == order.size()) {
            // closing edge: both sides assigned
            int gdst = vertex_of(dst);
            if (gsrc == gdst) return;
            auto w = inst.weight_of(gsrc, gdst);
            if (!w) return;
            added_w = checked_add(added_w, *w);
            emit();
            added_w -= *w;
            return;
        }
        for (auto& [x, w] : inst.neighbors(gsrc)) {
            int e;
            if ((dst & 1) == 0) {
                e = inst.tour_edge_from(x);       // x is a left endpoint
            } else {
                e = inst.tour_edge_into(x);       // x is a right endpoint
            }
            if (edge_of[dslot] != -1 || !order_ok(dslot, e)) continue;
            edge_of[dslot] = e;
            removed_w = checked_add(removed_w, inst.edge_weight(e));
            added_w = checked_add(added_w, w);
            step(idx + 2);
            removed_w -= inst.edge_weight(e);
            added_w -= w;
            edge_of[dslot] = -1;
        }
    }
};

}  // namespace

void embeddings_of_subpattern(
    const TourInstance& inst, const ConnectionPattern& p, std::span<const int> slots,
    const std::function<void(const Embedding&, Weight)>& fn) {
    if (slots.empty()) return;
    std::vector<int> sorted(slots.begin(), slots.end());
    std::sort(sorted.begin(), sorted.end());
    int smin = sorted[0];

    if (sorted.size() == 1) {
        // slot-edge component: re-adds its own removed edge at every position
        if (p.mate(2 * smin) != 2 * smin + 1)
            throw std::invalid_argument("single-slot class without its slot edge");
        for (int t = 0; t < inst.n(); ++t) {
            Embedding f{{smin}, {t}};
            fn(f, 0);
        }
        return;
    }

    // component cycle order starting at left(smin): matching edge, slot edge,
    // matching edge, ...; entries at even positions are matching-edge sources
    std::vector<int> order;
    int v = 2 * smin;
    for (size_t i = 0; i < sorted.size(); ++i) {
        order.push_back(v);          // source of a matching edge
        int m = p.mate(v);
        order.push_back(m);          // target; slot edge continues from m^1
        v = m ^ 1;
    }
    if (v != 2 * smin)
        throw std::invalid_argument("slot set is not a single sequential class");

    SubWalk st{inst, p, std::move(order), std::vector<int>(p.k(), -1), sorted, 0, 0, &fn};
    for (int t = 0; t < inst.n(); ++t) {
        st.edge_of[smin] = t;
        st.removed_w = inst.edge_weight(t);
        st.step(0);
        st.edge_of[smin] = -1;
    }
}

}  // namespace kopt
