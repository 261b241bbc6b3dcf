#include "kopt/rangesearch.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace kopt {

struct RangeTree::Layer {
    int depth;
    std::vector<int> order;   // point ids sorted by coords[depth]
    std::vector<int> coords;  // aligned coordinate values
    // inner layers: balanced segment tree, one child structure per node
    struct Node {
        int l, r;  // position range [l, r)
        std::unique_ptr<Node> left, right;
        std::unique_ptr<Layer> sub;        // next dimension (inner layers)
        int best = -1;                     // last layer: max point id in range
        std::vector<std::array<int, 3>> top3;  // last layer: per dim, by priority
    };
    std::unique_ptr<Node> root;
};

bool RangeTree::better(int a, int b) const {
    if (b < 0) return true;
    if (a < 0) return false;
    const auto& pa = points_[a];
    const auto& pb = points_[b];
    if (pa.priority != pb.priority) return pa.priority > pb.priority;
    return pa.payload < pb.payload;
}

namespace {

std::pair<int, int> position_range(const std::vector<int>& coords, int lo, int hi) {
    auto a = std::lower_bound(coords.begin(), coords.end(), lo) - coords.begin();
    auto b = std::upper_bound(coords.begin(), coords.end(), hi) - coords.begin();
    return {static_cast<int>(a), static_cast<int>(b)};
}

}  // namespace

RangeTree::RangeTree(std::vector<PrioritizedPoint> points, int dims)
    : dims_(dims), points_(std::move(points)) {
    if (dims_ < 1 || dims_ > kMaxDims) throw std::invalid_argument("range tree dims out of range");
    if (points_.empty()) return;

    auto make_layer = [&](auto&& self, std::vector<int> ids, int depth) -> std::unique_ptr<Layer> {
        auto layer = std::make_unique<Layer>();
        layer->depth = depth;
        std::sort(ids.begin(), ids.end(), [&](int a, int b) {
            if (points_[a].coords[depth] != points_[b].coords[depth])
                return points_[a].coords[depth] < points_[b].coords[depth];
            return a < b;
        });
        layer->order = std::move(ids);
        layer->coords.reserve(layer->order.size());
        for (int id : layer->order) layer->coords.push_back(points_[id].coords[depth]);

        auto build = [&](auto&& rec, int l, int r) -> std::unique_ptr<Layer::Node> {
            auto node = std::make_unique<Layer::Node>();
            node->l = l;
            node->r = r;
            if (depth + 1 < dims_) {
                node->sub = self(self, std::vector<int>(layer->order.begin() + l,
                                                        layer->order.begin() + r),
                                 depth + 1);
            } else {
                node->best = -1;
                node->top3.assign(dims_, {-1, -1, -1});
                // priority-ordered scan of the node's points
                std::vector<int> by_pri(layer->order.begin() + l, layer->order.begin() + r);
                std::sort(by_pri.begin(), by_pri.end(), [&](int a, int b) {
                    if (points_[a].priority != points_[b].priority)
                        return points_[a].priority > points_[b].priority;
                    return points_[a].payload < points_[b].payload;
                });
                node->best = by_pri.empty() ? -1 : by_pri[0];
                for (int d = 0; d < dims_; ++d) {
                    auto& t = node->top3[d];
                    int filled = 0;
                    for (int id : by_pri) {
                        bool dup = false;
                        for (int j = 0; j < filled; ++j)
                            dup |= points_[t[j]].coords[d] == points_[id].coords[d];
                        if (dup) continue;
                        t[filled++] = id;
                        if (filled == 3) break;
                    }
                }
            }
            if (r - l > 1) {
                int mid = (l + r) / 2;
                node->left = rec(rec, l, mid);
                node->right = rec(rec, mid, r);
            }
            return node;
        };
        layer->root = build(build, 0, static_cast<int>(layer->order.size()));
        return layer;
    };

    std::vector<int> ids(points_.size());
    for (size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
    root_ = make_layer(make_layer, std::move(ids), 0);
}

void RangeTree::collect(const Layer& layer, const Box& box, int xdim,
                        std::span<const int> forbidden, int& best) const {
    auto [a, b] = position_range(layer.coords, box.lo[layer.depth], box.hi[layer.depth]);
    if (a >= b) return;

    auto visit_canonical = [&](auto&& rec, const Layer::Node& node) -> void {
        if (a <= node.l && node.r <= b) {
            if (layer.depth + 1 < dims_) {
                collect(*node.sub, box, xdim, forbidden, best);
            } else if (forbidden.empty()) {
                if (better(node.best, best)) best = node.best;
            } else {
                for (int id : node.top3[xdim]) {
                    if (id < 0) break;
                    bool bad = false;
                    for (int f : forbidden) bad |= points_[id].coords[xdim] == f;
                    if (!bad) {
                        if (better(id, best)) best = id;
                        break;
                    }
                }
            }
            return;
        }
        if (node.r - node.l == 1) return;
        int mid = (node.l + node.r) / 2;
        if (a < mid && node.left) rec(rec, *node.left);
        if (b > mid && node.right) rec(rec, *node.right);
    };
    if (layer.root) visit_canonical(visit_canonical, *layer.root);
}

std::optional<PrioritizedPoint> RangeTree::query_max(const Box& box) const {
    if (!root_) return std::nullopt;
    int best = -1;
    collect(*root_, box, 0, {}, best);
    if (best < 0) return std::nullopt;
    return points_[best];
}

std::optional<PrioritizedPoint> RangeTree::query_max_excluding(
    const Box& box, int dim, std::span<const int> forbidden) const {
    if (dim < 0 || dim >= dims_) throw std::invalid_argument("exclusion dim out of range");
    if (forbidden.size() > 2) throw std::invalid_argument("at most two forbidden values");
    if (!root_) return std::nullopt;
    int best = -1;
    collect(*root_, box, dim, forbidden, best);
    if (best < 0) return std::nullopt;
    return points_[best];
}

// ---------------------------------------------------------------------------
// PairStructure

namespace {

struct QNodeData {
    int max_x = -1;  // q ids
    int max_y = -1;
    std::vector<int> by_x;         // q ids sorted by x
    std::vector<int> suffix_by_y;  // argmax of y over by_x[i..]
};

struct ZNode {
    int l, r;
    std::unique_ptr<ZNode> left, right;
    int min_x = -1;  // p ids
    int min_y = -1;
    int wit_p = -1, wit_q = -1;
};

struct YNode {
    int l, r;
    std::unique_ptr<YNode> left, right;
    QNodeData q;
    std::vector<int> p_by_z;
    std::vector<int> zcoords;
    std::unique_ptr<ZNode> zroot;
};

}  // namespace

struct PairStructure::XNode {
    int l, r;
    std::unique_ptr<XNode> left, right;
    std::vector<int> ykeys;  // sorted y values of this node's P u Q points
    std::vector<int> p_ids, q_ids;
    std::unique_ptr<YNode> yroot;
};

namespace {

// positions of members of `ids` (sorted by y) within the y-segment structure
std::unique_ptr<YNode> build_ynode(
    const std::vector<PrioritizedPoint>& P, const std::vector<PrioritizedPoint>& Q,
    const std::vector<int>& p_sorted_y, const std::vector<int>& q_sorted_y,
    const std::vector<int>& ykeys, int l, int r) {
    auto node = std::make_unique<YNode>();
    node->l = l;
    node->r = r;
    int ylo = ykeys[l], yhi = ykeys[r - 1];

    for (int id : q_sorted_y) {
        int y = Q[id].coords[1];
        if (y < ylo || y > yhi) continue;
        node->q.by_x.push_back(id);
        if (node->q.max_x < 0 || Q[id].coords[0] > Q[node->q.max_x].coords[0])
            node->q.max_x = id;
        if (node->q.max_y < 0 || Q[id].coords[1] > Q[node->q.max_y].coords[1])
            node->q.max_y = id;
    }
    std::sort(node->q.by_x.begin(), node->q.by_x.end(),
              [&](int a, int b) { return Q[a].coords[0] < Q[b].coords[0]; });
    node->q.suffix_by_y.assign(node->q.by_x.size(), -1);
    int arg = -1;
    for (int i = static_cast<int>(node->q.by_x.size()) - 1; i >= 0; --i) {
        int id = node->q.by_x[i];
        if (arg < 0 || Q[id].coords[1] > Q[arg].coords[1]) arg = id;
        node->q.suffix_by_y[i] = arg;
    }

    for (int id : p_sorted_y) {
        int y = P[id].coords[1];
        if (y >= ylo && y <= yhi) node->p_by_z.push_back(id);
    }
    std::sort(node->p_by_z.begin(), node->p_by_z.end(),
              [&](int a, int b) { return P[a].coords[2] < P[b].coords[2]; });
    for (int id : node->p_by_z) node->zcoords.push_back(P[id].coords[2]);

    // z segment tree with min-x / min-y aggregates and nested-pair witnesses
    auto build_z = [&](auto&& rec, int zl, int zr) -> std::unique_ptr<ZNode> {
        if (zl >= zr) return nullptr;
        auto zn = std::make_unique<ZNode>();
        zn->l = zl;
        zn->r = zr;
        if (zr - zl == 1) {
            int p = node->p_by_z[zl];
            zn->min_x = zn->min_y = p;
            // any q in this (x,y) node dominating p in both coordinates
            const auto& bx = node->q.by_x;
            int lo = 0, hi = static_cast<int>(bx.size());
            while (lo < hi) {
                int mid = (lo + hi) / 2;
                if (Q[bx[mid]].coords[0] > P[p].coords[0]) hi = mid;
                else lo = mid + 1;
            }
            if (lo < static_cast<int>(bx.size())) {
                int cand = node->q.suffix_by_y[lo];
                if (Q[cand].coords[1] > P[p].coords[1]) {
                    zn->wit_p = p;
                    zn->wit_q = cand;
                }
            }
            return zn;
        }
        int mid = (zl + zr) / 2;
        zn->left = rec(rec, zl, mid);
        zn->right = rec(rec, mid, zr);
        auto pick = [&](int a, int b, int coord) {
            if (a < 0) return b;
            if (b < 0) return a;
            return P[a].coords[coord] <= P[b].coords[coord] ? a : b;
        };
        zn->min_x = pick(zn->left->min_x, zn->right->min_x, 0);
        zn->min_y = pick(zn->left->min_y, zn->right->min_y, 1);
        if (zn->left->wit_p >= 0) {
            zn->wit_p = zn->left->wit_p;
            zn->wit_q = zn->left->wit_q;
        } else {
            zn->wit_p = zn->right->wit_p;
            zn->wit_q = zn->right->wit_q;
        }
        return zn;
    };
    node->zroot = build_z(build_z, 0, static_cast<int>(node->p_by_z.size()));

    if (r - l > 1) {
        int mid = (l + r) / 2;
        node->left = build_ynode(P, Q, p_sorted_y, q_sorted_y, ykeys, l, mid);
        node->right = build_ynode(P, Q, p_sorted_y, q_sorted_y, ykeys, mid, r);
    }
    return node;
}

}  // namespace

PairStructure::PairStructure(std::vector<PrioritizedPoint> p3, std::vector<PrioritizedPoint> q2)
    : p_(std::move(p3)), q_(std::move(q2)) {
    {
        auto pts = p_;
        for (size_t i = 0; i < pts.size(); ++i) {
            pts[i].priority = -pts[i].coords[0];
            pts[i].payload = static_cast<std::int64_t>(i);
        }
        p_min_x_ = RangeTree(std::move(pts), 3);
    }
    {
        auto pts = q_;
        for (size_t i = 0; i < pts.size(); ++i) {
            pts[i].priority = pts[i].coords[0];
            pts[i].payload = static_cast<std::int64_t>(i);
        }
        q_max_x_ = RangeTree(std::move(pts), 2);
    }
    build_joint();
}

void PairStructure::build_joint() {
    std::vector<int> xkeys;
    for (auto& pt : p_) xkeys.push_back(pt.coords[0]);
    for (auto& pt : q_) xkeys.push_back(pt.coords[0]);
    std::sort(xkeys.begin(), xkeys.end());
    xkeys.erase(std::unique(xkeys.begin(), xkeys.end()), xkeys.end());
    if (xkeys.empty()) return;

    std::vector<int> p_sorted_y(p_.size()), q_sorted_y(q_.size());
    for (size_t i = 0; i < p_.size(); ++i) p_sorted_y[i] = static_cast<int>(i);
    for (size_t i = 0; i < q_.size(); ++i) q_sorted_y[i] = static_cast<int>(i);
    std::sort(p_sorted_y.begin(), p_sorted_y.end(),
              [&](int a, int b) { return p_[a].coords[1] < p_[b].coords[1]; });
    std::sort(q_sorted_y.begin(), q_sorted_y.end(),
              [&](int a, int b) { return q_[a].coords[1] < q_[b].coords[1]; });

    auto build_x = [&](auto&& rec, int l, int r) -> std::unique_ptr<XNode> {
        auto node = std::make_unique<XNode>();
        node->l = l;
        node->r = r;
        int xlo = xkeys[l], xhi = xkeys[r - 1];
        for (size_t i = 0; i < p_.size(); ++i)
            if (p_[i].coords[0] >= xlo && p_[i].coords[0] <= xhi)
                node->p_ids.push_back(static_cast<int>(i));
        for (size_t i = 0; i < q_.size(); ++i)
            if (q_[i].coords[0] >= xlo && q_[i].coords[0] <= xhi)
                node->q_ids.push_back(static_cast<int>(i));
        for (int id : node->p_ids) node->ykeys.push_back(p_[id].coords[1]);
        for (int id : node->q_ids) node->ykeys.push_back(q_[id].coords[1]);
        std::sort(node->ykeys.begin(), node->ykeys.end());
        node->ykeys.erase(std::unique(node->ykeys.begin(), node->ykeys.end()),
                          node->ykeys.end());
        if (!node->ykeys.empty()) {
            std::vector<int> psub, qsub;
            for (int id : p_sorted_y)
                if (p_[id].coords[0] >= xlo && p_[id].coords[0] <= xhi) psub.push_back(id);
            for (int id : q_sorted_y)
                if (q_[id].coords[0] >= xlo && q_[id].coords[0] <= xhi) qsub.push_back(id);
            node->yroot = build_ynode(p_, q_, psub, qsub, node->ykeys, 0,
                                      static_cast<int>(node->ykeys.size()));
        }
        if (r - l > 1) {
            int mid = (l + r) / 2;
            node->left = rec(rec, l, mid);
            node->right = rec(rec, mid, r);
        }
        return node;
    };
    xroot_ = build_x(build_x, 0, static_cast<int>(xkeys.size()));
}

std::optional<PairWitness> PairStructure::pair_query_disjoint(
    std::pair<int, int> rx, std::pair<int, int> ryp, std::pair<int, int> ryq,
    std::pair<int, int> rz) const {
    Box bp = Box::full(3);
    bp.lo[0] = rx.first;
    bp.hi[0] = rx.second;
    bp.lo[1] = ryp.first;
    bp.hi[1] = ryp.second;
    bp.lo[2] = rz.first;
    bp.hi[2] = rz.second;
    auto p = p_min_x_.query_max(bp);
    if (!p) return std::nullopt;
    Box bq = Box::full(2);
    bq.lo[0] = rx.first;
    bq.hi[0] = rx.second;
    bq.lo[1] = ryq.first;
    bq.hi[1] = ryq.second;
    auto q = q_max_x_.query_max(bq);
    if (!q) return std::nullopt;
    PrioritizedPoint pp = p_[p->payload];
    PrioritizedPoint qq = q_[q->payload];
    if (pp.coords[0] >= qq.coords[0]) return std::nullopt;
    return PairWitness{pp, qq};
}

namespace {

struct NestedQuery {
    const std::vector<PrioritizedPoint>& P;
    const std::vector<PrioritizedPoint>& Q;
    int ylo, yhi, zlo, zhi;

    struct SideStats {
        int p_min_x = -1, p_min_y = -1;
        int q_max_x = -1, q_max_y = -1;
        int wit_p = -1, wit_q = -1;
    };

    void z_stats(const YNode& ynode, SideStats& s) const {
        auto [a, b] = position_range(ynode.zcoords, zlo, zhi);
        auto visit = [&](auto&& rec, const ZNode& node) -> void {
            if (a <= node.l && node.r <= b) {
                auto pickp = [&](int& slot, int cand, int coord) {
                    if (cand >= 0 &&
                        (slot < 0 || P[cand].coords[coord] < P[slot].coords[coord]))
                        slot = cand;
                };
                pickp(s.p_min_x, node.min_x, 0);
                pickp(s.p_min_y, node.min_y, 1);
                if (s.wit_p < 0 && node.wit_p >= 0) {
                    s.wit_p = node.wit_p;
                    s.wit_q = node.wit_q;
                }
                return;
            }
            if (node.r - node.l == 1) return;
            int mid = (node.l + node.r) / 2;
            if (a < mid && node.left) rec(rec, *node.left);
            if (b > mid && node.right) rec(rec, *node.right);
        };
        if (ynode.zroot) visit(visit, *ynode.zroot);
    }

    // stats over one x-node restricted to the query's y and z ranges; also
    // resolves same-x-node pairs by scanning canonical y-nodes in y order
    SideStats x_stats(const XNode& xnode, std::optional<PairWitness>& found) const {
        SideStats acc;
        if (!xnode.yroot) return acc;
        auto [a, b] = position_range(xnode.ykeys, ylo, yhi);
        SideStats run;  // running stats over earlier canonical y-nodes
        auto visit = [&](auto&& rec, const YNode& node) -> void {
            if (found) return;
            if (a <= node.l && node.r <= b) {
                SideStats cur;
                z_stats(node, cur);
                cur.q_max_x = node.q.max_x;
                cur.q_max_y = node.q.max_y;
                // same (x,y) node: precomputed witness
                if (cur.wit_p >= 0) {
                    found = PairWitness{P[cur.wit_p], Q[cur.wit_q]};
                    return;
                }
                // earlier y-node P against this node's Q: p_y < q_y automatic
                if (run.p_min_x >= 0 && cur.q_max_x >= 0 &&
                    P[run.p_min_x].coords[0] < Q[cur.q_max_x].coords[0]) {
                    found = PairWitness{P[run.p_min_x], Q[cur.q_max_x]};
                    return;
                }
                auto merge_min = [&](int& slot, int cand, int coord) {
                    if (cand >= 0 &&
                        (slot < 0 || P[cand].coords[coord] < P[slot].coords[coord]))
                        slot = cand;
                };
                auto merge_max = [&](int& slot, int cand, int coord) {
                    if (cand >= 0 &&
                        (slot < 0 || Q[cand].coords[coord] > Q[slot].coords[coord]))
                        slot = cand;
                };
                merge_min(run.p_min_x, cur.p_min_x, 0);
                merge_min(run.p_min_y, cur.p_min_y, 1);
                merge_max(run.q_max_x, cur.q_max_x, 0);
                merge_max(run.q_max_y, cur.q_max_y, 1);
                return;
            }
            if (node.r - node.l == 1) return;
            int mid = (node.l + node.r) / 2;
            if (a < mid && node.left) rec(rec, *node.left);
            if (b > mid && node.right) rec(rec, *node.right);
        };
        visit(visit, *xnode.yroot);
        acc = run;
        return acc;
    }
};

}  // namespace

std::optional<PairWitness> PairStructure::pair_query_nested(std::pair<int, int> rx,
                                                            std::pair<int, int> ry,
                                                            std::pair<int, int> rz) const {
    if (!xroot_) return std::nullopt;
    NestedQuery nq{p_, q_, ry.first, ry.second, rz.first, rz.second};
    std::optional<PairWitness> found;

    // canonical x-nodes in increasing x order
    NestedQuery::SideStats run;
    std::vector<int> xkeys;  // reconstruct from root spans
    auto visit = [&](auto&& rec, const XNode& node, int alo, int ahi) -> void {
        if (found) return;
        if (alo <= node.l && node.r <= ahi) {
            auto cur = nq.x_stats(node, found);
            if (found) return;
            // earlier x-node P against this node's Q: p_x < q_x automatic
            if (run.p_min_y >= 0 && cur.q_max_y >= 0 &&
                p_[run.p_min_y].coords[1] < q_[cur.q_max_y].coords[1]) {
                found = PairWitness{p_[run.p_min_y], q_[cur.q_max_y]};
                return;
            }
            auto merge_min = [&](int& slot, int cand, int coord) {
                if (cand >= 0 && (slot < 0 || p_[cand].coords[coord] < p_[slot].coords[coord]))
                    slot = cand;
            };
            auto merge_max = [&](int& slot, int cand, int coord) {
                if (cand >= 0 && (slot < 0 || q_[cand].coords[coord] > q_[slot].coords[coord]))
                    slot = cand;
            };
            merge_min(run.p_min_x, cur.p_min_x, 0);
            merge_min(run.p_min_y, cur.p_min_y, 1);
            merge_max(run.q_max_x, cur.q_max_x, 0);
            merge_max(run.q_max_y, cur.q_max_y, 1);
            return;
        }
        if (node.r - node.l == 1) return;
        int mid = (node.l + node.r) / 2;
        if (alo < mid && node.left) rec(rec, *node.left, alo, ahi);
        if (ahi > mid && node.right) rec(rec, *node.right, alo, ahi);
    };

    // translate rx to key positions using the root's sorted keys: rebuild them
    // from the x-layer point lists (keys are the union of coordinates)
    std::vector<int> keys;
    for (auto& pt : p_) keys.push_back(pt.coords[0]);
    for (auto& pt : q_) keys.push_back(pt.coords[0]);
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    auto [a, b] = position_range(keys, rx.first, rx.second);
    if (a >= b) return std::nullopt;
    visit(visit, *xroot_, a, b);
    return found;
}

}  // namespace kopt
