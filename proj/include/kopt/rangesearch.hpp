#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "kopt/instance.hpp"

namespace kopt {

constexpr int kMaxDims = 6;

struct PrioritizedPoint {
    std::array<int, kMaxDims> coords{};
    Weight priority = 0;
    std::int64_t payload = 0;
};

// Closed integer box, one interval per dimension.
struct Box {
    std::array<int, kMaxDims> lo{};
    std::array<int, kMaxDims> hi{};

    static Box full(int dims) {
        Box b;
        for (int d = 0; d < dims; ++d) {
            b.lo[d] = std::numeric_limits<int>::min();
            b.hi[d] = std::numeric_limits<int>::max();
        }
        return b;
    }
    Box& clamp_low(int d, int v) {
        lo[d] = std::max(lo[d], v);
        return *this;
    }
    Box& clamp_high(int d, int v) {
        hi[d] = std::min(hi[d], v);
        return *this;
    }
};

// Static layered range tree with maximum-priority queries. Ties are broken by
// smaller payload. The exclusion variant stores, per last-layer node and per
// dimension, the top-3 points with pairwise distinct coordinates, so up to two
// forbidden values on one dimension can be skipped without re-descending.
class RangeTree {
public:
    RangeTree() = default;
    RangeTree(std::vector<PrioritizedPoint> points, int dims);

    int dims() const { return dims_; }
    std::size_t size() const { return points_.size(); }

    std::optional<PrioritizedPoint> query_max(const Box& box) const;
    std::optional<PrioritizedPoint> query_max_excluding(const Box& box, int dim,
                                                        std::span<const int> forbidden) const;

private:
    struct Layer;
    int dims_ = 0;
    std::vector<PrioritizedPoint> points_;
    std::unique_ptr<Layer> root_;

    bool better(int a, int b) const;
    void collect(const Layer& layer, const Box& box, int dim,
                 std::span<const int> forbidden, int& best) const;
};

struct PairWitness {
    PrioritizedPoint p;  // 3-d point
    PrioritizedPoint q;  // 2-d point
};

// Lemma-style two-set structure: P three-dimensional, Q two-dimensional, with
// mirrored first-two-layer skeletons. Queries return any witness pair.
class PairStructure {
public:
    PairStructure() = default;
    PairStructure(std::vector<PrioritizedPoint> p3, std::vector<PrioritizedPoint> q2);

    // p in Rx x Ryp x Rz, q in Rx x Ryq, p_x < q_x.
    std::optional<PairWitness> pair_query_disjoint(std::pair<int, int> rx,
                                                   std::pair<int, int> ryp,
                                                   std::pair<int, int> ryq,
                                                   std::pair<int, int> rz) const;

    // p in Rx x Ry x Rz, q in Rx x Ry, p_x < q_x, p_y < q_y.
    std::optional<PairWitness> pair_query_nested(std::pair<int, int> rx,
                                                 std::pair<int, int> ry,
                                                 std::pair<int, int> rz) const;

private:
    struct XNode;
    std::vector<PrioritizedPoint> p_;
    std::vector<PrioritizedPoint> q_;
    std::unique_ptr<XNode> xroot_;
    RangeTree p_min_x_;  // 3-d, priority = -x
    RangeTree q_max_x_;  // 2-d, priority = +x

    void build_joint();
};

}  // namespace kopt
