#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace gwlab {

// Rooted ordered tree stored as the depth-first sequence of child counts.
// The canonical representation: kids[n] is the number of children of the
// n-th vertex in lexicographic (DFS) order. Immutable after construction.
class OrderedTree {
public:
    using Kids = std::vector<std::int32_t>;

    // Validates Lukasiewicz feasibility: partial sums of (kids - 1) stay
    // nonnegative before the last step and end at -1.
    static OrderedTree from_kids(Kids kids);

    const Kids& kids() const { return kids_; }
    std::size_t size() const { return kids_.size(); }

    // Depth of each vertex in DFS order, computed by direct stack walk.
    std::vector<std::int32_t> heights() const;
    // Subtree sizes in DFS order.
    std::vector<std::size_t> subtree_sizes() const;

    // Z_n: number of vertices at each generation, indexed by depth.
    std::vector<std::int64_t> generation_sizes() const;

    // [t]_u: keep u, drop its strict descendants. u is a DFS index.
    OrderedTree cut(std::size_t u) const;
    // theta_u(t): the subtree rooted at u.
    OrderedTree shift(std::size_t u) const;
    // [t]_n: vertices of depth <= n.
    OrderedTree truncate(std::int32_t depth) const;

    // Mirror image: children order reversed at every vertex. Involution.
    OrderedTree mirror() const;

    bool operator==(const OrderedTree&) const = default;

private:
    explicit OrderedTree(Kids kids) : kids_(std::move(kids)) {}
    Kids kids_;
};

using Forest = std::vector<OrderedTree>;

// Lukasiewicz path: D_0 = 0, D_{n+1} = D_n + kids_n - 1. Length size+1 and
// final value -1 for a tree; for a forest, each completed tree shifts the
// walk down by one.
std::vector<std::int64_t> lukasiewicz(const OrderedTree& t);
std::vector<std::int64_t> lukasiewicz(const Forest& f);

// Inverse of the tree Lukasiewicz coding.
OrderedTree tree_from_lukasiewicz(std::span<const std::int64_t> walk);

// Height process from a Lukasiewicz walk (tree or forest): H_n counts the
// indices j < n with D_j = min(D_j..D_n). Linear time via a running-minima
// stack; throws ParseError on increments below -1.
std::vector<std::int32_t> height_from_walk(std::span<const std::int64_t> walk);

// Piecewise-linear contour read off a height sequence, sampled at integer
// times, with the breakpoints b_n = 2n - H_n and the index map q.
struct ContourPath {
    std::vector<std::int32_t> values;       // C_s at integer s = 0..duration
    std::vector<std::int64_t> breakpoints;  // b_n, one per height index
    std::vector<std::int64_t> q;            // q(s) for integer s

    std::int64_t duration() const { return static_cast<std::int64_t>(values.size()) - 1; }
};

ContourPath contour_from_height(std::span<const std::int32_t> heights);

// Both contour proximity bounds, checked for every integer m in range:
//   sup_{s<=b_m} |C_s - H_q(s)| <= 1 + max_{n<=m} |H_{n+1} - H_n|
//   sup_{s<=b_m} |q(s) - s/2|   <= (1/2) max_{n<=m} H_n + 1
// Returns true when no violation exists.
bool check_contour_bounds(std::span<const std::int32_t> heights, const ContourPath& contour);

}  // namespace gwlab
