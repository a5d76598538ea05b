#include "gwlab/tree.hpp"

#include <algorithm>
#include <string>

#include "gwlab/errors.hpp"

namespace gwlab {

OrderedTree OrderedTree::from_kids(Kids kids) {
    if (kids.empty()) throw ParseError("nonempty child-count sequence", 0);
    std::int64_t walk = 0;
    for (std::size_t n = 0; n < kids.size(); ++n) {
        if (kids[n] < 0) throw ParseError("nonnegative child count", n);
        walk += kids[n] - 1;
        if (n + 1 < kids.size() && walk < 0)
            throw ParseError("Lukasiewicz-feasible child counts (walk dipped early)", n);
    }
    if (walk != -1) throw ParseError("child counts ending the Lukasiewicz walk at -1", kids.size());
    return OrderedTree(std::move(kids));
}

std::vector<std::int32_t> OrderedTree::heights() const {
    std::vector<std::int32_t> h(kids_.size());
    std::vector<std::int64_t> remaining;  // open ancestors' unconsumed child slots
    for (std::size_t i = 0; i < kids_.size(); ++i) {
        if (i > 0) remaining.back() -= 1;
        h[i] = static_cast<std::int32_t>(remaining.size());
        remaining.push_back(kids_[i]);
        while (!remaining.empty() && remaining.back() == 0) remaining.pop_back();
    }
    return h;
}

std::vector<std::size_t> OrderedTree::subtree_sizes() const {
    std::vector<std::size_t> sizes(kids_.size());
    std::vector<std::size_t> stack;
    for (std::size_t i = kids_.size(); i-- > 0;) {
        std::size_t s = 1;
        for (std::int32_t c = 0; c < kids_[i]; ++c) {
            s += stack.back();
            stack.pop_back();
        }
        sizes[i] = s;
        stack.push_back(s);
    }
    return sizes;
}

std::vector<std::int64_t> OrderedTree::generation_sizes() const {
    const auto h = heights();
    const std::int32_t depth = *std::max_element(h.begin(), h.end());
    std::vector<std::int64_t> z(static_cast<std::size_t>(depth) + 1, 0);
    for (const auto d : h) z[d] += 1;
    return z;
}

OrderedTree OrderedTree::cut(std::size_t u) const {
    if (u >= kids_.size()) throw ParseError("vertex index inside the tree", u);
    const std::size_t span = subtree_sizes()[u];
    Kids out;
    out.reserve(kids_.size() - span + 1);
    out.insert(out.end(), kids_.begin(), kids_.begin() + u);
    out.push_back(0);
    out.insert(out.end(), kids_.begin() + u + span, kids_.end());
    return OrderedTree(std::move(out));
}

OrderedTree OrderedTree::shift(std::size_t u) const {
    if (u >= kids_.size()) throw ParseError("vertex index inside the tree", u);
    const std::size_t span = subtree_sizes()[u];
    return OrderedTree(Kids(kids_.begin() + u, kids_.begin() + u + span));
}

OrderedTree OrderedTree::truncate(std::int32_t depth) const {
    if (depth < 0) throw ParseError("nonnegative truncation depth", 0);
    const auto h = heights();
    Kids out;
    for (std::size_t i = 0; i < kids_.size(); ++i) {
        if (h[i] < depth) {
            out.push_back(kids_[i]);
        } else if (h[i] == depth) {
            out.push_back(0);
        }
    }
    return OrderedTree(std::move(out));
}

OrderedTree OrderedTree::mirror() const {
    const auto sizes = subtree_sizes();
    Kids out;
    out.reserve(kids_.size());
    std::vector<std::size_t> stack{0};
    std::vector<std::size_t> starts;
    while (!stack.empty()) {
        const std::size_t i = stack.back();
        stack.pop_back();
        out.push_back(kids_[i]);
        starts.clear();
        std::size_t child = i + 1;
        for (std::int32_t c = 0; c < kids_[i]; ++c) {
            starts.push_back(child);
            child += sizes[child];
        }
        // Pushed in birth order so the last-born child is expanded first.
        for (const std::size_t s : starts) stack.push_back(s);
    }
    return OrderedTree(std::move(out));
}

std::vector<std::int64_t> lukasiewicz(const OrderedTree& t) {
    std::vector<std::int64_t> walk(t.size() + 1);
    walk[0] = 0;
    for (std::size_t n = 0; n < t.size(); ++n) walk[n + 1] = walk[n] + t.kids()[n] - 1;
    return walk;
}

std::vector<std::int64_t> lukasiewicz(const Forest& f) {
    std::size_t total = 0;
    for (const auto& t : f) total += t.size();
    std::vector<std::int64_t> walk;
    walk.reserve(total + 1);
    walk.push_back(0);
    for (const auto& t : f) {
        for (std::size_t n = 0; n < t.size(); ++n) walk.push_back(walk.back() + t.kids()[n] - 1);
    }
    return walk;
}

OrderedTree tree_from_lukasiewicz(std::span<const std::int64_t> walk) {
    if (walk.size() < 2 || walk.front() != 0) throw ParseError("Lukasiewicz walk starting at 0", 0);
    OrderedTree::Kids kids(walk.size() - 1);
    for (std::size_t n = 0; n + 1 < walk.size(); ++n) {
        const std::int64_t inc = walk[n + 1] - walk[n];
        if (inc < -1) throw ParseError("walk increment >= -1", n + 1);
        kids[n] = static_cast<std::int32_t>(inc + 1);
    }
    return OrderedTree::from_kids(std::move(kids));
}

std::vector<std::int32_t> height_from_walk(std::span<const std::int64_t> walk) {
    if (walk.empty() || walk.front() != 0) throw ParseError("Lukasiewicz walk starting at 0", 0);
    const std::size_t vertices = walk.size() - 1;
    std::vector<std::int32_t> h(vertices);
    if (vertices == 0) return h;
    h[0] = 0;
    std::vector<std::int64_t> minima;  // D_j values that are running minima seen from the right
    for (std::size_t n = 1; n < vertices; ++n) {
        if (walk[n] - walk[n - 1] < -1) throw ParseError("walk increment >= -1", n);
        minima.push_back(walk[n - 1]);
        while (!minima.empty() && minima.back() > walk[n]) minima.pop_back();
        h[n] = static_cast<std::int32_t>(minima.size());
    }
    if (vertices >= 1 && walk[vertices] - walk[vertices - 1] < -1)
        throw ParseError("walk increment >= -1", vertices);
    return h;
}

ContourPath contour_from_height(std::span<const std::int32_t> heights) {
    if (heights.empty() || heights.front() != 0) throw ParseError("height sequence starting at 0", 0);
    const std::size_t m = heights.size();
    for (std::size_t n = 0; n < m; ++n) {
        if (heights[n] < 0) throw ParseError("nonnegative heights", n);
        if (n + 1 < m && heights[n + 1] > heights[n] + 1)
            throw ParseError("height increments <= 1", n + 1);
    }

    ContourPath out;
    out.breakpoints.resize(m);
    for (std::size_t n = 0; n < m; ++n) {
        out.breakpoints[n] = 2 * static_cast<std::int64_t>(n) - heights[n];
    }
    const std::int64_t duration = out.breakpoints[m - 1] + heights[m - 1];
    out.values.resize(static_cast<std::size_t>(duration) + 1);
    out.q.resize(static_cast<std::size_t>(duration) + 1);

    for (std::size_t n = 0; n + 1 < m; ++n) {
        const std::int64_t bn = out.breakpoints[n];
        const std::int64_t bn1 = out.breakpoints[n + 1];
        for (std::int64_t s = bn; s < bn1 - 1; ++s) {
            out.values[s] = static_cast<std::int32_t>(heights[n] - (s - bn));
            out.q[s] = static_cast<std::int64_t>(n);
        }
        const std::int64_t s_up = bn1 - 1;
        if (s_up >= bn) {
            out.values[s_up] = static_cast<std::int32_t>(s_up - bn1 + heights[n + 1]);
            out.q[s_up] = static_cast<std::int64_t>(n);
        }
        out.values[bn1] = heights[n + 1];
        out.q[bn1] = static_cast<std::int64_t>(n + 1);
    }
    // Final descent back to the root.
    const std::int64_t b_last = out.breakpoints[m - 1];
    for (std::int64_t s = b_last; s <= duration; ++s) {
        out.values[s] = static_cast<std::int32_t>(heights[m - 1] - (s - b_last));
        out.q[s] = static_cast<std::int64_t>(m - 1);
    }
    return out;
}

bool check_contour_bounds(std::span<const std::int32_t> heights, const ContourPath& contour) {
    const std::size_t m = heights.size();
    if (m < 2) return true;

    // Prefix maxima over integer s of |C_s - H_q(s)| and |2 q(s) - s|.
    const std::size_t len = contour.values.size();
    std::vector<std::int64_t> pm_gap(len), pm_q2(len);
    std::int64_t g = 0, q2 = 0;
    for (std::size_t s = 0; s < len; ++s) {
        g = std::max<std::int64_t>(
            g, std::llabs(contour.values[s] - heights[static_cast<std::size_t>(contour.q[s])]));
        q2 = std::max<std::int64_t>(q2, std::llabs(2 * contour.q[s] - static_cast<std::int64_t>(s)));
        pm_gap[s] = g;
        pm_q2[s] = q2;
    }

    std::int64_t max_step = 0;  // max |H_{n+1} - H_n| over n <= m_check
    std::int64_t max_h = heights[0];
    for (std::size_t mm = 1; mm + 1 < m; ++mm) {
        max_step = std::max<std::int64_t>(max_step, std::llabs(heights[mm] - heights[mm - 1]));
        max_step = std::max<std::int64_t>(max_step, std::llabs(heights[mm + 1] - heights[mm]));
        max_h = std::max<std::int64_t>(max_h, heights[mm]);
        const std::int64_t bm = contour.breakpoints[mm];
        if (pm_gap[bm] > 1 + max_step) return false;
        // Doubled form of |q(s) - s/2| <= (1/2) max H + 1.
        if (pm_q2[bm] > max_h + 2) return false;
    }
    return true;
}

}  // namespace gwlab
