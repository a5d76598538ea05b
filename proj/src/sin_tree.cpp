#include "gwlab/sin_tree.hpp"

#include <algorithm>

#include "gwlab/errors.hpp"

namespace gwlab {

SinTree SinTree::from_generations(std::vector<Generation> gens) {
    for (std::size_t i = 0; i < gens.size(); ++i) {
        const auto& g = gens[i];
        if (g.j < 1 || g.j > g.k)
            throw ConfigError("sin-tree generation " + std::to_string(i) + ": need 1 <= j <= k");
        if (g.left.size() != static_cast<std::size_t>(g.j - 1) ||
            g.right.size() != static_cast<std::size_t>(g.k - g.j))
            throw ConfigError("sin-tree generation " + std::to_string(i) +
                              ": bush counts must match (j-1, k-j)");
    }
    return SinTree(std::move(gens));
}

SinTree SinTree::mirror() const {
    std::vector<Generation> out;
    out.reserve(gens_.size());
    for (const auto& g : gens_) {
        Generation m;
        m.k = g.k;
        m.j = g.k - g.j + 1;
        m.left.reserve(g.right.size());
        for (auto it = g.right.rbegin(); it != g.right.rend(); ++it) m.left.push_back(it->mirror());
        m.right.reserve(g.left.size());
        for (auto it = g.left.rbegin(); it != g.left.rend(); ++it) m.right.push_back(it->mirror());
        out.push_back(std::move(m));
    }
    return SinTree(std::move(out));
}

std::vector<std::int64_t> SinTree::left_sibling_counts() const {
    std::vector<std::int64_t> L(gens_.size() + 1, 0);
    for (std::size_t i = 0; i < gens_.size(); ++i) L[i + 1] = L[i] + (gens_[i].j - 1);
    return L;
}

std::vector<std::int32_t> SinTree::left_height(std::size_t steps) const {
    std::vector<std::int32_t> out;
    out.reserve(steps);
    if (steps == 0) return out;
    out.push_back(0);  // the root u*_0
    for (std::size_t i = 0; i < gens_.size() && out.size() < steps; ++i) {
        const std::int32_t base = static_cast<std::int32_t>(i) + 1;
        for (const auto& bush : gens_[i].left) {
            for (const auto h : bush.heights()) {
                out.push_back(base + h);
                if (out.size() == steps) return out;
            }
        }
        out.push_back(base);  // u*_{i+1}
        if (out.size() == steps) return out;
    }
    if (out.size() < steps) {
        throw TruncationError(steps,
                              spine_depth() + static_cast<int>(steps - out.size()));
    }
    return out;
}

std::vector<std::int32_t> SinTree::right_height(std::size_t steps) const {
    return mirror().left_height(steps);
}

std::vector<std::int64_t> SinTree::sin_generation_sizes() const {
    const std::size_t levels = gens_.size();
    std::vector<std::int64_t> y(levels, 0);
    for (std::size_t i = 0; i < levels; ++i) {
        const auto add_bush = [&](const OrderedTree& bush) {
            const auto z = bush.generation_sizes();
            for (std::size_t d = 0; d < z.size(); ++d) {
                const std::size_t level = i + 1 + d;
                if (level < levels) y[level] += z[d];
            }
        };
        for (const auto& b : gens_[i].left) add_bush(b);
        for (const auto& b : gens_[i].right) add_bush(b);
    }
    return y;
}

std::vector<std::int64_t> SinTree::occupations_of(bool left_side) const {
    const std::size_t levels = gens_.size();
    std::vector<std::int64_t> occ(levels, 1);  // the spine vertex at each level
    for (std::size_t i = 0; i < levels; ++i) {
        const Forest& side = left_side ? gens_[i].left : gens_[i].right;
        for (const auto& bush : side) {
            const auto z = bush.generation_sizes();
            for (std::size_t d = 0; d < z.size(); ++d) {
                const std::size_t level = i + 1 + d;
                if (level < levels) occ[level] += z[d];
            }
        }
    }
    return occ;
}

std::vector<std::int64_t> SinTree::left_occupations() const { return occupations_of(true); }

std::vector<std::int64_t> SinTree::right_occupations() const { return occupations_of(false); }

std::int32_t SinTree::SpinalDecomposition::reconstructed_height(std::size_t n) const {
    const std::int64_t p = p_of_n.at(n);
    const std::int64_t bush_h =
        p < static_cast<std::int64_t>(bush_heights.size()) ? bush_heights[p] : 0;
    return static_cast<std::int32_t>(static_cast<std::int64_t>(n) - p + bush_h);
}

SinTree::SpinalDecomposition SinTree::spinal_decomposition(std::size_t steps) const {
    SpinalDecomposition out;
    for (const auto& g : gens_) {
        for (const auto& b : g.left) out.bushes.push_back(b);
    }
    out.walk = lukasiewicz(out.bushes);
    out.bush_heights = height_from_walk(out.walk);
    out.left_sibling_counts = left_sibling_counts();

    const std::size_t bush_vertices = out.bush_heights.size();
    // Left part materialized within the truncation: root, spine vertices
    // u*_1..u*_M and every left-bush vertex.
    const std::size_t available = 1 + gens_.size() + bush_vertices;
    if (steps > available) {
        throw TruncationError(steps, spine_depth() + static_cast<int>(steps - available));
    }

    // alpha(p) via two pointers: both the threshold 1 - min walk and L are
    // monotone.
    const auto& L = out.left_sibling_counts;
    out.alpha.resize(bush_vertices + 1);
    std::int64_t running_min = 0;
    std::size_t k = 0;
    for (std::size_t p = 0; p <= bush_vertices; ++p) {
        running_min = std::min(running_min, out.walk[p]);
        const std::int64_t threshold = 1 - running_min;
        while (k < L.size() && L[k] < threshold) ++k;
        if (k < L.size()) {
            out.alpha[p] = static_cast<std::int64_t>(k);
        } else {
            out.alpha[p] = std::nullopt;
            k = L.size();  // stays saturated; thresholds only grow
        }
    }

    out.n_of_p.resize(bush_vertices);
    for (std::size_t p = 0; p < bush_vertices; ++p) {
        if (out.alpha[p]) out.n_of_p[p] = static_cast<std::int64_t>(p) + *out.alpha[p];
    }

    out.p_of_n.resize(steps);
    std::size_t p = 0;
    for (std::size_t n = 0; n < steps; ++n) {
        while (p < bush_vertices && out.n_of_p[p] && *out.n_of_p[p] < static_cast<std::int64_t>(n)) {
            ++p;
        }
        out.p_of_n[n] = static_cast<std::int64_t>(p);
    }
    return out;
}

}  // namespace gwlab
