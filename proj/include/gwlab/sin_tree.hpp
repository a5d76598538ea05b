#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gwlab/tree.hpp"

namespace gwlab {

// Tree with a single infinite line of descent, materialized to a finite spine
// depth M. Generation i of the spine records the total number of children k_i
// of the spine vertex, the rank j_i of the spine child, and the off-spine
// bushes split into the j_i - 1 left and k_i - j_i right subtrees in birth
// order. Immutable after construction.
class SinTree {
public:
    struct Generation {
        std::int32_t k = 1;
        std::int32_t j = 1;
        Forest left;   // bushes at ranks 1 .. j-1, in birth order
        Forest right;  // bushes at ranks j+1 .. k, in birth order
    };

    static SinTree from_generations(std::vector<Generation> gens);

    int spine_depth() const { return static_cast<int>(gens_.size()); }
    const std::vector<Generation>& generations() const { return gens_; }

    // Mirror image: swaps sides, reverses bush lists and mirrors every bush;
    // j_i becomes k_i - j_i + 1. Involution.
    SinTree mirror() const;

    // L_n = sum_{i<n} (j_i - 1): cumulated left spine-sibling counts,
    // n = 0..M.
    std::vector<std::int64_t> left_sibling_counts() const;

    // Heights of the first `steps` vertices of the left part in lexicographic
    // order. Throws TruncationError when the spine is too shallow.
    std::vector<std::int32_t> left_height(std::size_t steps) const;
    std::vector<std::int32_t> right_height(std::size_t steps) const;

    // Y*_n: number of off-spine (non-mutant) vertices at each generation
    // n = 0..M-1. Bushes deeper than the spine truncation still contribute to
    // these levels, so the counts are exact.
    std::vector<std::int64_t> sin_generation_sizes() const;

    // Occupation counts of the left/right height processes per level
    // n = 0..M-1: the number of left-part (right-part) vertices at height n.
    // Complete for every level below the spine truncation.
    std::vector<std::int64_t> left_occupations() const;
    std::vector<std::int64_t> right_occupations() const;

    // Spinal decomposition of the left part along the infinite line of
    // descent, materialized for the first `steps` left-part vertices.
    struct SpinalDecomposition {
        Forest bushes;                           // f(t): left bushes in lex order
        std::vector<std::int64_t> walk;          // D(f)
        std::vector<std::int32_t> bush_heights;  // H(f)
        std::vector<std::int64_t> left_sibling_counts;  // L_0..L_M
        // alpha(p): root generation threshold for the p-th bush vertex;
        // nullopt when the threshold is not reached within the truncation.
        std::vector<std::optional<std::int64_t>> alpha;
        std::vector<std::optional<std::int64_t>> n_of_p;  // n(p) = p + alpha(p)
        std::vector<std::int64_t> p_of_n;                 // p(n), n = 0..steps-1

        // Reconstruction: n - p(n) + H_{p(n)}(f), with height 0 past the
        // last materialized bush vertex.
        std::int32_t reconstructed_height(std::size_t n) const;
    };

    SpinalDecomposition spinal_decomposition(std::size_t steps) const;

private:
    explicit SinTree(std::vector<Generation> gens) : gens_(std::move(gens)) {}

    std::vector<std::int64_t> occupations_of(bool left_side) const;

    std::vector<Generation> gens_;
};

}  // namespace gwlab
