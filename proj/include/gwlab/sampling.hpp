#pragma once

#include <cstdint>
#include <optional>

#include "gwlab/offspring.hpp"
#include "gwlab/rng.hpp"
#include "gwlab/sin_tree.hpp"
#include "gwlab/tree.hpp"

namespace gwlab {

// Galton-Watson tree with offspring law mu, generated depth-first: the child
// counts are drawn i.i.d. until the Lukasiewicz walk hits -1, which is exactly
// the GW law with no conditioning. Throws SizeCapError past size_cap vertices.
OrderedTree sample_gw(const OffspringLaw& mu, std::uint64_t seed, std::size_t size_cap);
OrderedTree sample_gw(const OffspringLaw& mu, Rng& rng, std::size_t size_cap);

// The truncation [tau]_depth of a GW tree, sampled exactly: counts are drawn
// from mu above the cut level and forced to zero on it. Always finite.
OrderedTree sample_gw_truncated(const OffspringLaw& mu, Rng& rng, std::int32_t depth,
                                std::size_t size_cap);

// GWI(mu, r) sin-tree to spine depth M: spine marks (k_i, j_i) i.i.d. from the
// dispatching law, every off-spine child carrying an independent GW(mu) bush.
// When bush_depth_cap is set, the bush at generation i is truncated at depth
// cap - i - 1 so that every level strictly below cap stays exact; coding
// functionals at those levels are unaffected.
SinTree sample_gwi(const OffspringLaw& mu, const DispatchingLaw& r, int spine_depth,
                   std::uint64_t seed, std::size_t size_cap,
                   std::optional<std::int32_t> bush_depth_cap = std::nullopt);
SinTree sample_gwi(const OffspringLaw& mu, const DispatchingLaw& r, int spine_depth, Rng& rng,
                   std::size_t size_cap, std::optional<std::int32_t> bush_depth_cap = std::nullopt);

// Heights of the first `steps` left-part vertices of a GWI(mu, r) sin-tree,
// generated lazily so only the needed prefix is ever materialized.
std::vector<std::int32_t> sample_left_height_prefix(const OffspringLaw& mu,
                                                    const DispatchingLaw& r, std::size_t steps,
                                                    Rng& rng);

}  // namespace gwlab
