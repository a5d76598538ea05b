#include "gwlab/sampling.hpp"

#include <algorithm>

#include "gwlab/errors.hpp"

namespace gwlab {

OrderedTree sample_gw(const OffspringLaw& mu, std::uint64_t seed, std::size_t size_cap) {
    Rng rng(seed);
    return sample_gw(mu, rng, size_cap);
}

OrderedTree sample_gw(const OffspringLaw& mu, Rng& rng, std::size_t size_cap) {
    OrderedTree::Kids kids;
    std::int64_t pending = 1;
    while (pending > 0) {
        const std::int64_t k = mu.sample(rng);
        kids.push_back(static_cast<std::int32_t>(k));
        if (kids.size() > size_cap) throw SizeCapError("gw tree", kids.size());
        pending += k - 1;
    }
    return OrderedTree::from_kids(std::move(kids));
}

OrderedTree sample_gw_truncated(const OffspringLaw& mu, Rng& rng, std::int32_t depth,
                                std::size_t size_cap) {
    OrderedTree::Kids kids;
    std::vector<std::int64_t> remaining;  // unconsumed child slots per open ancestor
    const std::int64_t k0 = depth > 0 ? mu.sample(rng) : 0;
    kids.push_back(static_cast<std::int32_t>(k0));
    remaining.push_back(k0);
    for (;;) {
        while (!remaining.empty() && remaining.back() == 0) remaining.pop_back();
        if (remaining.empty()) break;
        remaining.back() -= 1;
        const std::int32_t vertex_depth = static_cast<std::int32_t>(remaining.size());
        const std::int64_t k = vertex_depth < depth ? mu.sample(rng) : 0;
        kids.push_back(static_cast<std::int32_t>(k));
        if (kids.size() > size_cap) throw SizeCapError("truncated gw tree", kids.size());
        remaining.push_back(k);
    }
    return OrderedTree::from_kids(std::move(kids));
}

SinTree sample_gwi(const OffspringLaw& mu, const DispatchingLaw& r, int spine_depth,
                   std::uint64_t seed, std::size_t size_cap,
                   std::optional<std::int32_t> bush_depth_cap) {
    Rng rng(seed);
    return sample_gwi(mu, r, spine_depth, rng, size_cap, bush_depth_cap);
}

SinTree sample_gwi(const OffspringLaw& mu, const DispatchingLaw& r, int spine_depth, Rng& rng,
                   std::size_t size_cap, std::optional<std::int32_t> bush_depth_cap) {
    if (spine_depth < 1) throw ConfigError("sample_gwi: spine depth must be >= 1");
    if (!bush_depth_cap && mu.mean() > 1.0)
        throw ConfigError("sample_gwi: supercritical mu needs a bush depth cap");
    std::vector<SinTree::Generation> gens;
    gens.reserve(spine_depth);
    std::size_t total = static_cast<std::size_t>(spine_depth) + 1;
    for (int i = 0; i < spine_depth; ++i) {
        const auto [k, j] = r.sample(rng);
        SinTree::Generation g;
        g.k = k;
        g.j = j;
        const auto sample_bush = [&]() {
            if (total >= size_cap) throw SizeCapError("gwi sin-tree", total);
            OrderedTree bush =
                bush_depth_cap
                    ? sample_gw_truncated(mu, rng, std::max(*bush_depth_cap - i - 1, 0),
                                          size_cap - total)
                    : sample_gw(mu, rng, size_cap - total);
            total += bush.size();
            return bush;
        };
        for (int b = 1; b < j; ++b) g.left.push_back(sample_bush());
        for (int b = j; b < k; ++b) g.right.push_back(sample_bush());
        gens.push_back(std::move(g));
    }
    return SinTree::from_generations(std::move(gens));
}

std::vector<std::int32_t> sample_left_height_prefix(const OffspringLaw& mu,
                                                    const DispatchingLaw& r, std::size_t steps,
                                                    Rng& rng) {
    std::vector<std::int32_t> out;
    out.reserve(steps);
    if (steps == 0) return out;
    out.push_back(0);
    std::vector<std::int64_t> remaining;
    for (std::int32_t i = 0; out.size() < steps; ++i) {
        const auto [k, j] = r.sample(rng);
        const std::int32_t base = i + 1;
        for (int b = 1; b < j && out.size() < steps; ++b) {
            // Stream one GW bush depth-first, emitting heights as it grows.
            remaining.clear();
            std::int64_t k0 = mu.sample(rng);
            out.push_back(base);
            remaining.push_back(k0);
            while (out.size() < steps) {
                while (!remaining.empty() && remaining.back() == 0) remaining.pop_back();
                if (remaining.empty()) break;
                remaining.back() -= 1;
                const std::int32_t d = static_cast<std::int32_t>(remaining.size());
                out.push_back(base + d);
                remaining.push_back(mu.sample(rng));
            }
        }
        if (out.size() < steps) out.push_back(base);  // u*_{i+1}
    }
    return out;
}

}  // namespace gwlab
