#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "gwlab/errors.hpp"
#include "gwlab/offspring.hpp"
#include "gwlab/sampling.hpp"
#include "gwlab/sin_tree.hpp"
#include "gwlab/stats.hpp"
#include "gwlab/tree.hpp"
#include "gwlab/tree_io.hpp"
#include "tree_test_util.hpp"

using namespace gwlab;

namespace {

OrderedTree tree(std::initializer_list<std::int32_t> kids) {
    return OrderedTree::from_kids(OrderedTree::Kids(kids));
}

// A small pool of random trees across offspring laws.
std::vector<OrderedTree> random_trees(std::size_t count, std::uint64_t seed) {
    const OffspringLaw laws[] = {
        OffspringLaw::finite_pmf({0.5, 0.0, 0.5}),
        OffspringLaw::geometric(0.5),
        OffspringLaw::finite_pmf({0.4, 0.3, 0.2, 0.1}),
    };
    std::vector<OrderedTree> out;
    out.reserve(count);
    Rng rng(seed);
    while (out.size() < count) {
        const auto& mu = laws[out.size() % 3];
        try {
            out.push_back(sample_gw(mu, rng, 4000));
        } catch (const SizeCapError&) {
            // near-critical laws occasionally blow past the cap; draw again
        }
    }
    return out;
}

SinTree random_sin_tree(Rng& rng, int depth) {
    const auto mu = OffspringLaw::geometric(0.6);  // subcritical, mean 2/3
    const auto r = DispatchingLaw::size_biased(OffspringLaw::geometric(0.5));
    return sample_gwi(mu, r, depth, rng, 1'000'000);
}

}  // namespace

TEST_CASE("lukasiewicz walk") {
    CHECK(lukasiewicz(tree({2, 1, 0, 0})) == std::vector<std::int64_t>{0, 1, 1, 0, -1});
    CHECK(lukasiewicz(tree({0})) == std::vector<std::int64_t>{0, -1});
    const Forest two_leaves{tree({0}), tree({0})};
    CHECK(lukasiewicz(two_leaves) == std::vector<std::int64_t>{0, -1, -2});
}

TEST_CASE("height from walk") {
    const auto d = lukasiewicz(tree({2, 1, 0, 0}));
    CHECK(height_from_walk(d) == std::vector<std::int32_t>{0, 1, 2, 1});
    CHECK(height_from_walk(lukasiewicz(tree({0}))) == std::vector<std::int32_t>{0});

    const std::vector<std::int64_t> malformed{0, 1, -1};
    CHECK_THROWS_AS(height_from_walk(malformed), ParseError);
}

TEST_CASE("height transform equals both oracles, exhaustively to 8 vertices") {
    int trees_seen = 0;
    const int catalan[] = {0, 1, 1, 2, 5, 14, 42, 132, 429};
    for (int n = 1; n <= 8; ++n) {
        int count = 0;
        testutil::enumerate_trees(n, [&](const OrderedTree& t) {
            ++count;
            const auto walk = lukasiewicz(t);
            const auto h = height_from_walk(walk);
            CHECK(h == testutil::heights_by_formula(walk));
            CHECK(h == testutil::heights_by_parents(t));
            CHECK(h == t.heights());
            CHECK(tree_from_lukasiewicz(walk) == t);
        });
        CHECK(count == catalan[n]);
        trees_seen += count;
    }
    CHECK(trees_seen == 626);
}

TEST_CASE("height transform equals the DFS oracle on random trees") {
    for (const auto& t : random_trees(300, 2024)) {
        const auto walk = lukasiewicz(t);
        CHECK(height_from_walk(walk) == t.heights());
        CHECK(height_from_walk(walk) == testutil::heights_by_parents(t));
    }
}

TEST_CASE("height of forests uses the shift rule") {
    const Forest f{tree({2, 0, 0}), tree({0}), tree({1, 0})};
    const auto walk = lukasiewicz(f);
    CHECK(walk.back() == -3);
    const auto h = height_from_walk(walk);
    CHECK(h == std::vector<std::int32_t>{0, 1, 1, 0, 0, 1});
    CHECK(h == testutil::heights_by_formula(walk));
}

TEST_CASE("contour transform example") {
    const std::vector<std::int32_t> h{0, 1, 2, 1};
    const auto c = contour_from_height(h);
    CHECK(c.breakpoints == std::vector<std::int64_t>{0, 1, 2, 5});
    CHECK(c.values == std::vector<std::int32_t>{0, 1, 2, 1, 0, 1, 0});
    CHECK(c.q[0] == 0);
    CHECK(c.q[2] == 2);
    CHECK(c.q[4] == 2);
    CHECK(check_contour_bounds(h, c));
}

TEST_CASE("contour of an all-zero height sequence peaks at zero") {
    // Forest-of-leaves heights: every breakpoint is a tooth top at height 0.
    const std::vector<std::int32_t> h{0, 0, 0, 0};
    const auto c = contour_from_height(h);
    for (const auto b : c.breakpoints) CHECK(c.values[b] == 0);
    CHECK(*std::max_element(c.values.begin(), c.values.end()) == 0);
}

TEST_CASE("contour bounds hold exactly on random trees") {
    for (const auto& t : random_trees(200, 77)) {
        const auto h = height_from_walk(lukasiewicz(t));
        CHECK(check_contour_bounds(h, contour_from_height(h)));
    }
}

TEST_CASE("mirror") {
    CHECK(tree({2, 1, 0, 0}).mirror() == tree({2, 0, 1, 0}));
    const auto chain = tree({1, 1, 1, 0});
    CHECK(chain.mirror() == chain);
    for (const auto& t : random_trees(300, 5150)) {
        CHECK(t.mirror().mirror() == t);
        // Mirroring preserves generation sizes.
        CHECK(t.mirror().generation_sizes() == t.generation_sizes());
    }
}

TEST_CASE("tree algebra") {
    const auto t = tree({2, 1, 0, 0});
    CHECK(t.cut(1) == tree({2, 0, 0}));
    CHECK(t.shift(1) == tree({1, 0}));
    CHECK(t.truncate(0) == tree({0}));
    CHECK(t.truncate(1) == tree({2, 0, 0}));
    CHECK(t.truncate(99) == t);
    CHECK(t.generation_sizes() == std::vector<std::int64_t>{1, 2, 1});
    CHECK_THROWS_AS(t.cut(4), ParseError);
}

TEST_CASE("serialization: LUK golden and round trips") {
    const auto t = tree({2, 1, 0, 0});
    CHECK(to_luk(t) == "LUK v1\n2 1 0 0\n");
    CHECK(from_luk(to_luk(t)) == t);
    CHECK(to_paren(t) == "PAREN v1\n(())()\n");
    CHECK(from_paren(to_paren(t)) == t);
    CHECK(to_paren(tree({0})) == "PAREN v1\n\n");

    for (const auto& rt : random_trees(300, 99)) {
        CHECK(from_luk(to_luk(rt)) == rt);
        CHECK(from_paren(to_paren(rt)) == rt);
    }
}

TEST_CASE("serialization: parse errors carry offsets") {
    try {
        from_luk("LUK v1\n2 x\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 9);
    }
    try {
        from_paren("PAREN v1\n(()\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 12);
    }
    CHECK_THROWS_AS(from_luk("LUK v2\n0\n"), ParseError);
    CHECK_THROWS_AS(from_paren("PAREN v1\n())(\n"), ParseError);
    CHECK_THROWS_AS(from_luk("LUK v1\n2 0\n"), ParseError);  // infeasible walk
    CHECK_THROWS_AS(tree_from_text("GIBBERISH"), ParseError);
}

TEST_CASE("sin-tree serialization round trip") {
    Rng rng(4242);
    for (int i = 0; i < 50; ++i) {
        const auto st = random_sin_tree(rng, 6);
        const auto text = to_sin(st);
        const auto back = from_sin(text);
        CHECK(to_sin(back) == text);
        // depth-6 spine guarantees at least 7 left-part vertices
        CHECK(back.left_height(7) == st.left_height(7));
    }
}

TEST_CASE("stable-domain offspring family") {
    const auto mu = OffspringLaw::stable_domain(0.5, 1.5);
    CHECK(mu.mean() == 1.0);  // critical by construction
    CHECK(mu.second_moment() == std::numeric_limits<double>::infinity());
    CHECK(mu.max_support() == -1);
    CHECK(mu.pmf(0) == doctest::Approx(0.5));
    CHECK(mu.pmf(1) == doctest::Approx(0.25));
    CHECK(mu.pmf(2) == doctest::Approx(0.1875));  // c gamma (gamma-1) / 2
    // g(z) = z + c (1-z)^gamma
    for (double z = 0.0; z <= 1.0; z += 0.1) {
        CHECK(mu.pgf(z) == doctest::Approx(z + 0.5 * std::pow(1.0 - z, 1.5)).epsilon(1e-14));
    }
    // Sampler frequencies against the pmf at the head of the support.
    Rng rng(13);
    const int n = 50000;
    std::map<std::int64_t, int> counts;
    for (int i = 0; i < n; ++i) counts[mu.sample(rng)] += 1;
    for (int k = 0; k <= 4; ++k) {
        const double expect = mu.pmf(k);
        CHECK(std::fabs(counts[k] / double(n) - expect) <
              4.0 * std::sqrt(expect * (1 - expect) / n));
    }

    CHECK_THROWS_AS(OffspringLaw::stable_domain(0.9, 1.5), ConfigError);  // c > 1/gamma
    CHECK_THROWS_AS(OffspringLaw::stable_domain(0.5, 2.5), ConfigError);
    CHECK_THROWS_AS(DispatchingLaw::size_biased(mu), ConfigError);  // no exact sampler
    CHECK(parse_offspring("stabledomain:c=0.5,gamma=1.5").pmf(2) == doctest::Approx(0.1875));
}

TEST_CASE("generating-function iteration") {
    const auto geo = OffspringLaw::geometric(0.5);
    CHECK(gf_iterate(geo, 4, 0.0) == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(gf_iterate(geo, 0, 0.3) == 0.3);
    const auto binary = OffspringLaw::finite_pmf({0.5, 0.0, 0.5});
    CHECK(gf_iterate(binary, 2, 0.0) == doctest::Approx(0.625).epsilon(1e-14));
    // g_n(0) = n/(n+1) for critical geometric
    for (int n = 1; n <= 64; n *= 2) {
        CHECK(gf_iterate(geo, n, 0.0) ==
              doctest::Approx(n / (n + 1.0)).epsilon(1e-12));
    }
}

TEST_CASE("sample_gw: degenerate and exact frequencies") {
    CHECK(sample_gw(OffspringLaw::dirac(0), 7, 10) == tree({0}));

    const auto binary = OffspringLaw::finite_pmf({0.5, 0.0, 0.5});
    int singletons = 0, cherry = 0;
    const int n = 20000;
    Rng rng(314159);
    for (int i = 0; i < n; ++i) {
        try {
            const auto t = sample_gw(binary, rng, 100000);
            if (t.size() == 1) ++singletons;
            if (t.kids() == OrderedTree::Kids{2, 0, 0}) ++cherry;
        } catch (const SizeCapError&) {
            // a tree past the cap is certainly neither shape
        }
    }
    // P(single vertex) = 1/2, P(kids = [2,0,0]) = 1/8; allow 4 sigma.
    CHECK(std::fabs(singletons / double(n) - 0.5) < 4.0 * std::sqrt(0.25 / n));
    CHECK(std::fabs(cherry / double(n) - 0.125) < 4.0 * std::sqrt(0.125 * 0.875 / n));
}

TEST_CASE("sample_gw: critical geometric height tail matches g_n(0)") {
    // P(height >= 50) = 1 - g_50(0) = 1/51 for Geometric(1/2).
    const auto geo = OffspringLaw::geometric(0.5);
    Rng rng(271828);
    const int n = 20000;
    int reached = 0;
    int cap_exceeded = 0;
    for (int i = 0; i < n; ++i) {
        try {
            const auto t = sample_gw(geo, rng, 500000);
            const auto h = t.heights();
            if (*std::max_element(h.begin(), h.end()) >= 50) ++reached;
        } catch (const SizeCapError& e) {
            ++cap_exceeded;
            CHECK(e.partial_size() > 0);
            ++reached;  // trees that huge certainly pass height 50
        }
    }
    const double p = 1.0 / 51.0;
    CHECK(std::fabs(reached / double(n) - p) < 4.0 * std::sqrt(p * (1 - p) / n));
    // The cap-exceeded rate is part of the report: it must be rare but may
    // legitimately be nonzero at this cap.
    CHECK(cap_exceeded < n / 100);
}

TEST_CASE("sample_gwi: bare spine from a one-point table") {
    const auto bare = DispatchingLaw::table({{1, 1, 1.0}});
    const auto st = sample_gwi(OffspringLaw::geometric(0.5), bare, 12, 99u, 100000);
    for (const auto& g : st.generations()) {
        CHECK(g.k == 1);
        CHECK(g.j == 1);
        CHECK(g.left.empty());
        CHECK(g.right.empty());
    }
    const auto y = st.sin_generation_sizes();
    for (const auto v : y) CHECK(v == 0);
    const auto h = st.left_height(12);
    for (std::size_t i = 0; i < h.size(); ++i) CHECK(h[i] == static_cast<std::int32_t>(i));
}

TEST_CASE("sample_gwi: size-biased spine marks") {
    const auto r = DispatchingLaw::size_biased(OffspringLaw::geometric(0.5));
    // P(k) = k 2^{-(k+1)}, j uniform on 1..k.
    CHECK(r.mass(3, 1) == doctest::Approx(std::pow(2.0, -4.0)));
    CHECK(r.mass(3, 2) == doctest::Approx(r.mass(3, 1)));
    CHECK(r.mean_total_minus_one() == doctest::Approx(2.0));
    CHECK(r.mean_left() == doctest::Approx(1.0));

    Rng rng(777);
    std::map<int, int> k_counts;
    const int n = 40000;
    for (int i = 0; i < n; ++i) k_counts[r.sample(rng).first] += 1;
    for (int k = 1; k <= 5; ++k) {
        const double expect = k * std::pow(2.0, -(k + 1.0));
        CHECK(std::fabs(k_counts[k] / double(n) - expect) <
              4.0 * std::sqrt(expect * (1 - expect) / n));
    }
}

TEST_CASE("two-type dispatching from a joint pmf") {
    // rho uniform on {0,1}^2: r(1,1) = r(2,1) = 1/2, r(2,2) = 0.
    const auto r = DispatchingLaw::two_type({{0, 0, 0.25}, {0, 1, 0.25}, {1, 0, 0.25}, {1, 1, 0.25}});
    CHECK(r.mass(1, 1) == doctest::Approx(0.5));
    CHECK(r.mass(2, 1) == doctest::Approx(0.5));
    CHECK(r.mass(2, 2) == doctest::Approx(0.0));
    CHECK(r.mean_total_minus_one() == doctest::Approx(0.5));
}

TEST_CASE("ascending-particle dispatching") {
    const auto mu = OffspringLaw::finite_pmf({0.25, 0.5, 0.25});
    const auto r = DispatchingLaw::ascending_uniform(mu);
    // r(k,l) = mu(k)/(1-mu(0)) / k
    CHECK(r.mass(1, 1) == doctest::Approx(0.5 / 0.75));
    CHECK(r.mass(2, 1) == doctest::Approx(0.25 / 0.75 / 2.0));
    CHECK(r.mass(2, 2) == doctest::Approx(0.25 / 0.75 / 2.0));
}

TEST_CASE("spine-mark jump law matches r by chi-square") {
    // (L increment, L-mirror increment) = (j-1, k-j) with law r(m+m'+1, m+1).
    const auto r = DispatchingLaw::size_biased(OffspringLaw::geometric(0.5));
    Rng rng(1234);
    const int n = 10000;
    std::map<std::pair<int, int>, int> counts;
    for (int i = 0; i < n; ++i) {
        const auto [k, j] = r.sample(rng);
        counts[{j - 1, k - j}] += 1;
    }
    // Pool cells with expected count below 5 into a remainder bucket.
    double stat = 0.0;
    double pooled_expect = n;
    int pooled_count = n;
    int dof = -1;
    for (int m = 0; m <= 12; ++m) {
        for (int mp = 0; mp <= 12; ++mp) {
            const double expect = n * r.mass(m + mp + 1, m + 1);
            if (expect < 5.0) continue;
            const auto it = counts.find({m, mp});
            const int c = it == counts.end() ? 0 : it->second;
            stat += (c - expect) * (c - expect) / expect;
            pooled_expect -= expect;
            pooled_count -= c;
            ++dof;
        }
    }
    if (pooled_expect > 5.0) {
        stat += (pooled_count - pooled_expect) * (pooled_count - pooled_expect) / pooled_expect;
        ++dof;
    }
    CHECK(chi_square_pvalue(stat, dof) > 1e-3);
}

TEST_CASE("left height: one-leaf bush example") {
    std::vector<SinTree::Generation> gens(4);
    gens[0].k = 2;
    gens[0].j = 2;
    gens[0].left.push_back(tree({0}));
    const auto st = SinTree::from_generations(std::move(gens));
    CHECK(st.left_height(5) == std::vector<std::int32_t>{0, 1, 1, 2, 3});

    const auto dec = st.spinal_decomposition(5);
    CHECK(dec.bushes.size() == 1);
    CHECK(dec.alpha[0] == 1);
    CHECK(dec.n_of_p[0] == 1);
    CHECK(dec.p_of_n == std::vector<std::int64_t>{0, 0, 1, 1, 1});
    for (std::size_t n = 0; n < 5; ++n) {
        CHECK(dec.reconstructed_height(n) == st.left_height(5)[n]);
    }
}

TEST_CASE("left height: truncation error reports required depth") {
    const auto bare = DispatchingLaw::table({{1, 1, 1.0}});
    const auto st = sample_gwi(OffspringLaw::dirac(0), bare, 4, 5u, 1000);
    CHECK_THROWS_AS(st.left_height(10), TruncationError);
    try {
        st.left_height(10);
    } catch (const TruncationError& e) {
        CHECK(e.required_depth() >= 9);
    }
}

TEST_CASE("spinal decomposition: identity and sandwich on random sin-trees") {
    Rng rng(31337);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto st = random_sin_tree(rng, 8);
        const std::size_t steps = 30;
        std::vector<std::int32_t> direct;
        try {
            direct = st.left_height(steps);
        } catch (const TruncationError&) {
            continue;  // shallow spine for this draw; identity needs the prefix
        }
        const auto dec = st.spinal_decomposition(steps);
        for (std::size_t n = 0; n < steps; ++n) {
            CHECK(dec.reconstructed_height(n) == direct[n]);
            const std::int64_t p = dec.p_of_n[n];
            const std::int64_t spine_before = static_cast<std::int64_t>(n) - p;
            if (p > 0) {
                REQUIRE(dec.alpha[p - 1].has_value());
                CHECK(*dec.alpha[p - 1] <= spine_before);
            }
            if (p < static_cast<std::int64_t>(dec.alpha.size()) && dec.alpha[p]) {
                CHECK(spine_before <= *dec.alpha[p]);
            }
        }
    }
}

TEST_CASE("bare spine spinal decomposition") {
    const auto bare = DispatchingLaw::table({{1, 1, 1.0}});
    const auto st = sample_gwi(OffspringLaw::geometric(0.5), bare, 10, 5u, 1000);
    const auto dec = st.spinal_decomposition(10);
    CHECK(dec.bushes.empty());
    for (std::size_t n = 0; n < 10; ++n) {
        CHECK(dec.p_of_n[n] == 0);
        CHECK(dec.reconstructed_height(n) == static_cast<std::int32_t>(n));
    }
}

TEST_CASE("mirror sin-tree is an involution and swaps height processes") {
    Rng rng(909090);
    for (int trial = 0; trial < 100; ++trial) {
        const auto st = random_sin_tree(rng, 6);
        const auto mm = st.mirror().mirror();
        CHECK(to_sin(mm) == to_sin(st));
        const auto lh = st.left_height(7);
        CHECK(st.mirror().right_height(7) == lh);
    }
}

TEST_CASE("occupation identity occL + occR = Y* + 2 on sampled sin-trees") {
    Rng rng(555);
    for (int trial = 0; trial < 200; ++trial) {
        const int depth = 10;
        const auto mu = OffspringLaw::geometric(0.5);
        const auto r = DispatchingLaw::size_biased(mu);
        const auto st = sample_gwi(mu, r, depth, rng, 10'000'000, depth);

        // Occupations from the height processes (coding route).
        std::size_t left_n = 1 + depth, right_n = 1 + depth;
        for (const auto& g : st.generations()) {
            for (const auto& b : g.left) left_n += b.size();
            for (const auto& b : g.right) right_n += b.size();
        }
        std::vector<std::int64_t> occ_l(depth, 0), occ_r(depth, 0);
        for (const auto h : st.left_height(left_n)) {
            if (h < depth) occ_l[h] += 1;
        }
        for (const auto h : st.right_height(right_n)) {
            if (h < depth) occ_r[h] += 1;
        }

        // Y* from the structure, occupations from the structure as well.
        const auto y = st.sin_generation_sizes();
        const auto socc_l = st.left_occupations();
        const auto socc_r = st.right_occupations();
        for (int n = 0; n < depth; ++n) {
            CHECK(occ_l[n] + occ_r[n] == y[n] + 2);
            CHECK(socc_l[n] == occ_l[n]);
            CHECK(socc_r[n] == occ_r[n]);
        }
    }
}

TEST_CASE("size-biased Radon-Nikodym identity by exact enumeration") {
    // P(size-biased truncation = shape) from the dispatching construction
    // against P(GW truncation = shape) * Z_n(shape) / mean^n, depths 1 and 2.
    const auto mu = OffspringLaw::geometric(0.5);
    const auto r = DispatchingLaw::size_biased(mu);
    const int cap = 8;

    SUBCASE("depth 1") {
        double mass = 0.0;
        for (int c = 1; c <= cap; ++c) {
            double construction = 0.0;
            for (int j = 1; j <= c; ++j) construction += r.mass(c, j);
            const double rn = mu.pmf(c) * c / mu.mean();
            CHECK(construction == doctest::Approx(rn).epsilon(1e-12));
            mass += construction;
        }
        // size-biased tail past the cap: sum_{k>8} k 2^{-(k+1)} ~ 0.02
        CHECK(mass > 0.95);
    }

    SUBCASE("depth 2") {
        // r-marginal of the spine-child count, via the dispatching masses
        // (the construction route, cached per value).
        std::vector<double> marginal(cap + 1, 0.0);
        for (int v = 1; v <= cap; ++v) {
            for (int j2 = 1; j2 <= v; ++j2) marginal[v] += r.mass(v, j2);
        }

        // Both routes are symmetric in the child counts, so enumerate
        // nondecreasing tuples and weigh by the multinomial multiplicity.
        double mass = 0.0;
        double max_gap = 0.0;
        std::vector<int> tuple;
        std::function<void(int, int)> rec = [&](int c, int min_v) {
            if (static_cast<int>(tuple.size()) == c) {
                // Construction route: the spine passes through one position,
                // whose count follows the r-marginal; the rest are GW.
                double prod_mu = 1.0;
                for (const int v : tuple) prod_mu *= mu.pmf(v);
                double construction = 0.0;
                for (int j = 0; j < c; ++j) {
                    const double mu_j = mu.pmf(tuple[j]);
                    if (mu_j == 0.0) continue;
                    construction += r.mass(c, j + 1) * marginal[tuple[j]] * prod_mu / mu_j;
                }
                double gw = mu.pmf(c) * prod_mu;
                std::int64_t z2 = 0;
                for (const int v : tuple) z2 += v;
                const double rn = gw * static_cast<double>(z2) / (mu.mean() * mu.mean());
                max_gap = std::max(max_gap, std::fabs(construction - rn));

                double mult = std::lgamma(c + 1.0);
                std::size_t i = 0;
                while (i < tuple.size()) {
                    std::size_t k = i;
                    while (k < tuple.size() && tuple[k] == tuple[i]) ++k;
                    mult -= std::lgamma(static_cast<double>(k - i) + 1.0);
                    i = k;
                }
                mass += construction * std::exp(mult);
                return;
            }
            for (int v = min_v; v <= cap; ++v) {
                tuple.push_back(v);
                rec(c, v);
                tuple.pop_back();
            }
        };
        for (int c = 1; c <= cap; ++c) rec(c, 0);
        CHECK(max_gap < 1e-12);
        CHECK(mass > 0.95);
    }
}
