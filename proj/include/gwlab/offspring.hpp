#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gwlab/rng.hpp"

namespace gwlab {

// Offspring distribution mu on {0,1,2,...}: a finite pmf, Geometric(q) with
// pmf q(1-q)^k, Poisson(m), or the critical heavy-tailed family with
// generating function g(z) = z + c(1-z)^gamma (gamma in (1,2), c in (0,1/gamma]),
// which lies in the domain of attraction of a spectrally positive gamma-stable
// law. Mean and second moment are exact per family.
class OffspringLaw {
public:
    static OffspringLaw finite_pmf(std::vector<double> masses);
    static OffspringLaw geometric(double q);
    static OffspringLaw poisson(double m);
    static OffspringLaw dirac(int k);
    static OffspringLaw stable_domain(double c, double gamma);

    double mean() const { return mean_; }
    double second_moment() const;
    double variance() const { return second_moment() - mean_ * mean_; }

    double pmf(std::int64_t k) const;
    // Generating function g(z) = E[z^K] on [0, 1].
    double pgf(double z) const;

    std::int64_t sample(Rng& rng) const;

    // Sum of `count` independent draws. Exact compound laws for Geometric
    // (negative binomial) and Poisson (additivity); finite pmfs fall back to
    // per-individual draws and throw SizeCapError past `individual_cap`.
    std::int64_t sample_sum(std::int64_t count, Rng& rng,
                            std::int64_t individual_cap = 10'000'000) const;

    bool is_finite_support() const { return std::holds_alternative<Finite>(form_); }
    bool is_geometric() const { return std::holds_alternative<Geometric>(form_); }
    bool is_poisson() const { return std::holds_alternative<Poisson>(form_); }
    bool is_stable_domain() const { return std::holds_alternative<StableDomain>(form_); }
    // Tail parameters of the stable-domain family.
    double stable_gamma() const;
    double stable_c() const;
    // Largest k with positive mass, or -1 when the support is unbounded.
    int max_support() const;

    std::string describe() const;

private:
    struct Finite {
        std::vector<double> masses;
        std::vector<double> cdf;
    };
    struct Geometric {
        double q;
    };
    struct Poisson {
        double m;
    };
    struct StableDomain {
        double c;
        double gamma;
    };
    using Form = std::variant<Finite, Geometric, Poisson, StableDomain>;

    explicit OffspringLaw(Form form);

    Form form_;
    double mean_ = 0.0;
};

// n-fold iterate of the generating function: g_n(z), g_0 = identity.
double gf_iterate(const OffspringLaw& mu, int n, double z);

// Dispatching distribution r on {(k,j): 1 <= j <= k}: the law of (total
// children, spine-child rank) at each spine vertex of a GWI tree.
class DispatchingLaw {
public:
    // Explicit table of (k, j) -> mass; masses must sum to 1 within 1e-12.
    static DispatchingLaw table(std::vector<std::tuple<int, int, double>> entries);
    // r(k,j) = mu(k)/mean(mu): the size-biased tree of mu.
    static DispatchingLaw size_biased(OffspringLaw mu);
    // Two-type construction from a joint pmf rho(k,l) on N^2:
    // r(k,l) = (1/m) sum_{j=l}^{k} rho(j, k-j), m = sum_k k rho(k, N).
    static DispatchingLaw two_type(const std::vector<std::tuple<int, int, double>>& rho);
    // Ascending-particle construction: r(k,l) = mu(k)/(1-mu(0)) * pi_k(l) with
    // pi_k given per k as masses over 1..k.
    static DispatchingLaw ascending(OffspringLaw mu, std::map<int, std::vector<double>> ladders);
    // Ascending particle with the uniform ladder pi_k = Uniform{1..k}.
    static DispatchingLaw ascending_uniform(OffspringLaw mu);

    std::pair<int, int> sample(Rng& rng) const;  // (k, j)
    double mass(int k, int j) const;

    // Moments of the spine marks: E[k-1] (induced immigration mean),
    // E[j-1] (left side) and E[k-j] (right side).
    double mean_total_minus_one() const;
    double mean_left() const;
    double mean_right() const;

    // Continuity of the inverse subordinators for the fixed-law scaling rule:
    // both sides must carry immigrants.
    bool uv_continuous_induced() const { return mean_left() > 0.0 && mean_right() > 0.0; }

    std::string describe() const;

private:
    struct Table {
        std::vector<std::tuple<int, int, double>> entries;  // (k, j, mass)
        std::vector<double> cdf;
    };
    // Unbounded-support laws with a uniform rank given k: the size-biased law
    // (k weighted by k mu(k)/mean) and the uniform ascending particle
    // (k ~ mu conditioned on k >= 1).
    struct UniformRank {
        enum class Kind { SizeBiased, AscendingUniform };
        OffspringLaw mu;
        Kind kind;
    };
    using Form = std::variant<Table, UniformRank>;

    DispatchingLaw(Form form, std::string description);

    Form form_;
    std::string description_;
};

// Offspring-law literals used by the CLI and config files:
//   geometric:q=<f> | poisson:m=<f> | delta:k=<n> | pmf:<m0>,<m1>,...
OffspringLaw parse_offspring(const std::string& literal);

// Dispatching literals:
//   sizebiased (of the given mu) | table:k:j:m;... | twotype:k:l:m;... |
//   ascending-uniform (of the given mu)
DispatchingLaw parse_dispatching(const std::string& literal, const OffspringLaw& mu);

}  // namespace gwlab
