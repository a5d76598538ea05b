#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gwlab/config.hpp"
#include "gwlab/offspring.hpp"

namespace gwlab {

// Mass scale p and time scale gamma_p of a rescaling scheme.
struct ScalingScheme {
    int p = 1;
    int gamma_p = 1;

    static ScalingScheme proportional(int p) { return {p, p}; }
    // rule: "p" (gamma_p = p), "pow:<e>" (gamma_p = round(p^e)) or "const:<n>".
    static ScalingScheme from_rule(const std::string& rule, int p);
};

struct EstimateRow {
    double key = 0.0;  // lambda, level or grid time, depending on experiment
    double empirical = 0.0;
    double target = 0.0;
    double stderr_ = 0.0;
    std::size_t n = 0;
};

// Monte Carlo / exact-check report. The canonical serialization (volatile
// fields excluded) is bit-identical for a fixed (config, seed) regardless of
// the worker count.
struct ExperimentReport {
    std::string experiment;
    std::map<std::string, std::string> config;  // resolved config, defaults included
    std::uint64_t seed = 0;
    std::vector<EstimateRow> estimates;
    std::map<std::string, double> distances;          // each named for its comparands
    std::map<std::string, std::int64_t> exact_checks;
    bool pass = false;
    double wall_time_s = 0.0;

    // include_volatile=false drops wall time for determinism comparisons.
    std::string to_json_string(bool include_volatile = true) const;
    std::string to_csv() const;
};

// Runs f(i) for i in [0, n) on `workers` threads over contiguous index
// chunks. Exceptions from workers are rethrown on the caller thread. Output
// determinism is the caller's job: write results only to index i's slot.
void parallel_for_indexed(std::size_t n, int workers, const std::function<void(std::size_t)>& f);

// One GWI(mu, nu) population run per replica: Z_0 = [p x], per generation an
// exact compound offspring sum plus one immigration draw. Returns samples of
// p^-1 Y*_{[gamma_p t]}.
std::vector<double> simulate_gwi_marginal(const OffspringLaw& mu, const OffspringLaw& nu, double x,
                                          const ScalingScheme& scheme, double t,
                                          std::size_t replicas, std::uint64_t seed, int workers = 1,
                                          std::int64_t population_cap = 1'000'000'000'000LL);

struct StrongGwiConfig {
    OffspringLaw mu = OffspringLaw::geometric(0.5);
    OffspringLaw nu = OffspringLaw::poisson(1.0);
    double x = 0.0;
    ScalingScheme scheme = ScalingScheme::proportional(100);
    std::string gamma_rule = "p";
    double t = 1.0;
    std::vector<double> lambdas = {0.5, 1.0, 2.0, 4.0};
    std::size_t replicas = 200'000;
    double tolerance = 0.01;
    std::uint64_t seed = 1;
    int workers = 1;

    static StrongGwiConfig from_section(const SectionReader& reader);
    std::map<std::string, std::string> echo() const;
};

// Rescaled GWI marginals against the exact CSBPI Laplace kernel with the
// fixed-law scaling rule (critical mu with variance s^2 -> psi = (s^2/2) l^2,
// nu of mean m -> phi = m l).
ExperimentReport verify_strong_gwi(const StrongGwiConfig& config);

struct RayKnightConfig {
    OffspringLaw mu = OffspringLaw::geometric(0.5);
    std::string dispatching = "sizebiased";
    ScalingScheme scheme = ScalingScheme::proportional(100);
    std::string gamma_rule = "p";
    double level = 1.0;  // a
    std::vector<double> lambdas = {0.5, 1.0, 2.0, 4.0};
    std::size_t replicas = 100'000;
    std::size_t exact_trees = 1'000;
    int exact_spine_depth = 48;
    double tolerance = 0.015;
    std::uint64_t seed = 1;
    int workers = 1;

    static RayKnightConfig from_section(const SectionReader& reader);
    std::map<std::string, std::string> echo() const;
};

// Two checks: the combinatorial occupation identity
// occL(n) + occR(n) = Y*_n + 2 on materialized sin-trees (occupations counted
// from the left/right height processes, Y* from the tree structure), and the
// Y* marginal Laplace transform against the CSBPI kernel with phi induced by
// the dispatching law.
ExperimentReport verify_ray_knight(const RayKnightConfig& config);

struct SizeBiasedConfig {
    OffspringLaw mu = OffspringLaw::geometric(0.5);
    int depth = 1;  // truncation depth k <= 2
    std::vector<int> n_list = {1, 5, 10, 50};
    int offspring_cap = 32;  // K
    double leak_tolerance = 1e-3;
    double final_tv_tolerance = 0.01;
    std::uint64_t seed = 0;  // unused: fully exact

    static SizeBiasedConfig from_section(const SectionReader& reader);
    std::map<std::string, std::string> echo() const;
};

// Exact enumeration of P([tau]_k = shape | height >= n) from iterated
// generating functions against the size-biased GWI truncation law; reports
// the total-variation distance per n and the enumeration leak.
ExperimentReport verify_size_biased(const SizeBiasedConfig& config);

struct SelfConsistencyConfig {
    OffspringLaw mu = OffspringLaw::geometric(0.5);
    std::string dispatching = "sizebiased";
    int p_coarse = 50;
    int p_fine = 100;
    std::string gamma_rule = "p";
    std::vector<double> t_grid = {1.0};
    std::size_t replicas = 10'000;
    double ks_tolerance = 0.05;
    std::uint64_t seed = 1;
    int workers = 1;

    static SelfConsistencyConfig from_section(const SectionReader& reader);
    std::map<std::string, std::string> echo() const;
};

// Cross-resolution check of the rescaled left height marginal: KS distance
// between the empirical laws at p_coarse and p_fine per grid time, plus the
// exact contour/height proximity bounds on every sampled path.
ExperimentReport verify_self_consistency(const SelfConsistencyConfig& config);

struct ExtinctionConfig {
    OffspringLaw mu = OffspringLaw::geometric(0.5);
    std::string gamma_rule = "p";
    double delta = 1.0;
    std::vector<int> p_ladder = {25, 50, 100, 200, 400};
    double floor = 1e-6;  // liminf proxy must stay above this

    static ExtinctionConfig from_section(const SectionReader& reader);
    std::map<std::string, std::string> echo() const;
};

// g^(p)_{[delta gamma_p]}(0)^p for one p.
double check_extinction_condition(const OffspringLaw& mu, const ScalingScheme& scheme,
                                  double delta);

// The p-ladder harness around check_extinction_condition.
ExperimentReport verify_extinction(const ExtinctionConfig& config);

// Piecewise-constant path on a uniform time mesh; `lattice` is the value
// spacing when the path lives on a lattice (rescaled discrete heights).
struct StepPath {
    double dt = 1.0;
    std::vector<double> values;
    std::optional<double> lattice;
};

StepPath rescaled_height_path(std::span<const std::int32_t> heights, const ScalingScheme& scheme);

// Window estimator eps^-1 * integral 1{level < path <= level + eps}. Throws
// ConfigError when eps is below the declared lattice resolution.
double occupation_estimate(const StepPath& path, double level, double eps);

}  // namespace gwlab
