#include "gwlab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "gwlab/cumulant.hpp"
#include "gwlab/errors.hpp"
#include "gwlab/sampling.hpp"
#include "gwlab/sin_tree.hpp"
#include "gwlab/stats.hpp"

namespace gwlab {

namespace {

class WallTimer {
public:
    WallTimer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::string fmt_list(const std::vector<double>& vs) {
    std::ostringstream os;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (i) os << ',';
        os << vs[i];
    }
    return os.str();
}

std::string fmt_list(const std::vector<int>& vs) {
    std::ostringstream os;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (i) os << ',';
        os << vs[i];
    }
    return os.str();
}

// Fixed-law scaling rule: a critical mu with variance s^2 converges to the
// quadratic mechanism (gamma_p s^2 / 2p) l^2 (= (s^2/2) l^2 when gamma_p = p);
// a stable-domain mu with g(z) = z + c(1-z)^gamma converges to
// (gamma_p c p^{1-gamma}) l^gamma, matching gamma_p ~ p^{gamma-1}.
BranchingMechanism limit_mechanism_of(const OffspringLaw& mu, const ScalingScheme& scheme) {
    if (std::fabs(mu.mean() - 1.0) > 1e-9)
        throw ConfigError("fixed-law scaling rule needs a critical offspring law (mean 1), got mean " +
                          std::to_string(mu.mean()));
    if (mu.is_stable_domain()) {
        const double gamma = mu.stable_gamma();
        const double c_eff =
            scheme.gamma_p * mu.stable_c() * std::pow(static_cast<double>(scheme.p), 1.0 - gamma);
        return BranchingMechanism::stable(c_eff, gamma);
    }
    const double beta = 0.5 * mu.variance() * scheme.gamma_p / scheme.p;
    if (!(beta > 0.0)) throw ConfigError("fixed-law scaling rule needs a non-degenerate offspring law");
    return BranchingMechanism::quadratic(beta);
}

// Immigrants arrive with mean m per generation: drift rate gamma_p m / p.
double limit_immigration_rate(double mean_per_generation, const ScalingScheme& scheme) {
    const double rate = mean_per_generation * scheme.gamma_p / static_cast<double>(scheme.p);
    if (!std::isfinite(rate))
        throw ConfigError("immigration mean is not finite; no linear-drift limit exists");
    return rate;
}

std::size_t scaled_index(double scale, double t) {
    return static_cast<std::size_t>(std::floor(scale * t + 1e-12));
}

}  // namespace

ScalingScheme ScalingScheme::from_rule(const std::string& rule, int p) {
    if (p < 1) throw ConfigError("scaling scheme: p must be >= 1");
    if (rule == "p") return {p, p};
    if (rule.rfind("pow:", 0) == 0) {
        const double e = std::strtod(rule.c_str() + 4, nullptr);
        const int g = std::max(1, static_cast<int>(std::llround(std::pow(p, e))));
        return {p, g};
    }
    if (rule.rfind("const:", 0) == 0) {
        const int g = std::atoi(rule.c_str() + 6);
        if (g < 1) throw ConfigError("scaling scheme: const gamma must be >= 1");
        return {p, g};
    }
    throw ConfigError("scaling scheme: unknown rule '" + rule + "'");
}

std::string ExperimentReport::to_json_string(bool include_volatile) const {
    nlohmann::json j;
    j["experiment"] = experiment;
    j["config"] = config;
    j["seed"] = seed;
    j["estimates"] = nlohmann::json::array();
    for (const auto& e : estimates) {
        j["estimates"].push_back({{"key", e.key},
                                  {"empirical", e.empirical},
                                  {"target", e.target},
                                  {"stderr", e.stderr_},
                                  {"n", e.n}});
    }
    j["distances"] = distances;
    j["exact_checks"] = exact_checks;
    j["pass"] = pass;
    if (include_volatile) j["wall_time_s"] = wall_time_s;
    return j.dump(2);
}

std::string ExperimentReport::to_csv() const {
    std::ostringstream os;
    os << "key,empirical,target,stderr,n\n";
    os.precision(17);
    for (const auto& e : estimates) {
        os << e.key << ',' << e.empirical << ',' << e.target << ',' << e.stderr_ << ',' << e.n
           << '\n';
    }
    return os.str();
}

void parallel_for_indexed(std::size_t n, int workers, const std::function<void(std::size_t)>& f) {
    if (workers < 1) workers = 1;
    if (workers == 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    const std::size_t w = std::min<std::size_t>(workers, n);
    std::vector<std::exception_ptr> errors(w);
    std::vector<std::thread> threads;
    threads.reserve(w);
    for (std::size_t c = 0; c < w; ++c) {
        const std::size_t begin = n * c / w;
        const std::size_t end = n * (c + 1) / w;
        threads.emplace_back([&, c, begin, end] {
            try {
                for (std::size_t i = begin; i < end; ++i) f(i);
            } catch (...) {
                errors[c] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

std::vector<double> simulate_gwi_marginal(const OffspringLaw& mu, const OffspringLaw& nu, double x,
                                          const ScalingScheme& scheme, double t,
                                          std::size_t replicas, std::uint64_t seed, int workers,
                                          std::int64_t population_cap) {
    if (t < 0.0 || x < 0.0) throw ConfigError("simulate_gwi_marginal: t and x must be >= 0");
    if (replicas < 1) throw ConfigError("simulate_gwi_marginal: need at least one replica");
    const std::size_t generations = scaled_index(scheme.gamma_p, t);
    const std::int64_t start = static_cast<std::int64_t>(std::floor(scheme.p * x + 1e-12));
    std::vector<double> samples(replicas);
    parallel_for_indexed(replicas, workers, [&](std::size_t i) {
        Rng rng(Rng::derive_stream(seed, i));
        std::int64_t z = start;
        for (std::size_t g = 0; g < generations; ++g) {
            z = mu.sample_sum(z, rng) + nu.sample(rng);
            if (z > population_cap) throw SizeCapError("gwi population", static_cast<std::uint64_t>(z));
        }
        samples[i] = static_cast<double>(z) / static_cast<double>(scheme.p);
    });
    return samples;
}

StrongGwiConfig StrongGwiConfig::from_section(const SectionReader& r) {
    StrongGwiConfig c;
    c.mu = parse_offspring(r.get_string("mu", "geometric:q=0.5"));
    c.nu = parse_offspring(r.get_string("nu", "poisson:m=1"));
    c.x = r.get_double("x", c.x);
    c.gamma_rule = r.get_string("gamma_rule", c.gamma_rule);
    c.scheme = ScalingScheme::from_rule(c.gamma_rule, static_cast<int>(r.get_int("p", 100)));
    c.t = r.get_double("t", c.t);
    c.lambdas = r.get_doubles("lambdas", c.lambdas);
    c.replicas = static_cast<std::size_t>(r.get_int("n", static_cast<std::int64_t>(c.replicas)));
    c.tolerance = r.get_double("tolerance", c.tolerance);
    c.seed = r.get_u64("seed", c.seed);
    c.workers = static_cast<int>(r.get_int("workers", c.workers));
    return c;
}

std::map<std::string, std::string> StrongGwiConfig::echo() const {
    return {{"mu", mu.describe()},
            {"nu", nu.describe()},
            {"x", fmt(x)},
            {"p", std::to_string(scheme.p)},
            {"gamma_p", std::to_string(scheme.gamma_p)},
            {"gamma_rule", gamma_rule},
            {"t", fmt(t)},
            {"lambdas", fmt_list(lambdas)},
            {"n", std::to_string(replicas)},
            {"tolerance", fmt(tolerance)},
            {"seed", std::to_string(seed)}};
}

ExperimentReport verify_strong_gwi(const StrongGwiConfig& config) {
    WallTimer timer;
    ExperimentReport report;
    report.experiment = "strong-gwi";
    report.config = config.echo();
    report.seed = config.seed;

    const CumulantSolver solver(limit_mechanism_of(config.mu, config.scheme));
    const double phi_rate = limit_immigration_rate(config.nu.mean(), config.scheme);
    const auto phi = ImmigrationMechanism::linear(phi_rate);

    const auto samples = simulate_gwi_marginal(config.mu, config.nu, config.x, config.scheme,
                                               config.t, config.replicas, config.seed,
                                               config.workers);

    double sup_gap = 0.0;
    for (const double lambda : config.lambdas) {
        const auto est = empirical_laplace(samples, lambda);
        const double target = solver.csbpi_laplace(phi, config.t, lambda, config.x).value;
        sup_gap = std::max(sup_gap, std::fabs(est.value - target));
        report.estimates.push_back({lambda, est.value, target, est.stderr_, samples.size()});
    }
    const double mean = pairwise_mean(samples);
    const double mean_target = config.x + phi_rate * config.t;  // alpha = 0 for the fixed-law rule
    report.distances["laplace_empirical_vs_csbpi_sup_gap"] = sup_gap;
    report.distances["mean_empirical_vs_csbpi"] = std::fabs(mean - mean_target);
    report.distances["mean_stderr"] =
        sample_stddev(samples, mean) / std::sqrt(static_cast<double>(samples.size()));
    report.pass = sup_gap <= config.tolerance;
    report.wall_time_s = timer.seconds();
    return report;
}

RayKnightConfig RayKnightConfig::from_section(const SectionReader& r) {
    RayKnightConfig c;
    c.mu = parse_offspring(r.get_string("mu", "geometric:q=0.5"));
    c.dispatching = r.get_string("r", c.dispatching);
    c.gamma_rule = r.get_string("gamma_rule", c.gamma_rule);
    c.scheme = ScalingScheme::from_rule(c.gamma_rule, static_cast<int>(r.get_int("p", 100)));
    c.level = r.get_double("a", c.level);
    c.lambdas = r.get_doubles("lambdas", c.lambdas);
    c.replicas = static_cast<std::size_t>(r.get_int("n", static_cast<std::int64_t>(c.replicas)));
    c.exact_trees = static_cast<std::size_t>(
        r.get_int("exact_trees", static_cast<std::int64_t>(c.exact_trees)));
    c.exact_spine_depth =
        static_cast<int>(r.get_int("exact_spine_depth", c.exact_spine_depth));
    c.tolerance = r.get_double("tolerance", c.tolerance);
    c.seed = r.get_u64("seed", c.seed);
    c.workers = static_cast<int>(r.get_int("workers", c.workers));
    return c;
}

std::map<std::string, std::string> RayKnightConfig::echo() const {
    return {{"mu", mu.describe()},
            {"r", dispatching},
            {"p", std::to_string(scheme.p)},
            {"gamma_p", std::to_string(scheme.gamma_p)},
            {"gamma_rule", gamma_rule},
            {"a", fmt(level)},
            {"lambdas", fmt_list(lambdas)},
            {"n", std::to_string(replicas)},
            {"exact_trees", std::to_string(exact_trees)},
            {"exact_spine_depth", std::to_string(exact_spine_depth)},
            {"tolerance", fmt(tolerance)},
            {"seed", std::to_string(seed)}};
}

ExperimentReport verify_ray_knight(const RayKnightConfig& config) {
    WallTimer timer;
    ExperimentReport report;
    report.experiment = "ray-knight";
    report.config = config.echo();
    report.seed = config.seed;

    const DispatchingLaw r = parse_dispatching(config.dispatching, config.mu);
    if (!r.uv_continuous_induced())
        throw ConfigError("ray-knight: dispatching law " + config.dispatching +
                          " induces a degenerate one-sided tree (continuity condition fails)");

    const CumulantSolver solver(limit_mechanism_of(config.mu, config.scheme));
    const auto phi =
        ImmigrationMechanism::linear(limit_immigration_rate(r.mean_total_minus_one(), config.scheme));

    // Exact combinatorial occupation identity on materialized sin-trees:
    // occupations counted from the height processes, Y* from the structure.
    const int depth = config.exact_spine_depth;
    std::vector<std::int64_t> violations(config.exact_trees, 0);
    parallel_for_indexed(config.exact_trees, config.workers, [&](std::size_t i) {
        Rng rng(Rng::derive_stream(config.seed ^ 0x5eed5eedULL, i));
        const SinTree st = sample_gwi(config.mu, r, depth, rng, 50'000'000, depth);
        std::size_t left_vertices = 1 + static_cast<std::size_t>(depth);
        std::size_t right_vertices = 1 + static_cast<std::size_t>(depth);
        for (const auto& g : st.generations()) {
            for (const auto& b : g.left) left_vertices += b.size();
            for (const auto& b : g.right) right_vertices += b.size();
        }
        const auto left_h = st.left_height(left_vertices);
        const auto right_h = st.right_height(right_vertices);
        std::vector<std::int64_t> occ_left(depth, 0), occ_right(depth, 0);
        for (const auto h : left_h) {
            if (h < depth) occ_left[h] += 1;
        }
        for (const auto h : right_h) {
            if (h < depth) occ_right[h] += 1;
        }
        const auto y = st.sin_generation_sizes();
        for (int n = 0; n < depth; ++n) {
            if (occ_left[n] + occ_right[n] != y[n] + 2) violations[i] += 1;
        }
    });
    std::int64_t total_violations = 0;
    for (const auto v : violations) total_violations += v;

    // Statistical check: Y* marginal against the CSBPI kernel. Off-spine
    // populations over one generation evolve as an exact compound GW step
    // plus the k-1 immigrants dispatched at the spine.
    const std::size_t generations = scaled_index(config.scheme.gamma_p, config.level);
    std::vector<double> samples(config.replicas);
    parallel_for_indexed(config.replicas, config.workers, [&](std::size_t i) {
        Rng rng(Rng::derive_stream(config.seed, i));
        std::int64_t z = 0;
        for (std::size_t g = 0; g < generations; ++g) {
            z = config.mu.sample_sum(z, rng) + (r.sample(rng).first - 1);
        }
        samples[i] = static_cast<double>(z) / static_cast<double>(config.scheme.p);
    });

    double sup_gap = 0.0;
    for (const double lambda : config.lambdas) {
        const auto est = empirical_laplace(samples, lambda);
        const double target = solver.csbpi_laplace(phi, config.level, lambda, 0.0).value;
        sup_gap = std::max(sup_gap, std::fabs(est.value - target));
        report.estimates.push_back({lambda, est.value, target, est.stderr_, samples.size()});
    }

    report.exact_checks["occupation_violations"] = total_violations;
    report.exact_checks["occupation_trees"] = static_cast<std::int64_t>(config.exact_trees);
    report.exact_checks["occupation_levels"] = depth;
    report.distances["laplace_empirical_vs_csbpi_sup_gap"] = sup_gap;
    report.pass = total_violations == 0 && sup_gap <= config.tolerance;
    report.wall_time_s = timer.seconds();
    return report;
}

SizeBiasedConfig SizeBiasedConfig::from_section(const SectionReader& r) {
    SizeBiasedConfig c;
    c.mu = parse_offspring(r.get_string("mu", "geometric:q=0.5"));
    c.depth = static_cast<int>(r.get_int("depth", c.depth));
    const auto ns = r.get_doubles("n_list", {1, 5, 10, 50});
    c.n_list.clear();
    for (const double n : ns) c.n_list.push_back(static_cast<int>(n));
    c.offspring_cap = static_cast<int>(r.get_int("offspring_cap", c.offspring_cap));
    c.leak_tolerance = r.get_double("leak_tolerance", c.leak_tolerance);
    c.final_tv_tolerance = r.get_double("final_tv_tolerance", c.final_tv_tolerance);
    return c;
}

std::map<std::string, std::string> SizeBiasedConfig::echo() const {
    return {{"mu", mu.describe()},
            {"depth", std::to_string(depth)},
            {"n_list", fmt_list(n_list)},
            {"offspring_cap", std::to_string(offspring_cap)},
            {"leak_tolerance", fmt(leak_tolerance)},
            {"final_tv_tolerance", fmt(final_tv_tolerance)}};
}

namespace {

// Shape class for exact depth-<=2 enumeration: root count c, nondecreasing
// child counts, and the multinomial multiplicity of the orderings it stands
// for.
struct ShapeClass {
    int root_count = 0;
    std::vector<int> child_counts;  // nondecreasing
    double multiplicity = 1.0;
    std::int64_t level_sum = 0;  // number of depth-`depth` vertices
};

void enumerate_multisets(int c, int cap, std::vector<int>& acc,
                         const std::function<void(const std::vector<int>&)>& emit, int min_value) {
    if (static_cast<int>(acc.size()) == c) {
        emit(acc);
        return;
    }
    for (int v = min_value; v <= cap; ++v) {
        acc.push_back(v);
        enumerate_multisets(c, cap, acc, emit, v);
        acc.pop_back();
    }
}

double multinomial_multiplicity(const std::vector<int>& sorted_values) {
    double log_m = std::lgamma(static_cast<double>(sorted_values.size()) + 1.0);
    std::size_t i = 0;
    while (i < sorted_values.size()) {
        std::size_t j = i;
        while (j < sorted_values.size() && sorted_values[j] == sorted_values[i]) ++j;
        log_m -= std::lgamma(static_cast<double>(j - i) + 1.0);
        i = j;
    }
    return std::llround(std::exp(log_m));
}

std::vector<ShapeClass> enumerate_shapes(int depth, int cap) {
    std::vector<ShapeClass> out;
    if (depth == 1) {
        for (int c = 0; c <= cap; ++c) {
            out.push_back({c, {}, 1.0, c});
        }
        return out;
    }
    for (int c = 0; c <= cap; ++c) {
        if (c == 0) {
            out.push_back({0, {}, 1.0, 0});
            continue;
        }
        std::vector<int> acc;
        enumerate_multisets(c, cap, acc, [&](const std::vector<int>& values) {
            ShapeClass s;
            s.root_count = c;
            s.child_counts = values;
            s.multiplicity = multinomial_multiplicity(values);
            for (const int v : values) s.level_sum += v;
            out.push_back(std::move(s));
        }, 0);
    }
    return out;
}

}  // namespace

ExperimentReport verify_size_biased(const SizeBiasedConfig& config) {
    WallTimer timer;
    ExperimentReport report;
    report.experiment = "size-biased";
    report.config = config.echo();
    report.seed = config.seed;

    if (config.depth < 1 || config.depth > 2)
        throw ConfigError("size-biased: truncation depth must be 1 or 2");
    if (config.depth == 2 && config.offspring_cap > 10)
        throw ConfigError("size-biased: depth-2 enumeration needs offspring_cap <= 10");
    if (config.mu.mean() > 1.0 + 1e-12)
        throw ConfigError("size-biased: offspring law must be (sub)critical");

    const int k = config.depth;
    const int cap = config.offspring_cap;
    const OffspringLaw& mu = config.mu;
    const double mu_bar = mu.mean();
    const auto shapes = enumerate_shapes(k, cap);

    // GW probability of one ordered shape of the class (without multiplicity).
    const auto gw_prob = [&](const ShapeClass& s) {
        double p = mu.pmf(s.root_count);
        for (const int v : s.child_counts) p *= mu.pmf(v);
        return p;
    };

    double leak_max = 0.0;
    double prev_tv = 2.0;
    bool monotone = true;
    for (const int n : config.n_list) {
        if (n < k) throw ConfigError("size-biased: every n must be >= depth");
        const double survive_n = 1.0 - gf_iterate(mu, n, 0.0);
        const double extinct_rest = gf_iterate(mu, n - k, 0.0);
        double tv_sum = 0.0, mass_cond = 0.0, mass_limit = 0.0;
        for (const auto& s : shapes) {
            const double base = gw_prob(s) * s.multiplicity;
            const double p_cond =
                base * (1.0 - std::pow(extinct_rest, static_cast<double>(s.level_sum))) / survive_n;
            const double p_limit =
                base * static_cast<double>(s.level_sum) / std::pow(mu_bar, k);
            tv_sum += std::fabs(p_cond - p_limit);
            mass_cond += p_cond;
            mass_limit += p_limit;
        }
        const double leak_cond = 1.0 - mass_cond;
        const double leak_limit = 1.0 - mass_limit;
        leak_max = std::max({leak_max, std::fabs(leak_cond), std::fabs(leak_limit)});
        const double tv = 0.5 * tv_sum + 0.5 * std::fabs(leak_cond - leak_limit);
        if (tv >= prev_tv) monotone = false;
        prev_tv = tv;
        report.estimates.push_back({static_cast<double>(n), tv, 0.0, 0.0, shapes.size()});
    }
    if (leak_max > config.leak_tolerance)
        throw InconclusiveError("size-biased enumeration (raise offspring_cap)", leak_max);

    report.distances["tv_final_conditioned_vs_size_biased"] = prev_tv;
    report.distances["enumeration_leak"] = leak_max;
    report.exact_checks["shape_classes"] = static_cast<std::int64_t>(shapes.size());
    report.exact_checks["tv_strictly_decreasing"] = monotone ? 1 : 0;
    report.pass = monotone && prev_tv <= config.final_tv_tolerance;
    report.wall_time_s = timer.seconds();
    return report;
}

SelfConsistencyConfig SelfConsistencyConfig::from_section(const SectionReader& r) {
    SelfConsistencyConfig c;
    c.mu = parse_offspring(r.get_string("mu", "geometric:q=0.5"));
    c.dispatching = r.get_string("r", c.dispatching);
    c.p_coarse = static_cast<int>(r.get_int("p_coarse", c.p_coarse));
    c.p_fine = static_cast<int>(r.get_int("p_fine", c.p_fine));
    c.gamma_rule = r.get_string("gamma_rule", c.gamma_rule);
    c.t_grid = r.get_doubles("t_grid", c.t_grid);
    c.replicas = static_cast<std::size_t>(r.get_int("n", static_cast<std::int64_t>(c.replicas)));
    c.ks_tolerance = r.get_double("ks_tolerance", c.ks_tolerance);
    c.seed = r.get_u64("seed", c.seed);
    c.workers = static_cast<int>(r.get_int("workers", c.workers));
    return c;
}

std::map<std::string, std::string> SelfConsistencyConfig::echo() const {
    return {{"mu", mu.describe()},
            {"r", dispatching},
            {"p_coarse", std::to_string(p_coarse)},
            {"p_fine", std::to_string(p_fine)},
            {"gamma_rule", gamma_rule},
            {"t_grid", fmt_list(t_grid)},
            {"n", std::to_string(replicas)},
            {"ks_tolerance", fmt(ks_tolerance)},
            {"seed", std::to_string(seed)}};
}

ExperimentReport verify_self_consistency(const SelfConsistencyConfig& config) {
    WallTimer timer;
    ExperimentReport report;
    report.experiment = "self-consistency";
    report.config = config.echo();
    report.seed = config.seed;

    if (config.p_coarse >= config.p_fine)
        throw ConfigError("self-consistency: need p_coarse < p_fine under the same rule");
    const DispatchingLaw r = parse_dispatching(config.dispatching, config.mu);
    if (!r.uv_continuous_induced())
        throw ConfigError("self-consistency: dispatching law " + config.dispatching +
                          " induces a degenerate one-sided tree (continuity condition fails)");

    const double t_max = *std::max_element(config.t_grid.begin(), config.t_grid.end());

    const auto run_resolution = [&](int p, std::uint64_t salt,
                                    std::vector<std::vector<double>>& values_per_t,
                                    std::int64_t& bound_violations) {
        const ScalingScheme scheme = ScalingScheme::from_rule(config.gamma_rule, p);
        const double scale = static_cast<double>(scheme.p) * scheme.gamma_p;
        const std::size_t steps = scaled_index(scale, t_max) + 1;
        values_per_t.assign(config.t_grid.size(), std::vector<double>(config.replicas));
        std::vector<std::int64_t> violations(config.replicas, 0);
        parallel_for_indexed(config.replicas, config.workers, [&](std::size_t i) {
            Rng rng(Rng::derive_stream(config.seed ^ salt, i));
            const auto prefix = sample_left_height_prefix(config.mu, r, steps, rng);
            for (std::size_t ti = 0; ti < config.t_grid.size(); ++ti) {
                const std::size_t idx = scaled_index(scale, config.t_grid[ti]);
                values_per_t[ti][i] =
                    static_cast<double>(prefix[idx]) / static_cast<double>(scheme.gamma_p);
            }
            if (!check_contour_bounds(prefix, contour_from_height(prefix))) violations[i] += 1;
        });
        for (const auto v : violations) bound_violations += v;
    };

    std::vector<std::vector<double>> coarse, fine;
    std::int64_t bound_violations = 0;
    run_resolution(config.p_coarse, 0xc0a23eULL, coarse, bound_violations);
    run_resolution(config.p_fine, 0xf13eULL, fine, bound_violations);

    double max_ks = 0.0;
    for (std::size_t ti = 0; ti < config.t_grid.size(); ++ti) {
        const double ks = ks_two_sample(coarse[ti], fine[ti]);
        max_ks = std::max(max_ks, ks);
        report.estimates.push_back({config.t_grid[ti], ks, 0.0, 0.0, config.replicas});
    }

    report.distances["ks_coarse_vs_fine_max"] = max_ks;
    report.exact_checks["contour_bound_violations"] = bound_violations;
    report.exact_checks["paths_checked"] = static_cast<std::int64_t>(2 * config.replicas);
    report.pass = bound_violations == 0 && max_ks <= config.ks_tolerance;
    report.wall_time_s = timer.seconds();
    return report;
}

ExtinctionConfig ExtinctionConfig::from_section(const SectionReader& r) {
    ExtinctionConfig c;
    c.mu = parse_offspring(r.get_string("mu", "geometric:q=0.5"));
    c.gamma_rule = r.get_string("gamma_rule", c.gamma_rule);
    c.delta = r.get_double("delta", c.delta);
    const auto ps = r.get_doubles("p_ladder", {25, 50, 100, 200, 400});
    c.p_ladder.clear();
    for (const double p : ps) c.p_ladder.push_back(static_cast<int>(p));
    c.floor = r.get_double("floor", c.floor);
    return c;
}

std::map<std::string, std::string> ExtinctionConfig::echo() const {
    return {{"mu", mu.describe()},
            {"gamma_rule", gamma_rule},
            {"delta", fmt(delta)},
            {"p_ladder", fmt_list(p_ladder)},
            {"floor", fmt(floor)}};
}

double check_extinction_condition(const OffspringLaw& mu, const ScalingScheme& scheme,
                                  double delta) {
    if (!(delta > 0.0)) throw ConfigError("extinction condition: delta must be > 0");
    const int n = static_cast<int>(scaled_index(scheme.gamma_p, delta));
    const double g = gf_iterate(mu, n, 0.0);
    return std::pow(g, scheme.p);
}

ExperimentReport verify_extinction(const ExtinctionConfig& config) {
    WallTimer timer;
    ExperimentReport report;
    report.experiment = "extinction";
    report.config = config.echo();
    report.seed = 0;

    double tail_min = 1.0;
    for (const int p : config.p_ladder) {
        const ScalingScheme scheme = ScalingScheme::from_rule(config.gamma_rule, p);
        const double v = check_extinction_condition(config.mu, scheme, config.delta);
        report.estimates.push_back({static_cast<double>(p), v, 0.0, 0.0, 1});
    }
    // liminf proxy: the running minimum over the upper half of the ladder.
    const std::size_t half = report.estimates.size() / 2;
    for (std::size_t i = half; i < report.estimates.size(); ++i) {
        tail_min = std::min(tail_min, report.estimates[i].empirical);
    }
    report.distances["liminf_proxy"] = tail_min;
    report.pass = tail_min > config.floor;
    report.wall_time_s = timer.seconds();
    return report;
}

StepPath rescaled_height_path(std::span<const std::int32_t> heights, const ScalingScheme& scheme) {
    StepPath path;
    path.dt = 1.0 / (static_cast<double>(scheme.p) * scheme.gamma_p);
    path.lattice = 1.0 / scheme.gamma_p;
    path.values.resize(heights.size());
    for (std::size_t i = 0; i < heights.size(); ++i) {
        path.values[i] = static_cast<double>(heights[i]) / scheme.gamma_p;
    }
    return path;
}

double occupation_estimate(const StepPath& path, double level, double eps) {
    if (!(eps > 0.0)) throw ConfigError("occupation estimator: eps must be > 0");
    if (path.lattice && eps < *path.lattice - 1e-12)
        throw ConfigError("occupation estimator: eps below the lattice resolution " +
                          std::to_string(*path.lattice));
    // Window boundaries snapped well below the lattice spacing, so rounding in
    // level + eps can never drop an exact lattice point from the window.
    const double tol = path.lattice ? *path.lattice * 1e-9 : 0.0;
    std::int64_t hits = 0;
    for (const double v : path.values) {
        if (v > level + tol && v <= level + eps + tol) ++hits;
    }
    return static_cast<double>(hits) * path.dt / eps;
}

}  // namespace gwlab
