// Acceptance suite: one numbered criterion per run line, exit code = number of
// failed criteria. `--only N` restricts to a single criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "gwlab/cumulant.hpp"
#include "gwlab/errors.hpp"
#include "gwlab/experiments.hpp"
#include "gwlab/sampling.hpp"
#include "gwlab/stats.hpp"
#include "gwlab/tree.hpp"
#include "gwlab/tree_io.hpp"
#include "tree_test_util.hpp"

using namespace gwlab;

namespace {

int g_failures = 0;

class Criterion {
public:
    Criterion(int id, std::string name) : id_(id), name_(std::move(name)) {
        start_ = std::chrono::steady_clock::now();
    }

    void finish(bool pass, const std::string& detail, double runtime_budget_s) {
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        const bool in_budget = secs < runtime_budget_s;
        const bool ok = pass && in_budget;
        std::printf("[%s] C%d %s: %s (%.3fs, budget %gs)\n", ok ? "PASS" : "FAIL", id_,
                    name_.c_str(), detail.c_str(), secs, runtime_budget_s);
        std::fflush(stdout);
        if (!ok) ++g_failures;
    }

private:
    int id_;
    std::string name_;
    std::chrono::steady_clock::time_point start_;
};

std::string fmt(const char* spec, double a, double b) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), spec, a, b);
    return buf;
}

// --- C1: numeric cumulant vs closed forms ---------------------------------

void criterion_1() {
    Criterion c(1, "kernel-closed-vs-ode");
    const BranchingMechanism mechs[] = {
        BranchingMechanism::quadratic(1.0),
        BranchingMechanism::quadratic(0.5, 1.0),
        BranchingMechanism::stable(1.0, 1.2),
        BranchingMechanism::stable(1.0, 1.5),
        BranchingMechanism::stable(1.0, 2.0),
    };
    double worst = 0.0;
    for (const auto& m : mechs) {
        const CumulantSolver solver(m);
        for (const double a : {0.1, 1.0, 10.0}) {
            for (const double lambda : {0.01, 1.0, 100.0}) {
                const double closed = *solver.u_closed(a, lambda);
                const double numeric = solver.u_numeric(a, lambda).value;
                worst = std::max(worst, std::fabs(numeric - closed) / std::max(closed, 1e-300));
            }
        }
    }
    c.finish(worst <= 1e-8, fmt("max rel err %.3g <= %.0e", worst, 1e-8), 1.0);
}

// --- C2: coding transforms vs oracles --------------------------------------

void criterion_2() {
    Criterion c(2, "coding-oracle-equivalence");
    std::int64_t checked = 0, failures = 0;
    const auto check_tree = [&](const OrderedTree& t) {
        ++checked;
        const auto walk = lukasiewicz(t);
        const auto h = height_from_walk(walk);
        if (h != t.heights()) ++failures;
        if (h != testutil::heights_by_parents(t)) ++failures;
        if (t.mirror().mirror() != t) ++failures;
        if (from_luk(to_luk(t)) != t) ++failures;
        if (from_paren(to_paren(t)) != t) ++failures;
        if (tree_from_lukasiewicz(walk) != t) ++failures;
    };
    for (int n = 1; n <= 8; ++n) testutil::enumerate_trees(n, check_tree);

    const OffspringLaw laws[] = {
        OffspringLaw::finite_pmf({0.5, 0.0, 0.5}),
        OffspringLaw::geometric(0.5),
        OffspringLaw::finite_pmf({0.4, 0.3, 0.2, 0.1}),
        OffspringLaw::poisson(0.9),
    };
    Rng rng(20260808);
    int sampled = 0;
    while (sampled < 10'000) {
        try {
            check_tree(sample_gw(laws[sampled % 4], rng, 100'000));
            ++sampled;
        } catch (const SizeCapError&) {
        }
    }
    char buf[120];
    std::snprintf(buf, sizeof(buf), "%lld trees (626 exhaustive + 10000 random), %lld failures",
                  static_cast<long long>(checked), static_cast<long long>(failures));
    c.finish(failures == 0, buf, 10.0);
}

// --- C3: strong invariance of GWI marginals --------------------------------

void criterion_3(int workers) {
    Criterion c(3, "gwi-marginal-vs-csbpi-kernel");
    StrongGwiConfig cfg;  // Geometric(1/2), Poisson(1), p = gamma_p = 100, x = 0, t = 1
    cfg.replicas = 200'000;
    cfg.lambdas = {0.5, 1.0, 2.0, 4.0};
    cfg.tolerance = 0.01;
    cfg.seed = 8451;
    cfg.workers = workers;
    const auto report = verify_strong_gwi(cfg);
    c.finish(report.pass,
             fmt("sup laplace gap %.5f <= %.3f [target (1+l)^-1]",
                 report.distances.at("laplace_empirical_vs_csbpi_sup_gap"), cfg.tolerance),
             300.0);
}

// --- C4: discrete Ray-Knight skeleton ---------------------------------------

void criterion_4(int workers) {
    Criterion c(4, "ray-knight-occupation-and-kernel");
    RayKnightConfig cfg;  // size-biased Geometric(1/2), p = 100, a = 1
    cfg.replicas = 100'000;
    cfg.exact_trees = 1'000;
    cfg.exact_spine_depth = 48;
    cfg.tolerance = 0.015;
    cfg.seed = 90210;
    cfg.workers = workers;
    const auto report = verify_ray_knight(cfg);
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "occupation violations %lld/ %lld trees x %lld levels; laplace gap %.5f <= %.3f "
                  "[target (1+l)^-2]",
                  static_cast<long long>(report.exact_checks.at("occupation_violations")),
                  static_cast<long long>(report.exact_checks.at("occupation_trees")),
                  static_cast<long long>(report.exact_checks.at("occupation_levels")),
                  report.distances.at("laplace_empirical_vs_csbpi_sup_gap"), cfg.tolerance);
    c.finish(report.pass, buf, 600.0);
}

// --- C5: size-biased conditioning by exact enumeration ----------------------

void criterion_5() {
    Criterion c(5, "size-biased-conditioning-tv");
    SizeBiasedConfig cfg;  // Geometric(1/2), depth 1, K = 32, n in {1,5,10,50}
    const auto report = verify_size_biased(cfg);
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "tv(n=50) = %.5f <= %.3f, strictly decreasing = %lld, leak %.3g",
                  report.estimates.back().empirical, cfg.final_tv_tolerance,
                  static_cast<long long>(report.exact_checks.at("tv_strictly_decreasing")),
                  report.distances.at("enumeration_leak"));
    c.finish(report.pass, buf, 1.0);
}

// --- C6: occupation estimator exact at lattice scale ------------------------

void criterion_6() {
    Criterion c(6, "occupation-estimator-lattice-exact");
    const auto mu = OffspringLaw::geometric(0.5);
    const auto r = DispatchingLaw::size_biased(mu);
    Rng rng(606060);
    std::int64_t paths = 0, failures = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int p = 5 + static_cast<int>(rng.next_below(20));
        const ScalingScheme scheme = ScalingScheme::proportional(p);
        const auto h = sample_left_height_prefix(mu, r, 400, rng);
        const auto path = rescaled_height_path(h, scheme);
        ++paths;
        for (int level = 0; level < 15; ++level) {
            std::int64_t count = 0;
            for (const auto v : h) {
                if (v == level + 1) ++count;
            }
            const double est = occupation_estimate(
                path, static_cast<double>(level) / scheme.gamma_p, 1.0 / scheme.gamma_p);
            const double recovered = est / (path.dt * scheme.gamma_p);
            if (std::llround(recovered) != count ||
                std::fabs(recovered - static_cast<double>(count)) > 1e-6) {
                ++failures;
            }
        }
    }
    char buf[120];
    std::snprintf(buf, sizeof(buf), "%lld paths x 15 levels, %lld mismatches",
                  static_cast<long long>(paths), static_cast<long long>(failures));
    c.finish(failures == 0, buf, 5.0);
}

// --- C7: cross-resolution self-consistency + exact contour bounds -----------

void criterion_7(int workers) {
    Criterion c(7, "contour-bounds-and-cross-resolution-ks");
    SelfConsistencyConfig cfg;  // size-biased Geometric(1/2), p 50 vs 100, t = 1
    cfg.replicas = 10'000;
    cfg.ks_tolerance = 0.05;
    cfg.seed = 1848;
    cfg.workers = workers;
    const auto report = verify_self_consistency(cfg);
    char buf[200];
    std::snprintf(buf, sizeof(buf), "contour violations %lld/%lld paths; max ks %.5f <= %.3f",
                  static_cast<long long>(report.exact_checks.at("contour_bound_violations")),
                  static_cast<long long>(report.exact_checks.at("paths_checked")),
                  report.distances.at("ks_coarse_vs_fine_max"), cfg.ks_tolerance);
    c.finish(report.pass, buf, 600.0);
}

// --- C8: extinction-time condition -------------------------------------------

void criterion_8() {
    Criterion c(8, "extinction-condition-numeric");
    const double v =
        check_extinction_condition(OffspringLaw::geometric(0.5), ScalingScheme::proportional(100), 1.0);
    const double gap = std::fabs(v - std::exp(-1.0));
    c.finish(gap <= 1e-2, fmt("|g_100(0)^100 - e^-1| = %.5f <= %.2f", gap, 1e-2), 0.001);
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    int workers = 2;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
        if (std::strcmp(argv[i], "--workers") == 0 && i + 1 < argc) workers = std::atoi(argv[++i]);
    }
    const auto want = [&](int id) { return only == 0 || only == id; };
    try {
        if (want(1)) criterion_1();
        if (want(2)) criterion_2();
        if (want(3)) criterion_3(workers);
        if (want(4)) criterion_4(workers);
        if (want(5)) criterion_5();
        if (want(6)) criterion_6();
        if (want(7)) criterion_7(workers);
        if (want(8)) criterion_8();
    } catch (const std::exception& e) {
        std::printf("[FAIL] unhandled error: %s\n", e.what());
        ++g_failures;
    }
    if (only == 0) {
        std::printf("%s: %d criterion failure(s)\n", g_failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
                    g_failures);
    }
    return g_failures;
}
