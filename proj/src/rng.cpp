#include "gwlab/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace gwlab {

double sample_normal(Rng& rng) {
    for (;;) {
        const double u = 2.0 * rng.next_open01() - 1.0;
        const double v = 2.0 * rng.next_open01() - 1.0;
        const double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) {
            return u * std::sqrt(-2.0 * std::log(s) / s);
        }
    }
}

double sample_gamma(Rng& rng, double shape, double scale) {
    if (!(shape > 0.0) || !(scale > 0.0)) throw std::invalid_argument("sample_gamma: shape and scale must be positive");
    if (shape < 1.0) {
        // Boost to shape+1 and thin with U^(1/shape).
        const double g = sample_gamma(rng, shape + 1.0, 1.0);
        return scale * g * std::pow(rng.next_open01(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = sample_normal(rng);
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.next_open01();
        if (u < 1.0 - 0.0331 * x * x * x * x) return scale * d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return scale * d * v;
    }
}

namespace {

std::int64_t poisson_small(Rng& rng, double mean) {
    // Knuth's product-of-uniforms inversion.
    const double limit = std::exp(-mean);
    std::int64_t k = 0;
    double prod = rng.next_open01();
    while (prod > limit) {
        prod *= rng.next_open01();
        ++k;
    }
    return k;
}

std::int64_t poisson_ptrs(Rng& rng, double mean) {
    // Hormann (1993), transformed rejection with squeeze; exact for mean >= 10.
    const double b = 0.931 + 2.53 * std::sqrt(mean);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        double u = rng.next_open01() - 0.5;
        const double v = rng.next_open01();
        const double us = 0.5 - std::fabs(u);
        const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<std::int64_t>(k);
        if (k < 0.0 || (us < 0.013 && v > us)) continue;
        const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
        const double rhs = -mean + k * std::log(mean) - std::lgamma(k + 1.0);
        if (lhs <= rhs) return static_cast<std::int64_t>(k);
    }
}

}  // namespace

std::int64_t sample_poisson(Rng& rng, double mean) {
    if (mean < 0.0) throw std::invalid_argument("sample_poisson: negative mean");
    if (mean == 0.0) return 0;
    if (mean < 10.0) return poisson_small(rng, mean);
    return poisson_ptrs(rng, mean);
}

std::int64_t sample_geometric(Rng& rng, double q) {
    if (!(q > 0.0) || q > 1.0) throw std::invalid_argument("sample_geometric: q must be in (0,1]");
    if (q == 1.0) return 0;
    return static_cast<std::int64_t>(std::floor(std::log(rng.next_open01()) / std::log1p(-q)));
}

std::int64_t sample_negative_binomial(Rng& rng, double r, double q) {
    if (r == 0.0) return 0;
    const double lambda = sample_gamma(rng, r, (1.0 - q) / q);
    return sample_poisson(rng, lambda);
}

}  // namespace gwlab
