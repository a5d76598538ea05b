#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace gwlab {

// Adaptive Dormand-Prince 5(4) for a scalar autonomous ODE y' = f(y), with the
// standard 4th-order continuous extension stored per accepted step so the
// trajectory can be evaluated densely after the solve.
class ScalarOde {
public:
    struct Options {
        double rel_tol = 1e-10;
        double abs_tol = 1e-14;
        std::size_t max_steps = 1'000'000;
    };

    struct Segment {
        double t0;
        double h;
        double y0;
        double rcont[5];  // dense-output coefficients
    };

    struct Solution {
        double value = 0.0;        // y(t_end)
        double est_error = 0.0;    // accumulated local error estimates
        std::size_t steps = 0;     // accepted steps
        std::vector<Segment> trajectory;

        double eval(double t) const;  // dense evaluation on [t_start, t_end]
    };

    // Integrates from t=0 to t=t_end. Throws IntegrationError (with context
    // from the caller via on_failure) when max_steps is exhausted.
    static Solution solve(const std::function<double(double)>& f, double y0, double t_end,
                          const Options& options,
                          const std::function<void(double last_y)>& on_failure);
};

// Adaptive quadrature of g over [0, t_end] by recursive interval halving with
// Gauss-Legendre 7-point panels. Returns the integral and an error estimate.
struct QuadratureResult {
    double value;
    double est_error;
};

QuadratureResult integrate_adaptive(const std::function<double(double)>& g, double t_end,
                                    double rel_tol);

}  // namespace gwlab
