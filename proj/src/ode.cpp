#include "gwlab/ode.hpp"

#include <algorithm>
#include <cmath>

namespace gwlab {

namespace {

// Dormand-Prince coefficients.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// Dense-output weights (Hairer-Norsett-Wanner II.6).
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

}  // namespace

double ScalarOde::Solution::eval(double t) const {
    if (trajectory.empty()) return value;
    // Binary search for the segment containing t.
    std::size_t lo = 0, hi = trajectory.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi + 1) / 2;
        if (trajectory[mid].t0 <= t) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    const Segment& s = trajectory[lo];
    const double theta = std::clamp(s.h > 0.0 ? (t - s.t0) / s.h : 0.0, 0.0, 1.0);
    const double th1 = 1.0 - theta;
    return s.rcont[0] +
           theta * (s.rcont[1] + th1 * (s.rcont[2] + theta * (s.rcont[3] + th1 * s.rcont[4])));
}

ScalarOde::Solution ScalarOde::solve(const std::function<double(double)>& f, double y0,
                                     double t_end, const Options& options,
                                     const std::function<void(double)>& on_failure) {
    Solution out;
    if (t_end <= 0.0) {
        out.value = y0;
        return out;
    }

    double t = 0.0;
    double y = y0;
    double k1 = f(y);
    // Conservative initial step.
    double h = t_end;
    {
        const double scale = options.abs_tol + options.rel_tol * std::fabs(y);
        if (std::fabs(k1) > 0.0) h = std::min(h, 0.01 * scale / std::fabs(k1) + 1e-12);
        h = std::max(h, 1e-300);
    }

    std::size_t attempts = 0;
    while (t < t_end) {
        if (++attempts > options.max_steps) {
            on_failure(y);
        }
        h = std::min(h, t_end - t);

        const double k2 = f(y + h * a21 * k1);
        const double k3 = f(y + h * (a31 * k1 + a32 * k2));
        const double k4 = f(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const double k5 = f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const double k6 = f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const double y_next = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const double k7 = f(y_next);

        const double err_raw =
            h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const double scale =
            options.abs_tol + options.rel_tol * std::max(std::fabs(y), std::fabs(y_next));
        const double err = std::fabs(err_raw) / scale;

        if (err <= 1.0) {
            Segment seg;
            seg.t0 = t;
            seg.h = h;
            seg.y0 = y;
            const double dy = y_next - y;
            const double bspl = h * k1 - dy;
            seg.rcont[0] = y;
            seg.rcont[1] = dy;
            seg.rcont[2] = bspl;
            seg.rcont[3] = dy - h * k7 - bspl;
            seg.rcont[4] =
                h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
            out.trajectory.push_back(seg);

            out.est_error += std::fabs(err_raw);
            out.steps += 1;
            t += h;
            y = y_next;
            k1 = k7;  // FSAL
            const double factor = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
            h *= std::clamp(factor, 0.2, 5.0);
        } else {
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
        }
        if (!(h > 0.0) || t + h == t) {
            on_failure(y);
        }
    }
    out.value = y;
    return out;
}

namespace {

// 7-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr double kGlNodes[7] = {-0.9491079123427585, -0.7415311855993945, -0.4058451513773972,
                                0.0,                 0.4058451513773972,  0.7415311855993945,
                                0.9491079123427585};
constexpr double kGlWeights[7] = {0.1294849661688697, 0.2797053914892766, 0.3818300505051189,
                                  0.4179591836734694, 0.3818300505051189, 0.2797053914892766,
                                  0.1294849661688697};

double gl7(const std::function<double(double)>& g, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 7; ++i) s += kGlWeights[i] * g(mid + half * kGlNodes[i]);
    return s * half;
}

void adapt(const std::function<double(double)>& g, double a, double b, double whole, double tol,
           int depth, double& total, double& err) {
    const double mid = 0.5 * (a + b);
    const double left = gl7(g, a, mid);
    const double right = gl7(g, mid, b);
    const double diff = left + right - whole;
    if (depth <= 0 || std::fabs(diff) <= tol) {
        total += left + right;
        err += std::fabs(diff);
        return;
    }
    adapt(g, a, mid, left, 0.5 * tol, depth - 1, total, err);
    adapt(g, mid, b, right, 0.5 * tol, depth - 1, total, err);
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& g, double t_end,
                                    double rel_tol) {
    if (t_end <= 0.0) return {0.0, 0.0};
    const double whole = gl7(g, 0.0, t_end);
    const double tol = rel_tol * std::max(std::fabs(whole), 1e-300);
    double total = 0.0, err = 0.0;
    adapt(g, 0.0, t_end, whole, tol, 48, total, err);
    return {total, err};
}

}  // namespace gwlab
