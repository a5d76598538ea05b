#include "gwlab/cumulant.hpp"

#include <cmath>
#include <limits>

#include "gwlab/errors.hpp"
#include "gwlab/ode.hpp"

namespace gwlab {

CumulantSolver::CumulantSolver(BranchingMechanism mechanism, double ode_rel_tol, double quad_rel_tol)
    : mechanism_(std::move(mechanism)), ode_rel_tol_(ode_rel_tol), quad_rel_tol_(quad_rel_tol) {
    if (!(ode_rel_tol_ > 0.0) || !(quad_rel_tol_ > 0.0))
        throw ConfigError("cumulant solver: tolerances must be positive");
    if (mechanism_.alpha() < 0.0)
        throw UnsupportedMechanismError("cumulant solver requires a (sub)critical mechanism");
}

std::optional<double> CumulantSolver::u_closed(double a, double lambda) const {
    const double alpha = mechanism_.alpha();
    const double beta = mechanism_.beta();
    if (lambda == 0.0) return 0.0;
    if (a == 0.0) return lambda;

    if (mechanism_.jumps_empty()) {
        if (alpha == 0.0) {
            return lambda / (1.0 + beta * a * lambda);
        }
        const double em = std::exp(-alpha * a);
        return alpha * lambda * em / (alpha + beta * lambda * (1.0 - em));
    }
    if (mechanism_.has_stable_jumps() && beta == 0.0) {
        const auto& st = std::get<StableJumps>(mechanism_.jumps());
        const double g1 = st.gamma - 1.0;
        const double w0 = std::pow(lambda, -g1);
        double w;
        if (alpha == 0.0) {
            w = w0 + st.c * g1 * a;
        } else {
            w = (w0 + st.c / alpha) * std::exp(g1 * alpha * a) - st.c / alpha;
        }
        return std::pow(w, -1.0 / g1);
    }
    return std::nullopt;
}

CumulantSolver::Eval CumulantSolver::u_numeric(double a, double lambda) const {
    if (lambda < 0.0 || a < 0.0)
        throw ConfigError("cumulant: a and lambda must be nonnegative");
    Eval out;
    out.method = Method::Ode;
    if (a == 0.0 || lambda == 0.0) {
        out.value = lambda;
        return out;
    }
    ScalarOde::Options opt;
    opt.rel_tol = ode_rel_tol_;
    opt.abs_tol = 1e-30;
    const auto rhs = [this](double y) { return -mechanism_.psi(std::max(y, 0.0)); };
    const auto sol = ScalarOde::solve(rhs, lambda, a, opt, [&](double last) {
        throw IntegrationError(a, lambda, last);
    });
    out.value = std::max(sol.value, 0.0);
    out.est_error = sol.est_error;
    return out;
}

CumulantSolver::Eval CumulantSolver::u(double a, double lambda) const {
    if (lambda < 0.0 || a < 0.0)
        throw ConfigError("cumulant: a and lambda must be nonnegative");
    if (const auto closed = u_closed(a, lambda)) {
        return Eval{*closed, Method::Closed, 0.0};
    }
    return u_numeric(a, lambda);
}

CumulantSolver::Eval CumulantSolver::v(double a) const {
    if (!(a > 0.0)) throw ConfigError("extinction functional needs a > 0");
    if (!mechanism_.grey())
        throw UnsupportedMechanismError(
            "extinction functional undefined: Grey condition fails for " + mechanism_.describe());

    const double alpha = mechanism_.alpha();
    const double beta = mechanism_.beta();
    if (mechanism_.jumps_empty()) {
        // beta > 0 here, otherwise Grey would have failed.
        const double value = alpha == 0.0 ? 1.0 / (beta * a) : alpha / (beta * std::expm1(alpha * a));
        return Eval{value, Method::Closed, 0.0};
    }
    if (mechanism_.has_stable_jumps() && beta == 0.0) {
        const auto& st = std::get<StableJumps>(mechanism_.jumps());
        const double g1 = st.gamma - 1.0;
        const double w = alpha == 0.0 ? st.c * g1 * a : (st.c / alpha) * std::expm1(g1 * alpha * a);
        return Eval{std::pow(w, -1.0 / g1), Method::Closed, 0.0};
    }

    // Escalate lambda until u(a, lambda) stabilizes.
    Eval prev = u(a, 1e3);
    for (double lambda_big = 1e6; lambda_big <= 1e18; lambda_big *= 1e3) {
        Eval cur = u(a, lambda_big);
        if (std::fabs(cur.value - prev.value) <= ode_rel_tol_ * std::max(1.0, std::fabs(cur.value))) {
            cur.method = Method::Ode;
            cur.est_error += std::fabs(cur.value - prev.value);
            return cur;
        }
        prev = cur;
    }
    throw IntegrationError(a, std::numeric_limits<double>::infinity(), prev.value);
}

CumulantSolver::Eval CumulantSolver::csbp_laplace(double a, double lambda, double x0) const {
    if (x0 < 0.0) throw ConfigError("csbp_laplace: x0 must be nonnegative");
    Eval ue = u(a, lambda);
    Eval out;
    out.method = ue.method;
    out.value = std::exp(-x0 * ue.value);
    out.est_error = x0 * ue.est_error * out.value;
    return out;
}

std::optional<double> CumulantSolver::phi_integral_closed(const ImmigrationMechanism& phi, double a,
                                                          double lambda) const {
    if (!phi.is_linear()) return std::nullopt;
    const double m = phi.linear_rate();
    if (m == 0.0) return 0.0;
    if (lambda == 0.0 || a == 0.0) return 0.0;

    const double alpha = mechanism_.alpha();
    const double beta = mechanism_.beta();
    if (mechanism_.jumps_empty()) {
        if (beta == 0.0) {
            // u(s) = lambda e^{-alpha s}
            return alpha == 0.0 ? m * lambda * a : m * lambda * (1.0 - std::exp(-alpha * a)) / alpha;
        }
        if (alpha == 0.0) return (m / beta) * std::log1p(beta * a * lambda);
        return (m / beta) * std::log1p((beta * lambda / alpha) * (1.0 - std::exp(-alpha * a)));
    }
    if (mechanism_.has_stable_jumps() && beta == 0.0 && alpha == 0.0) {
        const auto& st = std::get<StableJumps>(mechanism_.jumps());
        const double g1 = st.gamma - 1.0;
        const double A = std::pow(lambda, -g1);
        const double B = st.c * g1;
        const double expo = (st.gamma - 2.0) / g1;  // negative for gamma in (1,2)
        return m * (std::pow(A + B * a, expo) - std::pow(A, expo)) * g1 / (B * (st.gamma - 2.0));
    }
    return std::nullopt;
}

CumulantSolver::Eval CumulantSolver::csbpi_laplace(const ImmigrationMechanism& phi, double a,
                                                   double lambda, double x0) const {
    if (x0 < 0.0) throw ConfigError("csbpi_laplace: x0 must be nonnegative");
    Eval out;
    if (a == 0.0) {
        out.value = std::exp(-x0 * lambda);
        return out;
    }

    const Eval ue = u(a, lambda);
    double exponent = x0 * ue.value;
    double exp_err = x0 * ue.est_error;

    if (const auto closed = phi_integral_closed(phi, a, lambda)) {
        exponent += *closed;
        out.method = ue.method;
    } else if (u_closed(a, lambda).has_value()) {
        // Closed-form cumulant under the quadrature nodes.
        const auto q = integrate_adaptive(
            [&](double s) { return phi.value(*u_closed(s, lambda)); }, a, quad_rel_tol_);
        exponent += q.value;
        exp_err += q.est_error;
        out.method = Method::Closed;
    } else {
        // One trajectory solve; the quadrature reuses its dense output instead
        // of re-integrating the ODE per node.
        if (lambda == 0.0) {
            out.method = Method::Ode;
            out.value = 1.0;
            return out;
        }
        ScalarOde::Options opt;
        opt.rel_tol = ode_rel_tol_;
        opt.abs_tol = 1e-30;
        const auto rhs = [this](double y) { return -mechanism_.psi(std::max(y, 0.0)); };
        const auto sol = ScalarOde::solve(rhs, lambda, a, opt, [&](double last) {
            throw IntegrationError(a, lambda, last);
        });
        const auto q = integrate_adaptive(
            [&](double s) { return phi.value(std::max(sol.eval(s), 0.0)); }, a, quad_rel_tol_);
        exponent += q.value;
        exp_err += sol.est_error + q.est_error;
        out.method = Method::Ode;
    }

    out.value = std::exp(-exponent);
    out.est_error = exp_err * out.value;
    return out;
}

}  // namespace gwlab
