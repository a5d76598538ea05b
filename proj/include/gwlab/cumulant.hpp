#pragma once

#include <optional>
#include <string>

#include "gwlab/mechanisms.hpp"

namespace gwlab {

// Evaluates the cumulant u(a, lambda) solving du/da = -psi(u), u(0) = lambda,
// the extinction functional v(a) = lim_{lambda->inf} u(a, lambda), and the
// Laplace transforms of CSBP / CSBPI marginals built from them.
//
// Closed forms are used for the quadratic and stable families; everything else
// goes through the adaptive integrator. Solvers are immutable and every
// operation is pure, so one instance can be shared across threads.
class CumulantSolver {
public:
    enum class Method { Closed, Ode };

    struct Eval {
        double value = 0.0;
        Method method = Method::Closed;
        double est_error = 0.0;
    };

    explicit CumulantSolver(BranchingMechanism mechanism, double ode_rel_tol = 1e-10,
                            double quad_rel_tol = 1e-9);

    const BranchingMechanism& mechanism() const { return mechanism_; }

    // u(a, lambda); closed form when the family admits one.
    Eval u(double a, double lambda) const;
    // Forces the generic integrator, regardless of family.
    Eval u_numeric(double a, double lambda) const;
    std::optional<double> u_closed(double a, double lambda) const;

    // v(a) = lim u(a, lambda); requires the Grey condition.
    Eval v(double a) const;

    // E[exp(-lambda Y_a)] for a CSBP started at x0: exp(-x0 u(a, lambda)).
    Eval csbp_laplace(double a, double lambda, double x0) const;

    // E[exp(-lambda Y*_a)] for a CSBPI started at x0:
    // exp(-x0 u(a,lambda) - integral_0^a phi(u(s,lambda)) ds).
    Eval csbpi_laplace(const ImmigrationMechanism& phi, double a, double lambda, double x0) const;

    static const char* method_name(Method m) { return m == Method::Closed ? "closed" : "ode"; }

private:
    std::optional<double> phi_integral_closed(const ImmigrationMechanism& phi, double a,
                                              double lambda) const;

    BranchingMechanism mechanism_;
    double ode_rel_tol_;
    double quad_rel_tol_;
};

}  // namespace gwlab
