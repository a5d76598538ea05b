#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace gwlab {

// One atom of a finite jump measure: mass at jump size r.
struct JumpAtom {
    double r;
    double mass;
};

// Stable jump family pi(dr) ~ r^(-1-gamma) dr, contributing c*lambda^gamma.
struct StableJumps {
    double c;
    double gamma;  // in (1, 2)
};

// Branching mechanism psi(l) = alpha*l + beta*l^2 + integral pi(dr)(e^{-lr}-1+lr),
// restricted to parametric jump families so the analytic conditions stay decidable.
// Values are immutable after construction and safe to share across threads.
class BranchingMechanism {
public:
    using Jumps = std::variant<std::monostate, StableJumps, std::vector<JumpAtom>>;

    static BranchingMechanism quadratic(double beta, double alpha = 0.0);
    // gamma == 2 is canonicalized to the quadratic coefficient beta = c.
    static BranchingMechanism stable(double c, double gamma, double alpha = 0.0);
    static BranchingMechanism finite_jumps(double alpha, std::vector<JumpAtom> atoms, double beta = 0.0);

    double psi(double lambda) const;
    double psi_prime(double lambda) const;
    // psi with the linear drift removed: psi(l) - alpha*l.
    double psi_star(double lambda) const { return psi(lambda) - alpha_ * lambda; }

    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    const Jumps& jumps() const { return jumps_; }

    bool has_stable_jumps() const { return std::holds_alternative<StableJumps>(jumps_); }
    bool has_finite_jumps() const { return std::holds_alternative<std::vector<JumpAtom>>(jumps_); }
    bool jumps_empty() const { return std::holds_alternative<std::monostate>(jumps_); }

    // Grey condition: finite integral of 1/psi at infinity. Decidable per family:
    // beta > 0 or stable jumps.
    bool grey() const { return beta_ > 0.0 || has_stable_jumps(); }

    std::string describe() const;

private:
    BranchingMechanism(double alpha, double beta, Jumps jumps);

    double alpha_ = 0.0;
    double beta_ = 0.0;
    Jumps jumps_;
};

// One atom of a finite bivariate dispatching measure R.
struct GridAtom {
    double x;
    double y;
    double mass;
};

// Bivariate exponent Phi(p,q) = d*p + d'*q + integral R(dxdy)(1 - e^{-px-qy}).
// The size-biased form is Phi(p,q) = (psi*(p) - psi*(q))/(p - q) with diagonal
// value psi'(p) - alpha.
class BivariateExponent {
public:
    static BivariateExponent grid(double d, double dprime, std::vector<GridAtom> atoms);
    static BivariateExponent size_biased(BranchingMechanism mechanism);

    double value(double p, double q) const;
    // Diagonal phi(lambda) = Phi(lambda, lambda).
    double diagonal(double lambda) const;

    bool is_size_biased() const { return std::holds_alternative<BranchingMechanism>(form_); }
    const BranchingMechanism* size_biased_mechanism() const {
        return std::get_if<BranchingMechanism>(&form_);
    }

    // Continuity condition for the inverse subordinators: d*d' != 0 or R of
    // infinite total mass.
    bool uv_continuous() const;

    double d() const { return d_; }
    double dprime() const { return dprime_; }

    std::string describe() const;

private:
    using Form = std::variant<std::vector<GridAtom>, BranchingMechanism>;
    BivariateExponent(double d, double dprime, Form form);

    double d_ = 0.0;
    double dprime_ = 0.0;
    Form form_;
};

// Immigration mechanism phi: Laplace exponent of a subordinator, either a
// standalone (drift, finite jump list) pair or the diagonal of a bivariate
// exponent.
class ImmigrationMechanism {
public:
    static ImmigrationMechanism none() { return linear(0.0); }
    static ImmigrationMechanism linear(double kappa);
    static ImmigrationMechanism with_jumps(double kappa, std::vector<JumpAtom> atoms);
    static ImmigrationMechanism diagonal(BivariateExponent b);

    double value(double lambda) const;
    double operator()(double lambda) const { return value(lambda); }

    // phi(l) = kappa*l exactly (no jump part); kappa may be zero.
    bool is_linear() const;
    double linear_rate() const;  // valid when is_linear()

    std::string describe() const;

private:
    struct Standalone {
        double kappa;
        std::vector<JumpAtom> atoms;
    };
    using Form = std::variant<Standalone, BivariateExponent>;
    explicit ImmigrationMechanism(Form form) : form_(std::move(form)) {}

    Form form_;
};

struct ConditionReport {
    bool subcritical = false;
    bool conservative = false;
    bool grey = false;
    bool uv_continuous = false;

    bool all() const { return subcritical && conservative && grey && uv_continuous; }
};

ConditionReport check_conditions(const BranchingMechanism& m, const BivariateExponent& b);

// Literal grammar used by the CLI and config files:
//   quadratic:beta=<f>[,alpha=<f>]
//   stable:c=<f>,gamma=<f>[,alpha=<f>]
//   finitejump:alpha=<f>,pairs=r1:m1;r2:m2,...
BranchingMechanism parse_mechanism(const std::string& literal);

// Bivariate literals: `sizebiased` (of the given psi) or
//   grid:d=<f>,dprime=<f>,atoms=x:y:m;...
BivariateExponent parse_bivariate(const std::string& literal, const BranchingMechanism& psi);

// Immigration literals: `none`, `linear:m=<f>`,
//   finitejump:kappa=<f>,pairs=r1:m1;..., or `sizebiased` (diagonal of the
//   size-biased exponent of the given psi).
ImmigrationMechanism parse_immigration(const std::string& literal, const BranchingMechanism& psi);

}  // namespace gwlab
