#include "gwlab/mechanisms.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "gwlab/errors.hpp"

namespace gwlab {

namespace {

double jump_term(const std::vector<JumpAtom>& atoms, double lambda) {
    double s = 0.0;
    for (const auto& a : atoms) {
        // e^{-lr} - 1 + lr, evaluated without cancellation for small lr.
        s += a.mass * (std::expm1(-lambda * a.r) + lambda * a.r);
    }
    return s;
}

double jump_term_prime(const std::vector<JumpAtom>& atoms, double lambda) {
    double s = 0.0;
    for (const auto& a : atoms) {
        s += a.mass * a.r * (-std::expm1(-lambda * a.r));
    }
    return s;
}

}  // namespace

BranchingMechanism::BranchingMechanism(double alpha, double beta, Jumps jumps)
    : alpha_(alpha), beta_(beta), jumps_(std::move(jumps)) {
    if (alpha_ < 0.0) throw ConfigError("branching mechanism: alpha must be >= 0 (subcritical)");
    if (beta_ < 0.0) throw ConfigError("branching mechanism: beta must be >= 0");
    if (const auto* st = std::get_if<StableJumps>(&jumps_)) {
        if (!(st->c > 0.0)) throw ConfigError("branching mechanism: stable c must be > 0");
        if (!(st->gamma > 1.0 && st->gamma < 2.0))
            throw ConfigError("branching mechanism: stable gamma must be in (1,2)");
    }
    if (const auto* fl = std::get_if<std::vector<JumpAtom>>(&jumps_)) {
        for (const auto& a : *fl) {
            if (!(a.r > 0.0) || !(a.mass > 0.0))
                throw ConfigError("branching mechanism: jump atoms need r > 0 and mass > 0");
        }
    }
}

BranchingMechanism BranchingMechanism::quadratic(double beta, double alpha) {
    return BranchingMechanism(alpha, beta, std::monostate{});
}

BranchingMechanism BranchingMechanism::stable(double c, double gamma, double alpha) {
    if (gamma == 2.0) return quadratic(c, alpha);
    return BranchingMechanism(alpha, 0.0, StableJumps{c, gamma});
}

BranchingMechanism BranchingMechanism::finite_jumps(double alpha, std::vector<JumpAtom> atoms, double beta) {
    return BranchingMechanism(alpha, beta, std::move(atoms));
}

double BranchingMechanism::psi(double lambda) const {
    double v = alpha_ * lambda + beta_ * lambda * lambda;
    if (const auto* st = std::get_if<StableJumps>(&jumps_)) {
        v += st->c * std::pow(lambda, st->gamma);
    } else if (const auto* fl = std::get_if<std::vector<JumpAtom>>(&jumps_)) {
        v += jump_term(*fl, lambda);
    }
    return v;
}

double BranchingMechanism::psi_prime(double lambda) const {
    double v = alpha_ + 2.0 * beta_ * lambda;
    if (const auto* st = std::get_if<StableJumps>(&jumps_)) {
        v += st->c * st->gamma * std::pow(lambda, st->gamma - 1.0);
    } else if (const auto* fl = std::get_if<std::vector<JumpAtom>>(&jumps_)) {
        v += jump_term_prime(*fl, lambda);
    }
    return v;
}

std::string BranchingMechanism::describe() const {
    std::ostringstream os;
    if (has_stable_jumps()) {
        const auto& st = std::get<StableJumps>(jumps_);
        os << "stable:c=" << st.c << ",gamma=" << st.gamma;
        if (alpha_ != 0.0) os << ",alpha=" << alpha_;
    } else if (has_finite_jumps()) {
        os << "finitejump:alpha=" << alpha_ << ",pairs=";
        const auto& fl = std::get<std::vector<JumpAtom>>(jumps_);
        for (std::size_t i = 0; i < fl.size(); ++i) {
            if (i) os << ';';
            os << fl[i].r << ':' << fl[i].mass;
        }
        if (beta_ != 0.0) os << ",beta=" << beta_;
    } else {
        os << "quadratic:beta=" << beta_;
        if (alpha_ != 0.0) os << ",alpha=" << alpha_;
    }
    return os.str();
}

BivariateExponent::BivariateExponent(double d, double dprime, Form form)
    : d_(d), dprime_(dprime), form_(std::move(form)) {
    if (d_ < 0.0 || dprime_ < 0.0) throw ConfigError("bivariate exponent: drifts must be >= 0");
    if (const auto* atoms = std::get_if<std::vector<GridAtom>>(&form_)) {
        for (const auto& a : *atoms) {
            if (a.x < 0.0 || a.y < 0.0 || !(a.mass > 0.0))
                throw ConfigError("bivariate exponent: atoms need x,y >= 0 and mass > 0");
        }
    }
}

BivariateExponent BivariateExponent::grid(double d, double dprime, std::vector<GridAtom> atoms) {
    return BivariateExponent(d, dprime, std::move(atoms));
}

BivariateExponent BivariateExponent::size_biased(BranchingMechanism mechanism) {
    // Drift part of the size-biased exponent is (beta, beta).
    const double beta = mechanism.beta();
    return BivariateExponent(beta, beta, std::move(mechanism));
}

double BivariateExponent::value(double p, double q) const {
    if (const auto* m = std::get_if<BranchingMechanism>(&form_)) {
        // Difference quotient of psi* degrades near the diagonal; switch to the
        // analytic derivative there.
        if (std::fabs(p - q) < 1e-8 * std::max(1.0, p)) {
            return m->psi_prime(0.5 * (p + q)) - m->alpha();
        }
        return (m->psi_star(p) - m->psi_star(q)) / (p - q);
    }
    double v = d_ * p + dprime_ * q;
    for (const auto& a : std::get<std::vector<GridAtom>>(form_)) {
        v += a.mass * (-std::expm1(-p * a.x - q * a.y));
    }
    return v;
}

double BivariateExponent::diagonal(double lambda) const { return value(lambda, lambda); }

bool BivariateExponent::uv_continuous() const {
    if (const auto* m = std::get_if<BranchingMechanism>(&form_)) {
        // R has infinite mass iff the jump measure integrates r to infinity
        // near 0, which holds exactly for the stable family here.
        return m->beta() > 0.0 || m->has_stable_jumps();
    }
    return d_ > 0.0 && dprime_ > 0.0;
}

std::string BivariateExponent::describe() const {
    std::ostringstream os;
    if (const auto* m = std::get_if<BranchingMechanism>(&form_)) {
        os << "sizebiased(" << m->describe() << ")";
    } else {
        os << "grid:d=" << d_ << ",dprime=" << dprime_ << ",atoms=";
        const auto& atoms = std::get<std::vector<GridAtom>>(form_);
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            if (i) os << ';';
            os << atoms[i].x << ':' << atoms[i].y << ':' << atoms[i].mass;
        }
    }
    return os.str();
}

ImmigrationMechanism ImmigrationMechanism::linear(double kappa) {
    if (kappa < 0.0) throw ConfigError("immigration mechanism: kappa must be >= 0");
    return ImmigrationMechanism(Standalone{kappa, {}});
}

ImmigrationMechanism ImmigrationMechanism::with_jumps(double kappa, std::vector<JumpAtom> atoms) {
    if (kappa < 0.0) throw ConfigError("immigration mechanism: kappa must be >= 0");
    for (const auto& a : atoms) {
        if (!(a.r > 0.0) || !(a.mass > 0.0))
            throw ConfigError("immigration mechanism: jump atoms need r > 0 and mass > 0");
    }
    return ImmigrationMechanism(Standalone{kappa, std::move(atoms)});
}

ImmigrationMechanism ImmigrationMechanism::diagonal(BivariateExponent b) {
    return ImmigrationMechanism(Form{std::move(b)});
}

double ImmigrationMechanism::value(double lambda) const {
    if (const auto* s = std::get_if<Standalone>(&form_)) {
        double v = s->kappa * lambda;
        for (const auto& a : s->atoms) v += a.mass * (-std::expm1(-lambda * a.r));
        return v;
    }
    return std::get<BivariateExponent>(form_).diagonal(lambda);
}

bool ImmigrationMechanism::is_linear() const {
    if (const auto* s = std::get_if<Standalone>(&form_)) return s->atoms.empty();
    const auto& b = std::get<BivariateExponent>(form_);
    if (const auto* m = b.size_biased_mechanism()) {
        // Diagonal of the size-biased exponent is psi' - alpha = 2*beta*lambda
        // when psi is purely quadratic.
        return m->jumps_empty();
    }
    return false;  // grid diagonals with atoms are not linear
}

double ImmigrationMechanism::linear_rate() const {
    if (const auto* s = std::get_if<Standalone>(&form_)) return s->kappa;
    const auto& b = std::get<BivariateExponent>(form_);
    if (const auto* m = b.size_biased_mechanism()) return 2.0 * m->beta();
    throw UnsupportedMechanismError("immigration mechanism has no linear rate");
}

std::string ImmigrationMechanism::describe() const {
    if (const auto* s = std::get_if<Standalone>(&form_)) {
        std::ostringstream os;
        if (s->atoms.empty()) {
            os << "linear:m=" << s->kappa;
        } else {
            os << "finitejump:kappa=" << s->kappa << ",pairs=";
            for (std::size_t i = 0; i < s->atoms.size(); ++i) {
                if (i) os << ';';
                os << s->atoms[i].r << ':' << s->atoms[i].mass;
            }
        }
        return os.str();
    }
    return "diagonal(" + std::get<BivariateExponent>(form_).describe() + ")";
}

ConditionReport check_conditions(const BranchingMechanism& m, const BivariateExponent& b) {
    ConditionReport report;
    report.subcritical = m.alpha() >= 0.0;
    // psi(0) = 0 by construction and the integral of 1/psi diverges at 0+ for
    // every admitted subcritical family.
    report.conservative = report.subcritical;
    report.grey = m.grey();
    report.uv_continuous = b.uv_continuous();
    return report;
}

namespace {

// Helpers for the comma/semicolon literal grammar. Offsets reported in errors
// are relative to the literal string.
struct FieldMap {
    std::vector<std::pair<std::string, std::string>> fields;
    std::size_t base_offset;

    const std::string* find(const std::string& key) const {
        for (const auto& [k, v] : fields) {
            if (k == key) return &v;
        }
        return nullptr;
    }
};

FieldMap split_fields(const std::string& body, std::size_t base_offset) {
    FieldMap out{{}, base_offset};
    std::size_t pos = 0;
    while (pos < body.size()) {
        std::size_t end = body.find(',', pos);
        if (end == std::string::npos) end = body.size();
        const std::string part = body.substr(pos, end - pos);
        const std::size_t eq = part.find('=');
        if (eq == std::string::npos) throw ParseError("key=value field", base_offset + pos);
        out.fields.emplace_back(part.substr(0, eq), part.substr(eq + 1));
        pos = end + 1;
    }
    return out;
}

double parse_double(const std::string& text, std::size_t offset) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0') throw ParseError("floating-point number", offset);
    return v;
}

double require_double(const FieldMap& fm, const std::string& key) {
    const std::string* v = fm.find(key);
    if (!v) throw ParseError("field '" + key + "'", fm.base_offset);
    return parse_double(*v, fm.base_offset);
}

double optional_double(const FieldMap& fm, const std::string& key, double fallback) {
    const std::string* v = fm.find(key);
    return v ? parse_double(*v, fm.base_offset) : fallback;
}

std::vector<std::vector<double>> parse_tuple_list(const std::string& text, std::size_t arity,
                                                  std::size_t offset) {
    std::vector<std::vector<double>> out;
    if (text.empty()) return out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find(';', pos);
        if (end == std::string::npos) end = text.size();
        const std::string item = text.substr(pos, end - pos);
        std::vector<double> tuple;
        std::size_t p = 0;
        while (p <= item.size()) {
            std::size_t q = item.find(':', p);
            if (q == std::string::npos) q = item.size();
            tuple.push_back(parse_double(item.substr(p, q - p), offset + pos + p));
            p = q + 1;
            if (q == item.size()) break;
        }
        if (tuple.size() != arity)
            throw ParseError(std::to_string(arity) + "-tuple separated by ':'", offset + pos);
        out.push_back(std::move(tuple));
        pos = end + 1;
        if (end == text.size()) break;
    }
    return out;
}

}  // namespace

BranchingMechanism parse_mechanism(const std::string& literal) {
    const std::size_t colon = literal.find(':');
    const std::string head = literal.substr(0, colon);
    const std::string body = colon == std::string::npos ? "" : literal.substr(colon + 1);
    const std::size_t body_off = colon == std::string::npos ? literal.size() : colon + 1;
    const FieldMap fm = split_fields(body, body_off);

    if (head == "quadratic") {
        return BranchingMechanism::quadratic(require_double(fm, "beta"), optional_double(fm, "alpha", 0.0));
    }
    if (head == "stable") {
        return BranchingMechanism::stable(require_double(fm, "c"), require_double(fm, "gamma"),
                                          optional_double(fm, "alpha", 0.0));
    }
    if (head == "finitejump") {
        const std::string* pairs = fm.find("pairs");
        if (!pairs) throw ParseError("field 'pairs'", body_off);
        std::vector<JumpAtom> atoms;
        for (const auto& t : parse_tuple_list(*pairs, 2, body_off)) {
            atoms.push_back(JumpAtom{t[0], t[1]});
        }
        return BranchingMechanism::finite_jumps(require_double(fm, "alpha"), std::move(atoms),
                                                optional_double(fm, "beta", 0.0));
    }
    throw ParseError("mechanism family (quadratic|stable|finitejump)", 0);
}

BivariateExponent parse_bivariate(const std::string& literal, const BranchingMechanism& psi) {
    if (literal == "sizebiased") return BivariateExponent::size_biased(psi);
    const std::size_t colon = literal.find(':');
    const std::string head = literal.substr(0, colon);
    if (head == "grid") {
        const std::size_t body_off = colon + 1;
        const FieldMap fm = split_fields(literal.substr(body_off), body_off);
        std::vector<GridAtom> atoms;
        if (const std::string* a = fm.find("atoms")) {
            for (const auto& t : parse_tuple_list(*a, 3, body_off)) {
                atoms.push_back(GridAtom{t[0], t[1], t[2]});
            }
        }
        return BivariateExponent::grid(require_double(fm, "d"), require_double(fm, "dprime"),
                                       std::move(atoms));
    }
    throw ParseError("bivariate literal (sizebiased|grid:...)", 0);
}

ImmigrationMechanism parse_immigration(const std::string& literal, const BranchingMechanism& psi) {
    if (literal == "none") return ImmigrationMechanism::none();
    if (literal == "sizebiased")
        return ImmigrationMechanism::diagonal(BivariateExponent::size_biased(psi));
    const std::size_t colon = literal.find(':');
    const std::string head = literal.substr(0, colon);
    const std::size_t body_off = colon == std::string::npos ? literal.size() : colon + 1;
    if (head == "linear") {
        const FieldMap fm = split_fields(literal.substr(body_off), body_off);
        return ImmigrationMechanism::linear(require_double(fm, "m"));
    }
    if (head == "finitejump") {
        const FieldMap fm = split_fields(literal.substr(body_off), body_off);
        const std::string* pairs = fm.find("pairs");
        if (!pairs) throw ParseError("field 'pairs'", body_off);
        std::vector<JumpAtom> atoms;
        for (const auto& t : parse_tuple_list(*pairs, 2, body_off)) {
            atoms.push_back(JumpAtom{t[0], t[1]});
        }
        return ImmigrationMechanism::with_jumps(require_double(fm, "kappa"), std::move(atoms));
    }
    throw ParseError("immigration literal (none|linear|finitejump|sizebiased)", 0);
}

}  // namespace gwlab
