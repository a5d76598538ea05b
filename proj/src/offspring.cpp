#include "gwlab/offspring.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <sstream>

#include "gwlab/errors.hpp"

namespace gwlab {

namespace {

std::vector<double> build_cdf(const std::vector<double>& masses) {
    std::vector<double> cdf(masses.size());
    std::partial_sum(masses.begin(), masses.end(), cdf.begin());
    return cdf;
}

std::size_t invert_cdf(const std::vector<double>& cdf, double u) {
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    return std::min<std::size_t>(it - cdf.begin(), cdf.size() - 1);
}

}  // namespace

OffspringLaw::OffspringLaw(Form form) : form_(std::move(form)) {
    if (const auto* f = std::get_if<Finite>(&form_)) {
        double s = 0.0, m = 0.0;
        for (std::size_t k = 0; k < f->masses.size(); ++k) {
            if (f->masses[k] < 0.0) throw ConfigError("offspring pmf: negative mass");
            s += f->masses[k];
            m += static_cast<double>(k) * f->masses[k];
        }
        if (std::fabs(s - 1.0) > 1e-12) throw ConfigError("offspring pmf: masses must sum to 1");
        mean_ = m;
    } else if (const auto* g = std::get_if<Geometric>(&form_)) {
        if (!(g->q > 0.0) || g->q > 1.0) throw ConfigError("geometric offspring: q must be in (0,1]");
        mean_ = (1.0 - g->q) / g->q;
    } else if (const auto* p = std::get_if<Poisson>(&form_)) {
        if (p->m < 0.0) throw ConfigError("poisson offspring: mean must be >= 0");
        mean_ = p->m;
    } else {
        const auto& sd = std::get<StableDomain>(form_);
        if (!(sd.gamma > 1.0 && sd.gamma < 2.0))
            throw ConfigError("stable-domain offspring: gamma must be in (1,2)");
        if (!(sd.c > 0.0 && sd.c <= 1.0 / sd.gamma))
            throw ConfigError("stable-domain offspring: need 0 < c <= 1/gamma for a proper pmf");
        mean_ = 1.0;  // g'(1) = 1: the family is critical by construction
    }
}

OffspringLaw OffspringLaw::finite_pmf(std::vector<double> masses) {
    if (masses.empty()) throw ConfigError("offspring pmf: empty");
    Finite f{std::move(masses), {}};
    f.cdf = build_cdf(f.masses);
    return OffspringLaw(Form{std::move(f)});
}

OffspringLaw OffspringLaw::geometric(double q) { return OffspringLaw(Form{Geometric{q}}); }

OffspringLaw OffspringLaw::poisson(double m) { return OffspringLaw(Form{Poisson{m}}); }

OffspringLaw OffspringLaw::stable_domain(double c, double gamma) {
    return OffspringLaw(Form{StableDomain{c, gamma}});
}

OffspringLaw OffspringLaw::dirac(int k) {
    if (k < 0) throw ConfigError("dirac offspring: k must be >= 0");
    std::vector<double> masses(static_cast<std::size_t>(k) + 1, 0.0);
    masses.back() = 1.0;
    return finite_pmf(std::move(masses));
}

double OffspringLaw::second_moment() const {
    if (const auto* f = std::get_if<Finite>(&form_)) {
        double s = 0.0;
        for (std::size_t k = 0; k < f->masses.size(); ++k) {
            s += static_cast<double>(k) * static_cast<double>(k) * f->masses[k];
        }
        return s;
    }
    if (const auto* g = std::get_if<Geometric>(&form_)) {
        const double mean = (1.0 - g->q) / g->q;
        return (1.0 - g->q) / (g->q * g->q) + mean * mean;
    }
    if (const auto* p = std::get_if<Poisson>(&form_)) {
        return p->m + p->m * p->m;
    }
    // k^(-1-gamma) tail with gamma < 2: no second moment.
    return std::numeric_limits<double>::infinity();
}

double OffspringLaw::stable_gamma() const {
    if (const auto* sd = std::get_if<StableDomain>(&form_)) return sd->gamma;
    throw ConfigError("offspring law is not in the stable-domain family");
}

double OffspringLaw::stable_c() const {
    if (const auto* sd = std::get_if<StableDomain>(&form_)) return sd->c;
    throw ConfigError("offspring law is not in the stable-domain family");
}

double OffspringLaw::pmf(std::int64_t k) const {
    if (k < 0) return 0.0;
    if (const auto* f = std::get_if<Finite>(&form_)) {
        return k < static_cast<std::int64_t>(f->masses.size()) ? f->masses[k] : 0.0;
    }
    if (const auto* g = std::get_if<Geometric>(&form_)) {
        return g->q * std::pow(1.0 - g->q, static_cast<double>(k));
    }
    if (const auto* p = std::get_if<Poisson>(&form_)) {
        const double m = p->m;
        if (m == 0.0) return k == 0 ? 1.0 : 0.0;
        return std::exp(-m + static_cast<double>(k) * std::log(m) -
                        std::lgamma(static_cast<double>(k) + 1.0));
    }
    // Coefficients of z + c(1-z)^gamma: mu(0) = c, mu(1) = 1 - c*gamma,
    // mu(k) = c * (-1)^k * binom(gamma, k) for k >= 2, all nonnegative.
    const auto& sd = std::get<StableDomain>(form_);
    if (k == 0) return sd.c;
    if (k == 1) return 1.0 - sd.c * sd.gamma;
    double a = sd.c * sd.gamma * (sd.gamma - 1.0) / 2.0;
    for (std::int64_t i = 2; i < k; ++i) {
        a *= (static_cast<double>(i) - sd.gamma) / static_cast<double>(i + 1);
    }
    return a;
}

double OffspringLaw::pgf(double z) const {
    if (const auto* f = std::get_if<Finite>(&form_)) {
        // Horner over the pmf coefficients.
        double acc = 0.0;
        for (auto it = f->masses.rbegin(); it != f->masses.rend(); ++it) acc = acc * z + *it;
        return acc;
    }
    if (const auto* g = std::get_if<Geometric>(&form_)) {
        return g->q / (1.0 - (1.0 - g->q) * z);
    }
    if (const auto* p = std::get_if<Poisson>(&form_)) {
        return std::exp(p->m * (z - 1.0));
    }
    const auto& sd = std::get<StableDomain>(form_);
    return z + sd.c * std::pow(1.0 - z, sd.gamma);
}

std::int64_t OffspringLaw::sample(Rng& rng) const {
    if (const auto* f = std::get_if<Finite>(&form_)) {
        return static_cast<std::int64_t>(invert_cdf(f->cdf, rng.next_unit()));
    }
    if (const auto* g = std::get_if<Geometric>(&form_)) {
        return sample_geometric(rng, g->q);
    }
    if (const auto* p = std::get_if<Poisson>(&form_)) {
        return sample_poisson(rng, p->m);
    }
    // Sequential inversion; the mean is 1, so the loop runs ~2 steps on
    // average. Heavy-tail excursions advance the pmf by its ratio recursion.
    const auto& sd = std::get<StableDomain>(form_);
    const double u = rng.next_open01();
    double cdf = sd.c;
    if (u <= cdf) return 0;
    cdf += 1.0 - sd.c * sd.gamma;
    if (u <= cdf) return 1;
    double a = sd.c * sd.gamma * (sd.gamma - 1.0) / 2.0;
    std::int64_t k = 2;
    for (;;) {
        cdf += a;
        if (u <= cdf || a < 1e-300) return k;
        a *= (static_cast<double>(k) - sd.gamma) / static_cast<double>(k + 1);
        ++k;
    }
}

std::int64_t OffspringLaw::sample_sum(std::int64_t count, Rng& rng, std::int64_t individual_cap) const {
    if (count < 0) throw ConfigError("sample_sum: negative count");
    if (count == 0) return 0;
    if (const auto* g = std::get_if<Geometric>(&form_)) {
        return sample_negative_binomial(rng, static_cast<double>(count), g->q);
    }
    if (const auto* p = std::get_if<Poisson>(&form_)) {
        return sample_poisson(rng, p->m * static_cast<double>(count));
    }
    if (std::holds_alternative<StableDomain>(form_)) {
        if (count > individual_cap)
            throw SizeCapError("offspring sum", static_cast<std::uint64_t>(count));
        std::int64_t total = 0;
        for (std::int64_t i = 0; i < count; ++i) total += sample(rng);
        return total;
    }
    const auto& f = std::get<Finite>(form_);
    // Point mass: deterministic sum, no draws.
    for (std::size_t i = 0; i < f.masses.size(); ++i) {
        if (f.masses[i] == 1.0) return count * static_cast<std::int64_t>(i);
    }
    if (count > individual_cap) throw SizeCapError("offspring sum", static_cast<std::uint64_t>(count));
    std::int64_t total = 0;
    for (std::int64_t i = 0; i < count; ++i) {
        total += static_cast<std::int64_t>(invert_cdf(f.cdf, rng.next_unit()));
    }
    return total;
}

int OffspringLaw::max_support() const {
    const auto* f = std::get_if<Finite>(&form_);
    if (!f) return -1;
    for (std::size_t i = f->masses.size(); i-- > 0;) {
        if (f->masses[i] > 0.0) return static_cast<int>(i);
    }
    return 0;
}

std::string OffspringLaw::describe() const {
    std::ostringstream os;
    if (const auto* f = std::get_if<Finite>(&form_)) {
        os << "pmf:";
        for (std::size_t i = 0; i < f->masses.size(); ++i) {
            if (i) os << ',';
            os << f->masses[i];
        }
    } else if (const auto* g = std::get_if<Geometric>(&form_)) {
        os << "geometric:q=" << g->q;
    } else if (const auto* p = std::get_if<Poisson>(&form_)) {
        os << "poisson:m=" << p->m;
    } else {
        const auto& sd = std::get<StableDomain>(form_);
        os << "stabledomain:c=" << sd.c << ",gamma=" << sd.gamma;
    }
    return os.str();
}

double gf_iterate(const OffspringLaw& mu, int n, double z) {
    if (n < 0) throw ConfigError("gf_iterate: n must be >= 0");
    if (z < 0.0 || z > 1.0) throw ConfigError("gf_iterate: z must be in [0,1]");
    double v = z;
    for (int i = 0; i < n; ++i) v = mu.pgf(v);
    return v;
}

DispatchingLaw::DispatchingLaw(Form form, std::string description)
    : form_(std::move(form)), description_(std::move(description)) {}

DispatchingLaw DispatchingLaw::table(std::vector<std::tuple<int, int, double>> entries) {
    double total = 0.0;
    for (const auto& [k, j, mass] : entries) {
        if (k < 1 || j < 1 || j > k) throw ConfigError("dispatching table: need 1 <= j <= k");
        if (!(mass > 0.0)) throw ConfigError("dispatching table: masses must be > 0");
        total += mass;
    }
    if (std::fabs(total - 1.0) > 1e-12) throw ConfigError("dispatching table: masses must sum to 1");
    Table t{std::move(entries), {}};
    std::vector<double> masses;
    masses.reserve(t.entries.size());
    for (const auto& e : t.entries) masses.push_back(std::get<2>(e));
    t.cdf = build_cdf(masses);
    std::string desc;
    {
        std::ostringstream os;
        os << "table:";
        for (std::size_t i = 0; i < t.entries.size(); ++i) {
            if (i) os << ';';
            os << std::get<0>(t.entries[i]) << ':' << std::get<1>(t.entries[i]) << ':'
               << std::get<2>(t.entries[i]);
        }
        desc = os.str();
    }
    return DispatchingLaw(Form{std::move(t)}, std::move(desc));
}

DispatchingLaw DispatchingLaw::size_biased(OffspringLaw mu) {
    if (!(mu.mean() > 0.0)) throw ConfigError("size-biased dispatching: offspring mean must be > 0");
    if (mu.is_stable_domain())
        throw ConfigError(
            "size-biased dispatching over a heavy-tailed law has no exact sampler (infinite "
            "size-biased mean); use an explicit table");
    std::string desc = "sizebiased(" + mu.describe() + ")";
    if (mu.is_finite_support()) {
        // Tabulate k mu(k) / mean over the support.
        std::vector<std::tuple<int, int, double>> entries;
        for (int k = 1; k <= mu.max_support(); ++k) {
            const double pk = mu.pmf(k);
            if (pk == 0.0) continue;
            for (int j = 1; j <= k; ++j) entries.emplace_back(k, j, pk / mu.mean());
        }
        auto law = table(std::move(entries));
        law.description_ = std::move(desc);
        return law;
    }
    return DispatchingLaw(Form{UniformRank{std::move(mu), UniformRank::Kind::SizeBiased}},
                          std::move(desc));
}

DispatchingLaw DispatchingLaw::two_type(const std::vector<std::tuple<int, int, double>>& rho) {
    double m = 0.0, total = 0.0;
    for (const auto& [k1, k2, mass] : rho) {
        if (k1 < 0 || k2 < 0 || mass < 0.0) throw ConfigError("two-type rho: invalid entry");
        m += static_cast<double>(k1) * mass;
        total += mass;
    }
    if (std::fabs(total - 1.0) > 1e-12) throw ConfigError("two-type rho: masses must sum to 1");
    if (!(m > 0.0)) throw ConfigError("two-type rho: mean number of type-1 children must be > 0");
    // Each (k1, k2) outcome puts the spine child at each of the k1 type-1
    // positions with equal weight.
    std::map<std::pair<int, int>, double> acc;
    for (const auto& [k1, k2, mass] : rho) {
        const int totalkids = k1 + k2;
        for (int l = 1; l <= k1; ++l) acc[{totalkids, l}] += mass / m;
    }
    std::vector<std::tuple<int, int, double>> entries;
    for (const auto& [kj, mass] : acc) entries.emplace_back(kj.first, kj.second, mass);
    auto law = table(std::move(entries));
    law.description_ = "twotype";
    return law;
}

DispatchingLaw DispatchingLaw::ascending(OffspringLaw mu, std::map<int, std::vector<double>> ladders) {
    if (!mu.is_finite_support())
        throw ConfigError("ascending dispatching with explicit ladders needs finite-support mu");
    const double p0 = mu.pmf(0);
    if (!(p0 < 1.0)) throw ConfigError("ascending dispatching: mu must allow children");
    std::vector<std::tuple<int, int, double>> entries;
    for (int k = 1; k <= mu.max_support(); ++k) {
        const double pk = mu.pmf(k);
        if (pk == 0.0) continue;
        const auto it = ladders.find(k);
        if (it == ladders.end()) throw ConfigError("ascending dispatching: missing ladder for k=" + std::to_string(k));
        const auto& pi = it->second;
        if (pi.size() != static_cast<std::size_t>(k))
            throw ConfigError("ascending dispatching: ladder for k=" + std::to_string(k) +
                              " must have k masses");
        for (int j = 1; j <= k; ++j) {
            const double mass = pk / (1.0 - p0) * pi[j - 1];
            if (mass > 0.0) entries.emplace_back(k, j, mass);
        }
    }
    auto law = table(std::move(entries));
    law.description_ = "ascending(" + mu.describe() + ")";
    return law;
}

DispatchingLaw DispatchingLaw::ascending_uniform(OffspringLaw mu) {
    const double p0 = mu.pmf(0);
    if (!(p0 < 1.0)) throw ConfigError("ascending dispatching: mu must allow children");
    if (mu.is_finite_support()) {
        std::map<int, std::vector<double>> ladders;
        for (int k = 1; k <= mu.max_support(); ++k) {
            if (mu.pmf(k) > 0.0) ladders[k] = std::vector<double>(k, 1.0 / k);
        }
        return ascending(std::move(mu), std::move(ladders));
    }
    std::string desc = "ascending-uniform(" + mu.describe() + ")";
    return DispatchingLaw(Form{UniformRank{std::move(mu), UniformRank::Kind::AscendingUniform}},
                          std::move(desc));
}

std::pair<int, int> DispatchingLaw::sample(Rng& rng) const {
    if (const auto* t = std::get_if<Table>(&form_)) {
        const std::size_t i = invert_cdf(t->cdf, rng.next_unit());
        return {std::get<0>(t->entries[i]), std::get<1>(t->entries[i])};
    }
    const auto& ur = std::get<UniformRank>(form_);
    std::int64_t k;
    if (ur.kind == UniformRank::Kind::AscendingUniform) {
        do {
            k = ur.mu.sample(rng);
        } while (k == 0);
    } else if (ur.mu.is_geometric()) {
        // Size-biased geometric: 1 + sum of two independent geometrics.
        k = 1 + ur.mu.sample(rng) + ur.mu.sample(rng);
    } else {
        // Size-biased Poisson(m) is 1 + Poisson(m).
        k = 1 + ur.mu.sample(rng);
    }
    const int j = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(k)));
    return {static_cast<int>(k), j};
}

double DispatchingLaw::mass(int k, int j) const {
    if (k < 1 || j < 1 || j > k) return 0.0;
    if (const auto* t = std::get_if<Table>(&form_)) {
        for (const auto& [kk, jj, m] : t->entries) {
            if (kk == k && jj == j) return m;
        }
        return 0.0;
    }
    const auto& ur = std::get<UniformRank>(form_);
    if (ur.kind == UniformRank::Kind::AscendingUniform) {
        return ur.mu.pmf(k) / (1.0 - ur.mu.pmf(0)) / static_cast<double>(k);
    }
    return ur.mu.pmf(k) / ur.mu.mean();
}

double DispatchingLaw::mean_total_minus_one() const {
    if (const auto* t = std::get_if<Table>(&form_)) {
        double s = 0.0;
        for (const auto& [k, j, m] : t->entries) s += (k - 1.0) * m;
        return s;
    }
    const auto& ur = std::get<UniformRank>(form_);
    if (ur.kind == UniformRank::Kind::AscendingUniform) {
        const double p0 = ur.mu.pmf(0);
        return (ur.mu.mean() - (1.0 - p0)) / (1.0 - p0);
    }
    return (ur.mu.second_moment() - ur.mu.mean()) / ur.mu.mean();
}

double DispatchingLaw::mean_left() const {
    if (const auto* t = std::get_if<Table>(&form_)) {
        double s = 0.0;
        for (const auto& [k, j, m] : t->entries) s += (j - 1.0) * m;
        return s;
    }
    // Rank uniform given k for both non-table forms.
    return 0.5 * mean_total_minus_one();
}

double DispatchingLaw::mean_right() const {
    if (const auto* t = std::get_if<Table>(&form_)) {
        double s = 0.0;
        for (const auto& [k, j, m] : t->entries) s += (k - j) * m;
        return s;
    }
    return 0.5 * mean_total_minus_one();
}

std::string DispatchingLaw::describe() const { return description_; }

OffspringLaw parse_offspring(const std::string& literal) {
    const std::size_t colon = literal.find(':');
    if (colon == std::string::npos) throw ParseError("offspring literal with ':'", 0);
    const std::string head = literal.substr(0, colon);
    const std::string body = literal.substr(colon + 1);
    const std::size_t off = colon + 1;
    const auto parse_num = [&](const std::string& text, std::size_t at) {
        char* end = nullptr;
        const double v = std::strtod(text.c_str(), &end);
        if (end == text.c_str() || *end != '\0') throw ParseError("number", at);
        return v;
    };
    if (head == "geometric") {
        if (body.rfind("q=", 0) != 0) throw ParseError("q=<f>", off);
        return OffspringLaw::geometric(parse_num(body.substr(2), off + 2));
    }
    if (head == "poisson") {
        if (body.rfind("m=", 0) != 0) throw ParseError("m=<f>", off);
        return OffspringLaw::poisson(parse_num(body.substr(2), off + 2));
    }
    if (head == "stabledomain") {
        double c = -1.0, gamma = -1.0;
        std::size_t pos = 0;
        while (pos <= body.size()) {
            std::size_t end = body.find(',', pos);
            if (end == std::string::npos) end = body.size();
            const std::string item = body.substr(pos, end - pos);
            if (item.rfind("c=", 0) == 0) {
                c = parse_num(item.substr(2), off + pos + 2);
            } else if (item.rfind("gamma=", 0) == 0) {
                gamma = parse_num(item.substr(6), off + pos + 6);
            } else {
                throw ParseError("c=<f> or gamma=<f>", off + pos);
            }
            pos = end + 1;
            if (end == body.size()) break;
        }
        if (c < 0.0 || gamma < 0.0) throw ParseError("both c= and gamma=", off);
        return OffspringLaw::stable_domain(c, gamma);
    }
    if (head == "delta") {
        if (body.rfind("k=", 0) != 0) throw ParseError("k=<n>", off);
        return OffspringLaw::dirac(static_cast<int>(parse_num(body.substr(2), off + 2)));
    }
    if (head == "pmf") {
        std::vector<double> masses;
        std::size_t pos = 0;
        while (pos <= body.size()) {
            std::size_t end = body.find(',', pos);
            if (end == std::string::npos) end = body.size();
            masses.push_back(parse_num(body.substr(pos, end - pos), off + pos));
            pos = end + 1;
            if (end == body.size()) break;
        }
        return OffspringLaw::finite_pmf(std::move(masses));
    }
    throw ParseError("offspring family (geometric|poisson|delta|pmf|stabledomain)", 0);
}

DispatchingLaw parse_dispatching(const std::string& literal, const OffspringLaw& mu) {
    if (literal == "sizebiased") return DispatchingLaw::size_biased(mu);
    if (literal == "ascending-uniform") return DispatchingLaw::ascending_uniform(mu);
    const std::size_t colon = literal.find(':');
    const std::string head = literal.substr(0, colon);
    if (head == "table" || head == "twotype") {
        const std::string body = literal.substr(colon + 1);
        std::vector<std::tuple<int, int, double>> entries;
        std::size_t pos = 0;
        while (pos <= body.size()) {
            std::size_t end = body.find(';', pos);
            if (end == std::string::npos) end = body.size();
            const std::string item = body.substr(pos, end - pos);
            int a = 0, b = 0;
            double m = 0.0;
            if (std::sscanf(item.c_str(), "%d:%d:%lf", &a, &b, &m) != 3)
                throw ParseError("k:j:m triple", colon + 1 + pos);
            entries.emplace_back(a, b, m);
            pos = end + 1;
            if (end == body.size()) break;
        }
        return head == "table" ? DispatchingLaw::table(std::move(entries))
                               : DispatchingLaw::two_type(entries);
    }
    throw ParseError("dispatching literal (sizebiased|table|twotype|ascending-uniform)", 0);
}

}  // namespace gwlab
