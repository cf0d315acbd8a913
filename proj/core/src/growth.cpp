#include "hlog/growth.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace hlog {

namespace {

double point_norm(const std::array<double, 3>& x, int n) {
    double s = 0.0;
    for (int a = 0; a < n; ++a) s += x[a] * x[a];
    return std::sqrt(s);
}

} // namespace

GrowthFunction GrowthFunction::theta() {
    GrowthFunction gf;
    gf.kind = GrowthKind::theta;
    gf.lower_type = 1.0;
    gf.muckenhoupt_inf = 1.0;
    gf.certificate_q = 2.0;
    gf.name = "theta";
    return gf;
}

GrowthFunction GrowthFunction::power(double p) {
    if (!(p > 0.0) || p > 1.0) throw config_error("growth power: p must be in (0,1]");
    GrowthFunction gf;
    gf.kind = GrowthKind::power;
    gf.power_p = p;
    gf.lower_type = p;
    gf.muckenhoupt_inf = 1.0;
    gf.certificate_q = 2.0;
    std::ostringstream os;
    os << "power:" << p;
    gf.name = os.str();
    return gf;
}

GrowthFunction GrowthFunction::power_weight(double p, double alpha, int n) {
    if (!(p > 0.0) || p > 1.0) throw config_error("growth power_weight: p must be in (0,1]");
    if (alpha < 0.0 || alpha >= n) throw config_error("growth power_weight: alpha must be in [0,n)");
    GrowthFunction gf;
    gf.kind = GrowthKind::power_weight;
    gf.power_p = p;
    gf.weight_alpha = alpha;
    gf.lower_type = p;
    gf.muckenhoupt_inf = 1.0 + alpha / n;  // |x|^alpha lies in A_q for q > 1 + alpha/n
    gf.certificate_q = std::max(2.0, gf.muckenhoupt_inf + 1.0);
    std::ostringstream os;
    os << "power_weight:" << p << ":" << alpha;
    gf.name = os.str();
    return gf;
}

GrowthFunction GrowthFunction::parse(const std::string& spec, int n) {
    if (spec == "theta") return theta();
    auto split = [](const std::string& s) {
        std::vector<std::string> parts;
        std::istringstream is(s);
        std::string tok;
        while (std::getline(is, tok, ':')) parts.push_back(tok);
        return parts;
    };
    auto parts = split(spec);
    try {
        if (parts.size() == 2 && parts[0] == "power") return power(std::stod(parts[1]));
        if (parts.size() == 3 && parts[0] == "power_weight")
            return power_weight(std::stod(parts[1]), std::stod(parts[2]), n);
    } catch (const config_error&) {
        throw;
    } catch (const std::exception&) {
        throw config_error("growth: cannot parse numeric parameter in '" + spec + "'");
    }
    throw config_error("growth: unknown spec '" + spec + "'");
}

double eval_growth(const GrowthFunction& gf, const std::array<double, 3>& x, int n, double t) {
    if (t < 0.0) throw std::domain_error("eval_growth: negative level t");
    switch (gf.kind) {
    case GrowthKind::theta:
        return t / (std::log(M_E + point_norm(x, n)) + std::log(M_E + t));
    case GrowthKind::power:
        return std::pow(t, gf.power_p);
    case GrowthKind::power_weight:
        return std::pow(point_norm(x, n), gf.weight_alpha) * std::pow(t, gf.power_p);
    case GrowthKind::custom:
        if (!gf.custom_eval) throw config_error("growth custom: missing callable");
        return gf.custom_eval(x, n, t);
    }
    throw config_error("growth: bad kind");
}

int moment_order_bound(const GrowthFunction& gf, int n) {
    const double ratio = gf.muckenhoupt_inf / gf.lower_type;
    const double v = n * (ratio - 1.0);
    if (v <= 0.0) return 0;
    return static_cast<int>(std::ceil(v - 1e-12));
}

AdmissibleTriple::AdmissibleTriple(GrowthFunction gf, double q_, int s_, int n)
    : growth(std::move(gf)), q(q_), s(s_) {
    if (!(q > 1.0) || !(q > growth.muckenhoupt_inf))
        throw config_error("admissible triple: q must exceed max(1, q(p))");
    if (s < moment_order_bound(growth, n))
        throw config_error("admissible triple: s below the moment-order bound N_p");
}

} // namespace hlog
