#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <string>

#include "hlog/errors.hpp"

namespace hlog {

/// Growth-function kinds selectable by name in configs:
///   theta               t / (log(e+|x|) + log(e+t))
///   power:p             t^p
///   power_weight:p:a    |x|^a t^p
///   custom              arbitrary callable (tests only)
enum class GrowthKind { theta, power, power_weight, custom };

/// Musielak-Orlicz integrand p(x,t): an Orlicz function of t for every x,
/// uniformly Muckenhoupt in x, of uniform lower type `lower_type` in (0,1]
/// and upper type 1.
///
/// Class parameters are declared, not computed: `lower_type` plays the role
/// of i(p) and `muckenhoupt_inf` the role of q(p) in the admissibility count
/// N_p; both are sup/inf over classes in the underlying theory and are taken
/// as ground truth here.  `certificate_q` (> 1) is the default class at
/// which the Muckenhoupt certificate is measured; for theta the infimum is 1
/// but membership only holds for q strictly above it.
struct GrowthFunction {
    GrowthKind kind = GrowthKind::theta;
    double power_p = 1.0;       // p for power kinds
    double weight_alpha = 0.0;  // alpha for power_weight
    double lower_type = 1.0;    // declared i(p) in (0,1]
    double upper_type = 1.0;    // always 1 by scope
    double muckenhoupt_inf = 1.0; // declared q(p) >= 1
    double certificate_q = 2.0;   // > 1
    std::function<double(const std::array<double, 3>&, int, double)> custom_eval; // (x, n, t)
    std::string name = "theta";

    static GrowthFunction theta();
    static GrowthFunction power(double p);
    static GrowthFunction power_weight(double p, double alpha, int n);

    /// Parse a config spec: "theta", "power:p", "power_weight:p:alpha".
    static GrowthFunction parse(const std::string& spec, int n);
};

/// p(x, t); negative t is a domain error.
double eval_growth(const GrowthFunction& gf, const std::array<double, 3>& x, int n, double t);

/// ceil(n (q(p)/i(p) - 1)) from the declared parameters; 0 for theta.
int moment_order_bound(const GrowthFunction& gf, int n);

/// Admissible triple (p, q, s): q > max(1, q(p)) and s >= N_p.
struct AdmissibleTriple {
    GrowthFunction growth;
    double q = 2.0;
    int s = 0;

    AdmissibleTriple(GrowthFunction gf, double q_, int s_, int n);
};

} // namespace hlog
