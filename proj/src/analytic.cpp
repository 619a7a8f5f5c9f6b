#include "wet/analytic.hpp"

#include "wet/orderstats.hpp"

#include <cmath>

namespace wet {

void SystemParams::validate() const {
    if (m < 1) throw ConfigError("SystemParams: m must be >= 1");
    if (n_subbands < 1) throw ConfigError("SystemParams: n_subbands must be >= 1");
    if (!(bandwidth_hz > 0)) throw ConfigError("SystemParams: bandwidth_hz must be > 0");
    if (!(beta > 0)) throw ConfigError("SystemParams: beta must be > 0");
    if (!(p_f > 0)) throw ConfigError("SystemParams: p_f must be > 0");
    if (!(n0 > 0)) throw ConfigError("SystemParams: n0 must be > 0");
    if (!(eta > 0 && eta <= 1)) throw ConfigError("SystemParams: eta must be in (0, 1]");
    if (!(t_block > 0)) throw ConfigError("SystemParams: t_block must be > 0");
}

double r_h(int n1, double e1, const SystemParams& p) {
    if (n1 < 1) throw ConfigError("r_h: n1 must be >= 1");
    if (e1 < 0) throw ConfigError("r_h: e1 must be >= 0");
    const double gval = g_value(n1, p.m);
    return (p.beta * p.beta * e1 * gval + p.beta * p.n0 * p.m) / (p.beta * e1 + p.n0);
}

LmmseMoments lmmse_moments(double r_h_value, double e2, const SystemParams& p) {
    const double den = e2 * r_h_value + p.n0 * p.m;
    LmmseMoments out;
    out.b = std::sqrt(e2) * r_h_value / den;
    out.mse = p.n0 * p.m * r_h_value / den;
    out.est_power = e2 * r_h_value * r_h_value / den;
    return out;
}

double q_bar(const TrainingDesign& d, const SystemParams& p) {
    const double rh = r_h(d.n1, d.e1, p);
    const double loss = (p.m - 1) * p.n0 / (d.e2 * rh + p.n0 * p.m);
    return p.etp() * rh * (1.0 - loss);
}

EnergyReport q_net(const TrainingDesign& d, const SystemParams& p) {
    EnergyReport rep;
    rep.r_h = r_h(d.n1, d.e1, p);
    const double den = d.e2 * rep.r_h + p.n0 * p.m;
    rep.e2_term = p.etp() * rep.r_h * (p.m - 1) * p.n0 / den;
    rep.q_bar = p.etp() * rep.r_h - rep.e2_term;
    rep.q_net = rep.q_bar - d.e1 * d.n1 - d.e2;
    return rep;
}

double e2_star(double r_h_value, const SystemParams& p) {
    if (!(r_h_value > 0)) throw ConfigError("e2_star: r_h must be > 0");
    const double v = std::sqrt(p.etp() * (p.m - 1) * p.n0) - p.n0 * p.m / r_h_value;
    return std::max(v, 0.0);
}

double alpha(const SystemParams& p) {
    if (p.m == 1) throw DegenerateCase("alpha: undefined for M = 1 (phase II never pays)");
    return p.n0 * p.m / std::sqrt(p.etp() * (p.m - 1) * p.n0);
}

double q_net_reduced(int n1, double e1, const SystemParams& p) {
    const double rh = r_h(n1, e1, p);
    const double cost = e1 * n1;
    if (p.m > 1 && rh > alpha(p)) {
        return p.etp() * rh + p.n0 * p.m / rh - cost
             - 2.0 * std::sqrt(p.etp() * (p.m - 1) * p.n0);
    }
    return p.etp() * rh / p.m - cost;
}

double q_net_reduced_deriv(int n1, double e1, const SystemParams& p) {
    const double gval = g_value(n1, p.m);
    const double d = p.beta * e1 + p.n0;
    const double rh_prime = p.beta * p.beta * p.n0 * (gval - p.m) / (d * d);
    const double rh = r_h(n1, e1, p);
    if (p.m > 1 && rh > alpha(p))
        return (p.etp() - p.n0 * p.m / (rh * rh)) * rh_prime - n1;
    return p.etp() / p.m * rh_prime - n1;
}

Baselines baselines(const SystemParams& p) {
    return Baselines{p.etp() * p.beta * g_value(p.n_subbands, p.m), p.etp() * p.beta};
}

} // namespace wet
