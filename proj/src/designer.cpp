#include "wet/designer.hpp"

#include "wet/orderstats.hpp"
#include "wet/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wet {

namespace {

// One Newton step on the rational derivative itself (second derivative by
// central difference), keeping the root only if the residual improves.
double polish_on_derivative(int n1, double e1, const SystemParams& p) {
    const double f = q_net_reduced_deriv(n1, e1, p);
    const double h = std::max(1e-7 * e1, 1e-30);
    const double fpp =
        (q_net_reduced_deriv(n1, e1 + h, p) - q_net_reduced_deriv(n1, e1 - h, p)) / (2.0 * h);
    if (fpp == 0.0) return e1;
    const double candidate = e1 - f / fpp;
    if (candidate >= 0.0 &&
        std::abs(q_net_reduced_deriv(n1, candidate, p)) < std::abs(f))
        return candidate;
    return e1;
}

// Stationary points of the no-phase-II objective etp*R_h/M - E1*N1, in the
// dimensionless variable x = beta*E1/N0: (x+1)^2 = kappa (G-M) / (M N1).
std::vector<double> low_branch_roots(int n1, double gval, double kappa, const SystemParams& p) {
    std::vector<double> out;
    const double radicand = kappa * (gval - p.m) / (p.m * n1);
    if (radicand > 0.0) {
        const double x = std::sqrt(radicand) - 1.0;
        if (x > 0.0) out.push_back(x);
    }
    return out;
}

// Quartic from clearing denominators of the full-objective stationarity
// condition, again in x = beta*E1/N0 with kappa = etp*beta^2/N0:
//   N1 (x+1)^2 (Gx+M)^2 - kappa (G-M) (Gx+M)^2 + M (G-M) (x+1)^2 = 0.
std::vector<double> high_branch_roots(int n1, double gval, double kappa, const SystemParams& p) {
    const double m = p.m;
    const double a0 = 1.0, a1 = 2.0, a2 = 1.0;             // (x+1)^2
    const double b0 = m * m, b1 = 2.0 * gval * m, b2 = gval * gval; // (Gx+M)^2
    std::vector<double> c(5, 0.0);
    c[0] = n1 * a0 * b0;
    c[1] = n1 * (a0 * b1 + a1 * b0);
    c[2] = n1 * (a0 * b2 + a1 * b1 + a2 * b0);
    c[3] = n1 * (a1 * b2 + a2 * b1);
    c[4] = n1 * a2 * b2;
    const double gm = gval - m;
    c[0] += -kappa * gm * b0 + m * gm * a0;
    c[1] += -kappa * gm * b1 + m * gm * a1;
    c[2] += -kappa * gm * b2 + m * gm * a2;
    return real_polynomial_roots(c);
}

} // namespace

CaseLabel classify_case(int n1, const SystemParams& p) {
    if (n1 < 1) throw ConfigError("classify_case: n1 must be >= 1");
    if (p.m == 1) return CaseLabel::Case1; // threshold infinite, phase II never pays
    const double a = alpha(p);
    const double gval = g_value(n1, p.m);
    if (a >= p.beta * gval) return CaseLabel::Case1;
    if (a <= p.beta * p.m) return CaseLabel::Case2;
    return CaseLabel::Case3;
}

double e1_star_case1(int n1, const SystemParams& p) {
    const double gval = g_value(n1, p.m);
    const double v = std::sqrt(p.etp() * p.n0 * (gval / p.m - 1.0) / n1) - p.n0 / p.beta;
    return std::max(v, 0.0);
}

double case3_boundary_e1(int n1, const SystemParams& p) {
    const double a = alpha(p);
    const double gval = g_value(n1, p.m);
    return p.n0 * (a - p.beta * p.m) / (p.beta * (p.beta * gval - a));
}

std::vector<double> stationary_candidates(int n1, const SystemParams& p, E1Branch branch) {
    const double gval = g_value(n1, p.m);
    if (gval - p.m <= 0.0) return {}; // n1 = 1: R_h constant, derivative is -n1 < 0
    const double kappa = p.etp() * p.beta * p.beta / p.n0;

    std::vector<double> xs;
    if (p.m == 1) {
        // loss term absent; every branch collapses to the no-phase-II objective
        xs = low_branch_roots(n1, gval, kappa, p);
    } else {
        switch (branch) {
        case E1Branch::Case2:
        case E1Branch::Case3High:
            xs = high_branch_roots(n1, gval, kappa, p);
            break;
        case E1Branch::Case3Low:
            xs = low_branch_roots(n1, gval, kappa, p);
            break;
        }
    }

    double lo = 0.0, hi = std::numeric_limits<double>::infinity();
    if (p.m > 1 && branch == E1Branch::Case3Low) hi = case3_boundary_e1(n1, p);
    if (p.m > 1 && branch == E1Branch::Case3High) lo = case3_boundary_e1(n1, p);

    std::vector<double> out;
    for (double x : xs) {
        if (!(x >= 0.0)) continue;
        double e1 = p.n0 * x / p.beta;
        if (e1 < lo || e1 > hi) continue;
        // interior points only; boundary values are injected by optimize_e1
        if (e1 > lo && (std::isinf(hi) || e1 < hi)) e1 = polish_on_derivative(n1, e1, p);
        out.push_back(e1);
    }
    return out;
}

E1Solution optimize_e1(int n1, const SystemParams& p) {
    std::vector<double> candidates{0.0};
    const CaseLabel label = classify_case(n1, p);
    switch (label) {
    case CaseLabel::Case1:
        candidates.push_back(e1_star_case1(n1, p));
        break;
    case CaseLabel::Case2: {
        auto roots = stationary_candidates(n1, p, E1Branch::Case2);
        candidates.insert(candidates.end(), roots.begin(), roots.end());
        break;
    }
    case CaseLabel::Case3: {
        candidates.push_back(case3_boundary_e1(n1, p));
        auto low = stationary_candidates(n1, p, E1Branch::Case3Low);
        auto high = stationary_candidates(n1, p, E1Branch::Case3High);
        candidates.insert(candidates.end(), low.begin(), low.end());
        candidates.insert(candidates.end(), high.begin(), high.end());
        break;
    }
    }

    E1Solution best{0.0, -std::numeric_limits<double>::infinity(), 0};
    for (double e1 : candidates) {
        const double value = q_net_reduced(n1, e1, p);
        ++best.candidates;
        if (value > best.q_net) {
            best.q_net = value;
            best.e1 = e1;
        }
    }
    return best;
}

DesignSolution optimize_design(const SystemParams& p) {
    p.validate();
    DesignSolution best{};
    best.q_net_star = -std::numeric_limits<double>::infinity();
    long evaluated = 0;
    for (int n1 = 1; n1 <= p.n_subbands; ++n1) {
        const E1Solution sol = optimize_e1(n1, p);
        evaluated += sol.candidates;
        if (sol.q_net > best.q_net_star) { // strict: ties keep the smaller n1
            best.n1_star = n1;
            best.e1_star = sol.e1;
            best.q_net_star = sol.q_net;
            best.case_label = classify_case(n1, p);
        }
    }
    best.e2_star = e2_star(r_h(best.n1_star, best.e1_star, p), p);
    best.candidates_evaluated = evaluated;
    return best;
}

Phase1OnlyDesign optimize_phase1_only(const SystemParams& p) {
    p.validate();
    Phase1OnlyDesign best{1, 0.0, -std::numeric_limits<double>::infinity()};
    for (int n1 = 1; n1 <= p.n_subbands; ++n1) {
        const double e1 = e1_star_case1(n1, p);
        for (double cand : {0.0, e1}) {
            const double value = p.etp() * r_h(n1, cand, p) / p.m - cand * n1;
            if (value > best.q_net) best = Phase1OnlyDesign{n1, cand, value};
        }
    }
    return best;
}

Phase2OnlyDesign optimize_phase2_only(const SystemParams& p) {
    p.validate();
    const double rh = p.beta * p.m; // no phase I: one fixed sub-band
    const double e2 = e2_star(rh, p);
    const double qbar = p.etp() * rh * (1.0 - (p.m - 1) * p.n0 / (e2 * rh + p.n0 * p.m));
    return Phase2OnlyDesign{e2, qbar - e2};
}

} // namespace wet
