#pragma once

#include "wet/errors.hpp"

namespace wet {

/// Largest N1 for which the exact alternating series is evaluated; beyond this
/// the composition enumeration grows combinatorially and the quadrature path
/// takes over.
inline constexpr int kGSeriesLimit = 12;

/// Query for G(N1, M) = E[max of N1 i.i.d. squared norms of M-dim standard
/// complex Gaussian vectors] (unit-variance Erlang order statistic, shape M).
struct GQuery {
    int n1; ///< number of i.i.d. variates, >= 1
    int m;  ///< Erlang shape (antenna count), >= 1
};

enum class GMethod { ExactSeries, Quadrature };

struct GValue {
    double value;           ///< >= m, nondecreasing in n1 and m
    GMethod method;
    double abs_error_bound; ///< 0 for the exact series
};

/// Survival function of the unit-rate Erlang(m) distribution,
/// sum_{k=0}^{m-1} e^{-v} v^k / k!, stable for v up to 1e4 and beyond.
double erlang_survival(double v, int m);

/// Exact evaluation of the alternating binomial/multinomial series in big
/// rational arithmetic. Throws LimitExceeded when q.n1 > series_limit.
GValue g_exact_series(const GQuery& q, int series_limit = kGSeriesLimit);

/// E[V] = integral of the max's survival function, by adaptive quadrature on
/// [0, v_max] with an analytic bound on the truncated tail. rel_tol is the
/// requested relative tolerance; throws ConvergenceFailure if unreachable.
GValue g_quadrature(const GQuery& q, double rel_tol);

/// Dispatch: exact series for small n1, quadrature (rel tol 1e-9) otherwise.
/// Results are cached per (n1, m); safe for concurrent use.
GValue g(const GQuery& q);

/// Convenience accessor for g(q).value.
double g_value(int n1, int m);

} // namespace wet
