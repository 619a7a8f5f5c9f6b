#include "wet/orderstats.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace wet {

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

void check_query(const GQuery& q) {
    if (q.n1 < 1 || q.m < 1) throw ConfigError("GQuery requires n1 >= 1 and m >= 1");
}

const cpp_int& factorial(int n) {
    static std::vector<cpp_int> table{1, 1};
    static std::mutex mu;
    std::lock_guard lock(mu);
    while (static_cast<int>(table.size()) <= n)
        table.push_back(table.back() * static_cast<int>(table.size()));
    return table[static_cast<std::size_t>(n)];
}

cpp_int binomial(int n, int k) {
    return factorial(n) / (factorial(k) * factorial(n - k));
}

// Enumerates all nonnegative (k_0, ..., k_{m-1}) with sum n and accumulates
// the corresponding series term into acc.
void accumulate_compositions(int slot, int remaining, int m, int n,
                             std::vector<int>& k, cpp_rational& acc) {
    if (slot == m - 1) {
        k[static_cast<std::size_t>(slot)] = remaining;
        int s = 0;
        for (int i = 0; i < m; ++i) s += i * k[static_cast<std::size_t>(i)];
        cpp_int num = factorial(n) * factorial(s);
        cpp_int den = 1;
        for (int i = 0; i < m; ++i) {
            den *= factorial(k[static_cast<std::size_t>(i)]);
            den *= boost::multiprecision::pow(factorial(i),
                                              static_cast<unsigned>(k[static_cast<std::size_t>(i)]));
        }
        den *= boost::multiprecision::pow(cpp_int(n), static_cast<unsigned>(s + 1));
        acc += cpp_rational(num, den);
        return;
    }
    for (int v = 0; v <= remaining; ++v) {
        k[static_cast<std::size_t>(slot)] = v;
        accumulate_compositions(slot + 1, remaining - v, m, n, k, acc);
    }
}

cpp_rational series_coefficient(int n, int m) {
    cpp_rational acc = 0;
    std::vector<int> k(static_cast<std::size_t>(m), 0);
    accumulate_compositions(0, n, m, n, k, acc);
    return acc;
}

// Adaptive Simpson with accumulated error estimate and an evaluation budget.
template <class F>
double simpson_recurse(F& f, double a, double mid, double b,
                       double fa, double fm, double fb, double whole,
                       double tol, int depth, double& err_acc, long& budget) {
    if (budget <= 0) throw ConvergenceFailure("quadrature evaluation budget exhausted");
    budget -= 2;
    const double lm = 0.5 * (a + mid), rm = 0.5 * (mid + b);
    const double flm = f(lm), frm = f(rm);
    const double h = b - a;
    const double left = h / 12.0 * (fa + 4.0 * flm + fm);
    const double right = h / 12.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol || depth <= 0) {
        if (depth <= 0 && std::abs(delta) > 15.0 * tol)
            throw ConvergenceFailure("quadrature recursion depth exhausted");
        err_acc += std::abs(delta) / 15.0;
        return left + right + delta / 15.0;
    }
    return simpson_recurse(f, a, lm, mid, fa, flm, fm, left, 0.5 * tol, depth - 1, err_acc, budget)
         + simpson_recurse(f, mid, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1, err_acc, budget);
}

template <class F>
double adaptive_simpson(F f, double a, double b, double abs_tol,
                        double& err_acc, long& budget) {
    const double mid = 0.5 * (a + b);
    const double fa = f(a), fm = f(mid), fb = f(b);
    budget -= 3;
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_recurse(f, a, mid, b, fa, fm, fb, whole, abs_tol, 52, err_acc, budget);
}

// integral over [v, inf) of erlang_survival(u, m) du
// = sum_{j=0}^{m-1} (m - j) e^{-v} v^j / j!
double survival_tail_integral(double v, int m) {
    double sum = 0.0;
    for (int j = 0; j < m; ++j)
        sum += (m - j) * std::exp(-v + j * std::log(v) - std::lgamma(j + 1.0));
    return sum;
}

} // namespace

double erlang_survival(double v, int m) {
    if (v < 0.0) throw ConfigError("erlang_survival requires v >= 0");
    if (m < 1) throw ConfigError("erlang_survival requires m >= 1");
    if (v == 0.0) return 1.0;
    // log-domain terms so that v ~ 1e4 does not overflow the running power
    double sum = 0.0;
    for (int k = 0; k < m; ++k)
        sum += std::exp(-v + k * std::log(v) - std::lgamma(k + 1.0));
    return std::min(sum, 1.0);
}

GValue g_exact_series(const GQuery& q, int series_limit) {
    check_query(q);
    if (q.n1 > series_limit) throw LimitExceeded("g_exact_series: n1 exceeds series limit");
    cpp_rational total = 0;
    for (int n = 1; n <= q.n1; ++n) {
        cpp_rational term = cpp_rational(binomial(q.n1, n)) * series_coefficient(n, q.m);
        if (n % 2 == 1)
            total += term;
        else
            total -= term;
    }
    return GValue{total.convert_to<double>(), GMethod::ExactSeries, 0.0};
}

GValue g_quadrature(const GQuery& q, double rel_tol) {
    check_query(q);
    if (rel_tol <= 0.0) throw ConfigError("g_quadrature requires rel_tol > 0");
    const int n1 = q.n1, m = q.m;
    // value >= m, so an absolute target of rel_tol * m / 2 is conservative
    const double abs_tol = 0.5 * rel_tol * m;

    // find v_max with n1 * survival(v_max) below a tenth of the budget, then
    // bound the discarded tail by n1 * int_{v_max}^inf survival
    double v_max = m + 1.0;
    while (n1 * erlang_survival(v_max, m) >= 0.1 * abs_tol) v_max *= 1.5;
    const double tail_bound = n1 * survival_tail_integral(v_max, m);

    auto integrand = [n1, m](double v) {
        const double s = erlang_survival(v, m);
        if (s >= 1.0) return 1.0;
        // 1 - (1 - s)^n1, stable for s near 0 and near 1
        return -std::expm1(n1 * std::log1p(-s));
    };
    double err_acc = 0.0;
    long budget = 40'000'000;
    const double interval_tol = std::max(abs_tol - tail_bound, 0.1 * abs_tol);
    const double value = adaptive_simpson(integrand, 0.0, v_max, interval_tol, err_acc, budget);
    return GValue{value, GMethod::Quadrature, err_acc + tail_bound};
}

GValue g(const GQuery& q) {
    check_query(q);
    static std::map<std::pair<int, int>, GValue> cache;
    static std::mutex mu;
    const std::pair<int, int> key{q.n1, q.m};
    {
        std::lock_guard lock(mu);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    const GValue result =
        q.n1 <= kGSeriesLimit ? g_exact_series(q) : g_quadrature(q, 1e-9);
    std::lock_guard lock(mu);
    cache.emplace(key, result);
    return result;
}

double g_value(int n1, int m) { return g(GQuery{n1, m}).value; }

} // namespace wet
