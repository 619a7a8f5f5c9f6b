#include "wet/roots.hpp"

#include "wet/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>

namespace wet {

double polynomial_eval(const std::vector<double>& coeffs, double x) {
    double v = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * x + *it;
    return v;
}

namespace {

double polynomial_deriv_eval(const std::vector<double>& coeffs, double x) {
    double v = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 1;)
        v = v * x + static_cast<double>(i) * coeffs[i];
    return v;
}

void newton_polish(const std::vector<double>& coeffs, double& x) {
    for (int iter = 0; iter < 8; ++iter) {
        const double f = polynomial_eval(coeffs, x);
        const double fp = polynomial_deriv_eval(coeffs, x);
        if (fp == 0.0) break;
        const double step = f / fp;
        x -= step;
        if (std::abs(step) <= 1e-15 * (1.0 + std::abs(x))) break;
    }
}

} // namespace

std::vector<double> real_polynomial_roots(std::vector<double> coeffs) {
    // trim a numerically vanishing leading coefficient
    double scale = 0.0;
    for (double c : coeffs) scale = std::max(scale, std::abs(c));
    if (scale == 0.0) throw RootFindingFailure("real_polynomial_roots: zero polynomial");
    while (coeffs.size() > 1 && std::abs(coeffs.back()) < 1e-14 * scale) coeffs.pop_back();

    std::vector<double> roots;
    // deflate roots at the origin
    while (coeffs.size() > 1 && coeffs.front() == 0.0) {
        roots.push_back(0.0);
        coeffs.erase(coeffs.begin());
    }
    const int deg = static_cast<int>(coeffs.size()) - 1;
    if (deg >= 1) {
        Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
        for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -coeffs[static_cast<std::size_t>(i)] / coeffs.back();
        for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
        Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
        if (solver.info() != Eigen::Success)
            throw RootFindingFailure("real_polynomial_roots: eigen decomposition failed");
        for (int i = 0; i < deg; ++i) {
            const std::complex<double> z = solver.eigenvalues()(i);
            if (std::abs(z.imag()) <= 1e-8 * (1.0 + std::abs(z.real()))) {
                double x = z.real();
                newton_polish(coeffs, x);
                roots.push_back(x);
            }
        }
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double a, double b) {
                                return std::abs(a - b) <= 1e-9 * (1.0 + std::abs(a));
                            }),
                roots.end());
    return roots;
}

} // namespace wet
