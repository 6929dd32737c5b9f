#include "sdring/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace sdring::stochastic {

using Complex = std::complex<double>;

TransitionRates transition_rates(const DisorderRealization& real) {
    TransitionRates rates;
    rates.w_plus = (real.nu_x.array() * (0.5 * real.f_x.array()).exp()).matrix();
    rates.w_minus = (real.nu_x.array() * (-0.5 * real.f_x.array()).exp()).matrix();
    return rates;
}

namespace {

// Off-diagonal skeleton shared by the exact and leading-order builds.
// Entries accumulate so that the two bonds of an N=2 ring add up.
Eigen::MatrixXd rate_offdiagonals(const DisorderRealization& real) {
    const int n = real.size();
    const TransitionRates rates = transition_rates(real);
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (int x = 0; x < n; ++x) {
        const int xp = (x + 1) % n;
        w(xp, x) += rates.w_plus[x];
        w(x, xp) += rates.w_minus[x];
    }
    return w;
}

}  // namespace

Eigen::MatrixXd build_rate_matrix(const DisorderRealization& real) {
    Eigen::MatrixXd w = rate_offdiagonals(real);
    for (int x = 0; x < real.size(); ++x) w(x, x) = -(w.col(x).sum() - w(x, x));
    return w;
}

Eigen::MatrixXd build_rate_matrix_leading(const DisorderRealization& real) {
    const int n = real.size();
    const double nu_bar = real.nu_x.mean();
    const double f_bar = real.f_x.mean();
    Eigen::MatrixXd w = rate_offdiagonals(real);
    for (int x = 0; x < n; ++x) {
        const int xm = (x + n - 1) % n;
        w(x, x) = -((real.nu_x[x] + real.nu_x[xm]) +
                    0.5 * nu_bar * (real.f_x[x] - real.f_x[xm]) +
                    0.25 * nu_bar * f_bar * f_bar);
    }
    return w;
}

Eigen::VectorXcd clean_rate_spectrum(double w_plus, double w_minus, int N) {
    Eigen::VectorXcd eigs(N);
    for (int k = 0; k < N; ++k) {
        const double q = 2.0 * std::numbers::pi * k / N;
        eigs[k] = Complex(-(w_plus + w_minus) * (1.0 - std::cos(q)),
                          -(w_plus - w_minus) * std::sin(q));
    }
    return eigs;
}

HermitianSurrogate hermitian_surrogate(const DisorderRealization& real) {
    const int n = real.size();
    const double nu_bar = real.nu_x.mean();
    const double f_bar = real.f_x.mean();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (int x = 0; x < n; ++x) {
        const int xp = (x + 1) % n;
        h(xp, x) += -real.nu_x[x];
        h(x, xp) += -real.nu_x[x];
    }
    for (int x = 0; x < n; ++x) {
        const int xm = (x + n - 1) % n;
        h(x, x) = (real.nu_x[x] + real.nu_x[xm]) +
                  0.5 * nu_bar * (real.f_x[x] - real.f_x[xm]) +
                  0.25 * nu_bar * f_bar * f_bar;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
    if (solver.info() != Eigen::Success)
        throw SolverError("symmetric eigensolver failed on the Hermitian surrogate");
    return HermitianSurrogate{std::move(h), solver.eigenvalues()};
}

double determinant_identity_residual(const DisorderRealization& real, Complex lambda) {
    const int n = real.size();
    if (n > 12) throw ConfigError("determinant identity check is limited to N <= 12");
    const double half_flux = 0.5 * real.f_x.sum();
    if (std::abs(half_flux) > 700.0)
        throw std::overflow_error("N*f/2 too large: cosh would overflow");

    const Eigen::MatrixXcd lhs_matrix =
        build_rate_matrix_leading(real).cast<Complex>() +
        lambda * Eigen::MatrixXcd::Identity(n, n);
    const Eigen::MatrixXcd rhs_matrix =
        lambda * Eigen::MatrixXcd::Identity(n, n) -
        hermitian_surrogate(real).matrix.cast<Complex>();

    double prod_neg_nu = 1.0;
    for (int x = 0; x < n; ++x) prod_neg_nu *= -real.nu_x[x];

    const Complex lhs = lhs_matrix.determinant();
    const Complex rhs =
        rhs_matrix.determinant() - 2.0 * (std::cosh(half_flux) - 1.0) * prod_neg_nu;
    return std::abs(lhs - rhs) /
           (std::abs(lhs) + std::abs(rhs) + std::numeric_limits<double>::epsilon());
}

std::optional<double> log_characteristic(const Eigen::VectorXd& epsilons,
                                         double nu_geometric, double lambda) {
    if (epsilons.size() == 0) throw ConfigError("empty eigenvalue list");
    if (!(nu_geometric > 0.0)) throw ConfigError("nu_geometric must be > 0");
    double acc = 0.0;
    for (double eps : epsilons) {
        const double d = std::abs(lambda - eps);
        if (d < 1e-300) return std::nullopt;  // pole
        acc += std::log(d / nu_geometric);
    }
    return acc / static_cast<double>(epsilons.size());
}

double thouless_envelope(double lambda, double f, double f_c, double sigma_nu,
                         double nu, double alpha0, double alpha_c) {
    if (lambda < 0.0) throw ConfigError("lambda must be >= 0");
    if (!(f_c > 0.0)) throw ConfigError("f_c must be > 0");
    return alpha0 * f_c - alpha_c * ((f - f_c) / f_c) * std::sqrt(lambda / nu) +
           sigma_nu * sigma_nu / (8.0 * nu * nu * nu) * lambda;
}

double critical_bias_estimate(double sigma_f, DistShape shape) {
    if (sigma_f < 0.0) throw ConfigError("sigma_f must be >= 0");
    const double variance =
        shape == DistShape::Box ? sigma_f * sigma_f / 12.0 : sigma_f * sigma_f;
    return 0.25 * variance;
}

double spreading_exponent(const Eigen::VectorXd& f_samples) {
    if (f_samples.size() == 0) throw NoRootError("no samples");
    const double mean = f_samples.mean();
    if (!(mean > 0.0)) throw NoRootError("mean bias must be positive");
    if (f_samples.maxCoeff() == f_samples.minCoeff())
        throw NoRootError("constant samples: <exp(-mu f)> stays below 1");
    if (f_samples.minCoeff() >= 0.0)
        throw NoRootError("no negative field values: <exp(-mu f_x)> never returns to 1");

    const auto g = [&](double mu) {
        return (-mu * f_samples.array()).exp().mean() - 1.0;
    };

    // g(0) = 0 and g'(0) = -mean < 0; the negative tail makes g -> +inf.
    double hi = 1.0;
    int guard = 0;
    while (g(hi) <= 0.0) {
        hi *= 2.0;
        if (++guard > 80) throw NoRootError("failed to bracket the root");
    }
    double lo = hi * 0.5;
    while (guard < 200 && g(lo) > 0.0) {
        lo *= 0.5;
        ++guard;
    }

    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        const double val = g(mid);
        if (std::abs(val) < 1e-12) return mid;
        (val < 0.0 ? lo : hi) = mid;
    }
    if (std::abs(g(mid)) < 1e-12) return mid;
    throw NoRootError("root refinement did not reach |g| < 1e-12");
}

double spreading_exponent_gaussian(double sigma_f, double f) {
    if (!(sigma_f > 0.0)) throw ConfigError("sigma_f must be > 0");
    return 2.0 * f / (sigma_f * sigma_f);
}

double geometric_mean(const Eigen::VectorXd& values) {
    if (values.size() == 0) throw ConfigError("empty vector");
    if (values.minCoeff() <= 0.0) throw ConfigError("geometric mean needs positive entries");
    return std::exp(values.array().log().mean());
}

}  // namespace sdring::stochastic
