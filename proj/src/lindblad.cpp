#include "sdring/lindblad.hpp"

#include <cmath>
#include <numbers>

#include "sdring/stochastic.hpp"

namespace sdring::lindblad {

namespace {
constexpr Complex kI{0.0, 1.0};
}

Eigen::MatrixXcd build_hamiltonian(const DisorderRealization& real, double c) {
    const int n = real.size();
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
    for (int x = 0; x < n; ++x) {
        const int xp = (x + 1) % n;
        h(xp, x) += 0.5 * c;
        h(x, xp) += 0.5 * c;
        h(x, x) += real.U[x];
    }
    return h;
}

Eigen::MatrixXcd build_bias_superoperator(int N, double E_bias) {
    const Eigen::Index dim = static_cast<Eigen::Index>(N) * N;
    Eigen::MatrixXcd bias = Eigen::MatrixXcd::Zero(dim, dim);
    const double scale = E_bias * N / (2.0 * std::numbers::pi);
    for (int n = 0; n < N; ++n)
        for (int m = 0; m < N; ++m) {
            const Eigen::Index i = flat_index(n, m, N);
            bias(i, i) = kI * scale * std::sin(2.0 * std::numbers::pi * (n - m) / N);
        }
    return bias;
}

Eigen::MatrixXcd build_lindbladian(const DisorderRealization& real,
                                   const ModelParams& params) {
    params.validate();
    const int n = real.size();
    if (n > kMaxDenseSites)
        throw ConfigError("Lindbladian limited to N <= " + std::to_string(kMaxDenseSites) +
                          " (dense N^4 storage)");
    const Eigen::Index dim = static_cast<Eigen::Index>(n) * n;
    const auto rates = stochastic::transition_rates(real);
    const Eigen::MatrixXcd h = build_hamiltonian(real, params.c);
    const double e_bias = derive_scales(params).E_bias;

    Eigen::MatrixXcd sup = Eigen::MatrixXcd::Zero(dim, dim);

    // coherent part, -i (H rho - rho H)
    for (int np = 0; np < n; ++np)
        for (int nn = 0; nn < n; ++nn) {
            if (h(np, nn) == 0.0) continue;
            for (int m = 0; m < n; ++m) sup(flat_index(np, m, n), flat_index(nn, m, n)) -= kI * h(np, nn);
        }
    for (int m = 0; m < n; ++m)
        for (int mp = 0; mp < n; ++mp) {
            if (h(m, mp) == 0.0) continue;
            for (int nn = 0; nn < n; ++nn) sup(flat_index(nn, mp, n), flat_index(nn, m, n)) += kI * h(m, mp);
        }

    // bond jumps: population x -> x+1 at w+_x, x+1 -> x at w-_x
    for (int x = 0; x < n; ++x) {
        const int xp = (x + 1) % n;
        sup(flat_index(xp, xp, n), flat_index(x, x, n)) += rates.w_plus[x];
        sup(flat_index(x, x, n), flat_index(xp, xp, n)) += rates.w_minus[x];
    }
    // anticommutator with Gamma = sum_x (w+_x + w-_{x-1}) Q_x
    Eigen::VectorXd gamma_site(n);
    for (int x = 0; x < n; ++x) gamma_site[x] = rates.w_plus[x] + rates.w_minus[(x + n - 1) % n];
    for (int nn = 0; nn < n; ++nn)
        for (int m = 0; m < n; ++m)
            sup(flat_index(nn, m, n), flat_index(nn, m, n)) -=
                0.5 * (gamma_site[nn] + gamma_site[m]);

    // pure dephasing: off-diagonals decay at gamma, diagonals untouched
    for (int nn = 0; nn < n; ++nn)
        for (int m = 0; m < n; ++m)
            if (nn != m) sup(flat_index(nn, m, n), flat_index(nn, m, n)) -= params.gamma;

    sup += build_bias_superoperator(n, e_bias);
    return sup;
}

std::vector<DecoherenceMode> clean_decoherence_spectrum(const ModelParams& params) {
    params.validate();
    const double wp = params.nu * std::exp(0.5 * params.f_bias);
    const double wm = params.nu * std::exp(-0.5 * params.f_bias);
    const double e_bias = derive_scales(params).E_bias;
    std::vector<DecoherenceMode> modes;
    const int n = params.N;
    for (int r = -(n - 1) / 2; r <= n / 2; ++r) {
        if (r == 0) continue;
        modes.push_back({r, Complex(params.gamma + wp + wm, -e_bias * r), n});
    }
    return modes;
}

Complex clean_relaxation_rate(double q, const ModelParams& params) {
    params.validate();
    const double wp = params.nu * std::exp(0.5 * params.f_bias);
    const double wm = params.nu * std::exp(-0.5 * params.f_bias);
    const Complex gamma0 = params.gamma + wp + wm;
    const Complex gamma_q =
        params.gamma + wp * std::exp(-kI * q) + wm * std::exp(kI * q);
    const double s_half = std::sin(0.5 * q);
    const Complex z = gamma_q * gamma_q - 4.0 * params.c * params.c * s_half * s_half;

    Complex root = std::sqrt(z);
    const double align = (std::conj(gamma_q) * root).real();
    if (std::abs(align) > 1e-14 * std::abs(gamma_q) * std::abs(root)) {
        if (align < 0.0) root = -root;
    } else {
        // gamma_q is orthogonal to the principal root (real gamma_q, z < 0):
        // both signs occur in the spectrum as a conjugate pair. Orient by the
        // half of the Brillouin zone so q and -q return conjugates.
        const double q_mod = q - 2.0 * std::numbers::pi * std::floor(q / (2.0 * std::numbers::pi));
        const double sign = q_mod <= std::numbers::pi ? 1.0 : -1.0;
        if (root.imag() * sign < 0.0) root = -root;
    }
    return gamma0 - root;
}

MomentumBlock momentum_block(double q, const ModelParams& params, int r_cutoff) {
    params.validate();
    const double wp = params.nu * std::exp(0.5 * params.f_bias);
    const double wm = params.nu * std::exp(-0.5 * params.f_bias);
    return momentum_block(q, params.gamma, wp, wm, params.c, derive_scales(params).E_bias,
                          r_cutoff);
}

MomentumBlock momentum_block(double q, double gamma, double w_plus, double w_minus,
                             double c, double E_bias, int r_cutoff) {
    if (r_cutoff < 1) throw ConfigError("r_cutoff must be >= 1");
    const double wp = w_plus;
    const double wm = w_minus;
    const Complex gamma0 = gamma + wp + wm;
    const Complex gamma_q = gamma + wp * std::exp(-kI * q) + wm * std::exp(kI * q);
    const double e_bias = E_bias;
    const double coupling = c * std::sin(0.5 * q);

    const int size = 2 * r_cutoff + 1;
    Eigen::MatrixXcd block = Eigen::MatrixXcd::Zero(size, size);
    for (int i = 0; i < size; ++i) {
        const int r = i - r_cutoff;
        block(i, i) = -gamma0 - kI * e_bias * static_cast<double>(r);
        if (r == 0) block(i, i) += gamma_q;
        if (i + 1 < size) {
            block(i + 1, i) -= coupling;  // -c sin(q/2) D_perp
            block(i, i + 1) += coupling;  // +c sin(q/2) D_perp^dag
        }
    }
    return MomentumBlock{q, r_cutoff, std::move(block)};
}

Complex MomentumBlock::central_decay_rate() const {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(entries);
    if (solver.info() != Eigen::Success)
        throw SolverError("eigensolver failed on the momentum block");
    const int center = r_cutoff;
    int best = 0;
    double best_weight = -1.0;
    for (int i = 0; i < entries.rows(); ++i) {
        const double w = std::abs(solver.eigenvectors()(center, i));
        if (w > best_weight) {
            best_weight = w;
            best = i;
        }
    }
    return -solver.eigenvalues()[best];
}

Eigen::VectorXd default_decay_scales(const DisorderRealization& real,
                                     const ModelParams& params) {
    const auto rates = stochastic::transition_rates(real);
    return (-(params.gamma + rates.w_plus.array() + rates.w_minus.array())).matrix();
}

Eigen::VectorXcd effective_bond_rates(const DisorderRealization& real,
                                      const ModelParams& params, Complex lambda,
                                      const Eigen::VectorXd& gamma_x) {
    const int n = real.size();
    if (gamma_x.size() != n) throw ConfigError("gamma_x must have one entry per bond");
    Eigen::VectorXcd out(n);
    for (int x = 0; x < n; ++x) {
        const Complex d = lambda - gamma_x[x];
        const Complex denom = d * d + real.E_x[x] * real.E_x[x];
        if (std::abs(denom) < 1e-12)
            throw SolverError("effective-rate pole: |(lambda-gamma_x)^2 + E_x^2| < 1e-12");
        out[x] = real.nu_x[x] + 0.5 * params.c * params.c * d / denom;
    }
    return out;
}

double effective_resistor_width(const ModelParams& params) {
    const double t = params.T_bath;
    return params.c * params.c / std::pow(params.nu, 3) * t * t * params.sigma_f *
           params.sigma_f;
}

}  // namespace sdring::lindblad
