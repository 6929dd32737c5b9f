#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "sdring/model.hpp"

namespace sdring::lindblad {

using Complex = std::complex<double>;

// rho element (n, m) -> flat index n*N + m (row-major over the density matrix).
inline Eigen::Index flat_index(int n, int m, int N) {
    return static_cast<Eigen::Index>(n) * N + m;
}

// Dense N^2 x N^2 storage; beyond this the superoperator no longer fits a
// desk-scale machine.
inline constexpr int kMaxDenseSites = 96;

// H = (c/2)(D + D^dag) + U(x). The two bonds of an N=2 ring add up to c.
Eigen::MatrixXcd build_hamiltonian(const DisorderRealization& real, double c);

// Ring-periodic bias: a diagonal superoperator with entries
//   i E_bias (N / 2 pi) sin((2 pi / N)(n - m))
// which vanishes on the diagonal sector and is odd in (n - m).
Eigen::MatrixXcd build_bias_superoperator(int N, double E_bias);

// Full generator: -i[H, .] + bias + bond jumps + pure dephasing.
// Bond jumps: |x+1><x| at rate w+_x and |x><x+1| at rate w-_x, which is the
// unique orientation whose c = 0 diagonal dynamics reproduces the rate matrix.
Eigen::MatrixXcd build_lindbladian(const DisorderRealization& real,
                                   const ModelParams& params);

struct DecoherenceMode {
    int r;           // signed site separation of the density-matrix stripe
    Complex lambda;  // gamma + w+ + w- - i E_bias r
    int multiplicity;
};

// Clean-ring c = 0 decoherence branch, one entry per separation r != 0, each
// N-fold degenerate. Uses the uniform -iEr form; the assembled superoperator
// carries the periodicity-respecting sinusoidal bias instead, so at large |r|
// the two disagree by E (r - (N/2pi) sin(2 pi r / N)).
std::vector<DecoherenceMode> clean_decoherence_spectrum(const ModelParams& params);

// Analytic relaxation branch of the clean ring,
//   lambda_q = gamma0 - sqrt(gamma_q^2 - 4 c^2 sin^2(q/2)),
// gamma0 = gamma + w+ + w-, gamma_q = gamma + w+ e^{-iq} + w- e^{+iq}.
// The square-root branch is the one continuously connected to c = 0; finite
// f_bias is allowed, E_bias is neglected.
Complex clean_relaxation_rate(double q, const ModelParams& params);

struct MomentumBlock {
    double q;
    int r_cutoff;
    Eigen::MatrixXcd entries;  // (2 r_cutoff + 1)^2, rows ordered r = -cutoff..cutoff

    // Decay rate of the eigenvector with the largest r = 0 component.
    Complex central_decay_rate() const;
};

// q block of the clean-ring generator truncated to |r| <= r_cutoff.
MomentumBlock momentum_block(double q, const ModelParams& params, int r_cutoff);
// Same block from raw rates, for callers that set E independently of w+-.
MomentumBlock momentum_block(double q, double gamma, double w_plus, double w_minus,
                             double c, double E_bias, int r_cutoff);

// Default per-bond decay scale gamma_x = -(gamma + w+_x + w-_x), chosen so
// that lambda - gamma_x is positive near lambda = 0.
Eigen::VectorXd default_decay_scales(const DisorderRealization& real,
                                     const ModelParams& params);

// Hopping-dressed bond rates
//   nu_eff_x = nu_x + (c^2/2) (lambda - gamma_x) / ((lambda - gamma_x)^2 + E_x^2).
Eigen::VectorXcd effective_bond_rates(const DisorderRealization& real,
                                      const ModelParams& params, Complex lambda,
                                      const Eigen::VectorXd& gamma_x);

// Order-of-magnitude width of the hopping-induced resistor disorder,
// (c^2 / nu^3) T_bath^2 sigma_f^2. Callers clip it below 2 nu before using it
// as a sampling width.
double effective_resistor_width(const ModelParams& params);

}  // namespace sdring::lindblad
