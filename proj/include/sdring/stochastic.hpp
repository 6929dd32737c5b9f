#pragma once

#include <Eigen/Dense>

#include <complex>
#include <optional>

#include "sdring/model.hpp"

namespace sdring::stochastic {

struct TransitionRates {
    Eigen::VectorXd w_plus;   // bond x, hop x -> x+1: nu_x exp(+f_x/2)
    Eigen::VectorXd w_minus;  // bond x, hop x+1 -> x: nu_x exp(-f_x/2)
};

TransitionRates transition_rates(const DisorderRealization& real);

// Column-stochastic generator acting on probability column vectors:
// W[(x+1)%N, x] = w+_x, W[x, (x+1)%N] = w-_x, diagonal closes the columns.
Eigen::MatrixXd build_rate_matrix(const DisorderRealization& real);

// Same off-diagonals, but the second-order diagonal
//   -[(nu_x + nu_{x-1}) + (nu/2)(f_x - f_{x-1}) + (nu/4) f^2]
// with nu = mean(nu_x) and f = mean(f_x). This is the variant whose
// determinant obeys the ring identity against the Hermitian surrogate.
Eigen::MatrixXd build_rate_matrix_leading(const DisorderRealization& real);

// Eigenvalues of the uniform-rate ring, -(w+ + w-)(1 - cos q) - i (w+ - w-) sin q
// for q = 2 pi k / N, k = 0..N-1.
Eigen::VectorXcd clean_rate_spectrum(double w_plus, double w_minus, int N);

struct HermitianSurrogate {
    Eigen::MatrixXd matrix;       // symmetric; diagonal as above, off-diagonal -nu_x
    Eigen::VectorXd eigenvalues;  // ascending
};

HermitianSurrogate hermitian_surrogate(const DisorderRealization& real);

// Relative residual of
//   det(lambda + W) = det(lambda - H_W) - 2 [cosh(N f / 2) - 1] prod_x(-nu_x)
// with W the leading-order variant. Direct-determinant regime, N <= 12.
double determinant_identity_residual(const DisorderRealization& real,
                                     std::complex<double> lambda);

// F(lambda) = (1/N) sum_k ln |(lambda - eps_k) / nu_geometric|.
// nullopt marks a pole (lambda sits on an eigenvalue).
std::optional<double> log_characteristic(const Eigen::VectorXd& epsilons,
                                         double nu_geometric, double lambda);

// Inverse-localization-length envelope
//   kappa(lambda) = alpha0 f_c - alpha_c ((f - f_c)/f_c) sqrt(lambda/nu)
//                   + sigma_nu^2 / (8 nu^3) lambda.
// alpha0, alpha_c are caller-supplied constants.
double thouless_envelope(double lambda, double f, double f_c, double sigma_nu,
                         double nu, double alpha0, double alpha_c);

// f_c = Var(f_x) / 4: Box (full width) sigma^2/48, Gaussian (std) sigma^2/4.
double critical_bias_estimate(double sigma_f, DistShape shape);

// Positive root of <exp(-mu f_x)> = 1 over the samples, |g| < 1e-12.
// Throws NoRootError when mean <= 0, samples are constant, or no sample is
// negative.
double spreading_exponent(const Eigen::VectorXd& f_samples);

// Closed form for Gaussian field statistics: mu = 2 f / sigma_f^2.
double spreading_exponent_gaussian(double sigma_f, double f);

double geometric_mean(const Eigen::VectorXd& values);

}  // namespace sdring::stochastic
