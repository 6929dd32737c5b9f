#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

#include "sdring/errors.hpp"

namespace sdring::spectral {

using Complex = std::complex<double>;

struct Eigensolution {
    Eigen::VectorXcd values;   // sorted by (Re, Im)
    Eigen::MatrixXcd vectors;  // unit columns, same order; empty when not requested
    double max_residual = 0.0; // max_j ||A v_j - w_j v_j||_2 / ||A||_1
};

// Dense general eigensolver (LAPACK zgeev). Residuals are checked against
// 1e-9 ||A||_1 for every pair; failures raise SolverError.
Eigensolution eigendecompose(const Eigen::MatrixXcd& matrix, bool with_vectors = true);
Eigen::VectorXcd eigenvalues_only(const Eigen::MatrixXcd& matrix);

struct ModeMetrics {
    Complex trace_q;     // Q = trace of the unit-normalized mode matrix
    double diag_weight;  // sum_x |rho_xx|^2, the diagonal share of the norm
    double ipr;          // sum |rho|^4
};

// mode has length N^2, flat index n*N + m; it is unit-normalized internally.
ModeMetrics mode_metrics(const Eigen::VectorXcd& mode, int N);

enum class Branch { Relaxation, Decoherence, Unresolved };
enum class MatrixKind { RateMatrix, Lindbladian };

struct ModeRecord {
    Complex lambda;      // decay rate, lambda = -eigenvalue
    double abs_q;        // |Q|
    double diag_weight;
    double ipr;
    Branch branch;
    int pair_id;         // conjugate-pair index, -1 for real modes
};

struct SpectrumReport {
    MatrixKind kind;
    int N;
    double tol_im;
    std::vector<ModeRecord> modes;  // sorted by (Re lambda, Im lambda)

    Eigen::VectorXcd all_lambdas() const;
    Eigen::VectorXcd relaxation_lambdas() const;
    // Index of the stationary mode (smallest |lambda|).
    int stationary_index() const;
};

// Classification: rate-matrix modes are all Relaxation. For a Lindbladian the
// N modes of largest diagonal weight are Relaxation and the rest Decoherence;
// when the weight gap between rank N and rank N+1 falls under 10% of the
// rank-N weight, modes inside the ambiguous band are labeled Unresolved.
SpectrumReport build_report(const Eigensolution& sol, MatrixKind kind, int N,
                            double tol_im = -1.0);

// 1e-8 * max |lambda|.
double default_tol_im(const Eigen::VectorXcd& lambdas);

// Number of entries with |Im| > tol_im; throws PairingAnomaly on odd counts.
int count_complex(const Eigen::VectorXcd& lambdas, double tol_im);

struct TransportFit {
    double v;  // drift velocity from Im(lambda) ~ v q
    double D;  // diffusion from Re(lambda) ~ D q^2
    double residual;
    bool non_parabolic;  // residual > 5%
};

// Least-squares over the modes with |q| <= 8 pi / N (q = 0 excluded).
// Input pairs (q, lambda); at least 5 contributing modes required.
TransportFit fit_transport(const std::vector<std::pair<double, Complex>>& modes, int N);

// Assign wavenumbers to relaxation modes of a clean ring by the dominant
// discrete-Fourier component of the eigenvector (diagonal part for a
// Lindbladian). q is mapped to (-pi, pi].
std::vector<std::pair<double, Complex>> wavenumber_map(const Eigensolution& sol,
                                                       MatrixKind kind, int N);

// Columns: re_lambda, im_lambda, Q, IPR, branch, pair_id.
void write_spectrum_csv(const SpectrumReport& report, const std::string& path);

}  // namespace sdring::spectral
