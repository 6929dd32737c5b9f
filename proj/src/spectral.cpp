#include "sdring/spectral.hpp"

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <numeric>

namespace sdring::spectral {

namespace {

std::vector<int> sort_permutation(const Eigen::VectorXcd& values) {
    std::vector<int> perm(values.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::sort(perm.begin(), perm.end(), [&](int a, int b) {
        if (values[a].real() != values[b].real()) return values[a].real() < values[b].real();
        return values[a].imag() < values[b].imag();
    });
    return perm;
}

}  // namespace

Eigensolution eigendecompose(const Eigen::MatrixXcd& matrix, bool with_vectors) {
    if (matrix.rows() != matrix.cols()) throw ConfigError("matrix must be square");
    if (!matrix.allFinite()) throw ConfigError("matrix has non-finite entries");
    const int n = static_cast<int>(matrix.rows());
    if (n == 0) throw ConfigError("matrix is empty");

    Eigen::MatrixXcd work = matrix;  // zgeev overwrites its input
    Eigen::VectorXcd values(n);
    Eigen::MatrixXcd vectors;
    if (with_vectors) vectors.resize(n, n);

    const int info = LAPACKE_zgeev(
        LAPACK_COL_MAJOR, 'N', with_vectors ? 'V' : 'N', n, work.data(), n, values.data(),
        nullptr, 1, with_vectors ? vectors.data() : nullptr, with_vectors ? n : 1);
    if (info != 0)
        throw SolverError("zgeev did not converge (info=" + std::to_string(info) + ")");

    const auto perm = sort_permutation(values);
    Eigensolution sol;
    sol.values.resize(n);
    if (with_vectors) sol.vectors.resize(n, n);
    for (int i = 0; i < n; ++i) {
        sol.values[i] = values[perm[i]];
        if (with_vectors) sol.vectors.col(i) = vectors.col(perm[i]);
    }

    if (with_vectors) {
        const double norm_a = matrix.cwiseAbs().colwise().sum().maxCoeff();
        const Eigen::MatrixXcd residual =
            matrix * sol.vectors - sol.vectors * sol.values.asDiagonal();
        sol.max_residual = residual.colwise().norm().maxCoeff() / std::max(norm_a, 1e-300);
        if (sol.max_residual > 1e-9)
            throw SolverError("eigenpair residual " + std::to_string(sol.max_residual) +
                              " exceeds 1e-9 * ||A||");
    }
    return sol;
}

Eigen::VectorXcd eigenvalues_only(const Eigen::MatrixXcd& matrix) {
    return eigendecompose(matrix, false).values;
}

ModeMetrics mode_metrics(const Eigen::VectorXcd& mode, int N) {
    if (mode.size() != static_cast<Eigen::Index>(N) * N)
        throw ConfigError("mode vector length must be N^2");
    const double norm = mode.norm();
    if (!(norm > 0.0)) throw ConfigError("zero mode vector");
    const Eigen::VectorXcd v = mode / norm;

    ModeMetrics m{};
    for (int x = 0; x < N; ++x) {
        const Complex d = v[static_cast<Eigen::Index>(x) * N + x];
        m.trace_q += d;
        m.diag_weight += std::norm(d);
    }
    m.ipr = v.array().abs2().square().sum();
    return m;
}

double default_tol_im(const Eigen::VectorXcd& lambdas) {
    double radius = 0.0;
    for (Eigen::Index i = 0; i < lambdas.size(); ++i)
        radius = std::max(radius, std::abs(lambdas[i]));
    return 1e-8 * radius;
}

int count_complex(const Eigen::VectorXcd& lambdas, double tol_im) {
    int count = 0;
    for (Eigen::Index i = 0; i < lambdas.size(); ++i)
        if (std::abs(lambdas[i].imag()) > tol_im) ++count;
    if (count % 2 != 0)
        throw PairingAnomaly("odd number of complex eigenvalues (" + std::to_string(count) +
                             "): tol_im does not separate the conjugate pairs");
    return count;
}

Eigen::VectorXcd SpectrumReport::all_lambdas() const {
    Eigen::VectorXcd out(modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i) out[static_cast<Eigen::Index>(i)] = modes[i].lambda;
    return out;
}

Eigen::VectorXcd SpectrumReport::relaxation_lambdas() const {
    std::vector<Complex> vals;
    for (const auto& m : modes)
        if (m.branch == Branch::Relaxation) vals.push_back(m.lambda);
    return Eigen::Map<const Eigen::VectorXcd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

int SpectrumReport::stationary_index() const {
    int best = 0;
    double best_abs = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const double a = std::abs(modes[i].lambda);
        if (a < best_abs) {
            best_abs = a;
            best = static_cast<int>(i);
        }
    }
    return best;
}

SpectrumReport build_report(const Eigensolution& sol, MatrixKind kind, int N,
                            double tol_im) {
    const Eigen::Index n_modes = sol.values.size();
    const bool lindblad = kind == MatrixKind::Lindbladian;
    if (lindblad && n_modes != static_cast<Eigen::Index>(N) * N)
        throw ConfigError("Lindbladian spectrum must have N^2 modes");
    if (!lindblad && n_modes != N) throw ConfigError("rate-matrix spectrum must have N modes");
    if (lindblad && sol.vectors.cols() != n_modes)
        throw ConfigError("Lindbladian report needs eigenvectors for classification");

    SpectrumReport report;
    report.kind = kind;
    report.N = N;
    report.modes.resize(static_cast<std::size_t>(n_modes));

    for (Eigen::Index i = 0; i < n_modes; ++i) {
        ModeRecord& rec = report.modes[static_cast<std::size_t>(i)];
        rec.lambda = -sol.values[i];
        rec.pair_id = -1;
        if (lindblad) {
            const ModeMetrics m = mode_metrics(sol.vectors.col(i), N);
            rec.abs_q = std::abs(m.trace_q);
            rec.diag_weight = m.diag_weight;
            rec.ipr = m.ipr;
        } else if (sol.vectors.cols() == n_modes) {
            // rate-matrix mode as a diagonal density matrix
            const Eigen::VectorXcd v = sol.vectors.col(i) / sol.vectors.col(i).norm();
            rec.abs_q = std::abs(v.sum());
            rec.diag_weight = 1.0;
            rec.ipr = v.array().abs2().square().sum();
        } else {
            rec.abs_q = 0.0;
            rec.diag_weight = 1.0;
            rec.ipr = 0.0;
        }
        rec.branch = Branch::Relaxation;
    }

    std::sort(report.modes.begin(), report.modes.end(), [](const ModeRecord& a, const ModeRecord& b) {
        if (a.lambda.real() != b.lambda.real()) return a.lambda.real() < b.lambda.real();
        return a.lambda.imag() < b.lambda.imag();
    });

    report.tol_im = tol_im >= 0.0 ? tol_im : default_tol_im(report.all_lambdas());

    if (lindblad) {
        // Rank the diagonal weights; the relaxation branch carries the top N.
        std::vector<double> weights;
        weights.reserve(report.modes.size());
        for (const auto& m : report.modes) weights.push_back(m.diag_weight);
        std::sort(weights.begin(), weights.end(), std::greater<>());
        const double w_n = weights[static_cast<std::size_t>(N) - 1];
        const double w_next = weights[static_cast<std::size_t>(N)];
        const bool clean_gap = (w_n - w_next) >= 0.1 * w_n;
        const double band_lo = 0.9 * w_n;
        const double band_hi = w_n / 0.9;
        for (auto& m : report.modes) {
            if (clean_gap) {
                m.branch = m.diag_weight >= w_n ? Branch::Relaxation : Branch::Decoherence;
            } else if (m.diag_weight > band_hi) {
                m.branch = Branch::Relaxation;
            } else if (m.diag_weight < band_lo) {
                m.branch = Branch::Decoherence;
            } else {
                m.branch = Branch::Unresolved;
            }
        }
    }

    // Conjugate pairing over the decay rates.
    const double radius = std::max(1.0, report.modes.empty()
                                            ? 0.0
                                            : std::abs(report.modes.back().lambda));
    const double pair_tol = 1e-9 * radius;
    std::vector<int> plus, minus;
    for (std::size_t i = 0; i < report.modes.size(); ++i) {
        const double im = report.modes[i].lambda.imag();
        if (im > report.tol_im) plus.push_back(static_cast<int>(i));
        else if (im < -report.tol_im) minus.push_back(static_cast<int>(i));
    }
    if (plus.size() != minus.size())
        throw PairingAnomaly("conjugate halves differ in size: " + std::to_string(plus.size()) +
                             " vs " + std::to_string(minus.size()));
    // greedy nearest-partner matching; robust to degenerate real parts
    std::vector<bool> used(minus.size(), false);
    for (std::size_t k = 0; k < plus.size(); ++k) {
        const Complex la = report.modes[static_cast<std::size_t>(plus[k])].lambda;
        std::size_t best = minus.size();
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < minus.size(); ++j) {
            if (used[j]) continue;
            const Complex lb = report.modes[static_cast<std::size_t>(minus[j])].lambda;
            const double d = std::abs(la - std::conj(lb));
            if (d < best_dist) {
                best_dist = d;
                best = j;
            }
        }
        if (best == minus.size() || best_dist > std::max(pair_tol, 10.0 * report.tol_im))
            throw PairingAnomaly("unmatched conjugate pair near Re(lambda)=" +
                                 std::to_string(la.real()));
        used[best] = true;
        report.modes[static_cast<std::size_t>(plus[k])].pair_id = static_cast<int>(k);
        report.modes[static_cast<std::size_t>(minus[best])].pair_id = static_cast<int>(k);
    }
    return report;
}

TransportFit fit_transport(const std::vector<std::pair<double, Complex>>& modes, int N) {
    const double q_max = 8.0 * std::numbers::pi / N + 1e-12;
    std::vector<std::pair<double, Complex>> sel;
    for (const auto& [q, lam] : modes)
        if (q != 0.0 && std::abs(q) <= q_max) sel.push_back({q, lam});
    if (sel.size() < 5)
        throw ConfigError("transport fit needs at least 5 modes with |q| <= 8 pi / N");

    // leading coefficients with the next-order band curvature as nuisance
    // terms: Im = v q + b q^3, Re = D q^2 + e q^4
    double m2 = 0, m4 = 0, m6 = 0, m8 = 0, s1 = 0, s3 = 0, s2 = 0, s4 = 0;
    for (const auto& [q, lam] : sel) {
        const double q2 = q * q;
        m2 += q2;
        m4 += q2 * q2;
        m6 += q2 * q2 * q2;
        m8 += q2 * q2 * q2 * q2;
        s1 += q * lam.imag();
        s3 += q * q2 * lam.imag();
        s2 += q2 * lam.real();
        s4 += q2 * q2 * lam.real();
    }
    TransportFit fit{};
    const double det_odd = m2 * m6 - m4 * m4;
    const double det_even = m4 * m8 - m6 * m6;
    double b = 0.0, e = 0.0;
    if (std::abs(det_odd) > 1e-300 && std::abs(det_even) > 1e-300) {
        fit.v = (m6 * s1 - m4 * s3) / det_odd;
        b = (m2 * s3 - m4 * s1) / det_odd;
        fit.D = (m8 * s2 - m6 * s4) / det_even;
        e = (m4 * s4 - m6 * s2) / det_even;
    } else {
        fit.v = s1 / m2;
        fit.D = s2 / m4;
    }

    double err = 0.0, scale = 0.0;
    for (const auto& [q, lam] : sel) {
        const Complex model(fit.D * q * q + e * q * q * q * q,
                            fit.v * q + b * q * q * q);
        err += std::norm(lam - model);
        scale += std::norm(lam);
    }
    fit.residual = std::sqrt(err / std::max(scale, 1e-300));
    fit.non_parabolic = fit.residual > 0.05;
    return fit;
}

std::vector<std::pair<double, Complex>> wavenumber_map(const Eigensolution& sol,
                                                       MatrixKind kind, int N) {
    if (sol.vectors.cols() != sol.values.size())
        throw ConfigError("wavenumber assignment needs eigenvectors");
    std::vector<std::pair<double, Complex>> out;

    std::vector<int> indices;
    if (kind == MatrixKind::RateMatrix) {
        indices.resize(static_cast<std::size_t>(N));
        std::iota(indices.begin(), indices.end(), 0);
    } else {
        // relaxation branch = the N modes of largest diagonal weight
        std::vector<std::pair<double, int>> weighted;
        for (Eigen::Index i = 0; i < sol.values.size(); ++i)
            weighted.push_back({mode_metrics(sol.vectors.col(i), N).diag_weight,
                                static_cast<int>(i)});
        std::sort(weighted.begin(), weighted.end(), std::greater<>());
        for (int k = 0; k < N; ++k) indices.push_back(weighted[static_cast<std::size_t>(k)].second);
    }

    for (int idx : indices) {
        Eigen::VectorXcd site(N);
        if (kind == MatrixKind::RateMatrix) {
            site = sol.vectors.col(idx);
        } else {
            for (int x = 0; x < N; ++x)
                site[x] = sol.vectors.col(idx)[static_cast<Eigen::Index>(x) * N + x];
        }
        // dominant discrete-Fourier component
        int best_k = 0;
        double best_mag = -1.0;
        for (int k = 0; k < N; ++k) {
            Complex acc = 0.0;
            for (int x = 0; x < N; ++x) {
                const double phase = -2.0 * std::numbers::pi * k * x / N;
                acc += site[x] * Complex(std::cos(phase), std::sin(phase));
            }
            if (std::abs(acc) > best_mag) {
                best_mag = std::abs(acc);
                best_k = k;
            }
        }
        const int signed_k = best_k <= N / 2 ? best_k : best_k - N;
        out.push_back({2.0 * std::numbers::pi * signed_k / N, -sol.values[idx]});
    }
    return out;
}

namespace {

const char* branch_name(Branch b) {
    switch (b) {
        case Branch::Relaxation: return "relaxation";
        case Branch::Decoherence: return "decoherence";
        default: return "unresolved";
    }
}

}  // namespace

void write_spectrum_csv(const SpectrumReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open output file " + path);
    out << "re_lambda,im_lambda,Q,IPR,branch,pair_id\n";
    char buf[160];
    for (const auto& m : report.modes) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%s,%d\n", m.lambda.real(),
                      m.lambda.imag(), m.abs_q, m.ipr, branch_name(m.branch), m.pair_id);
        out << buf;
    }
}

}  // namespace sdring::spectral
