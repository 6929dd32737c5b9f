#include "sdring/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <thread>

#include "sdring/lindblad.hpp"
#include "sdring/rng.hpp"
#include "sdring/spectral.hpp"
#include "sdring/stochastic.hpp"

namespace sdring::ensemble {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool valid_axis_name(const std::string& name) {
    return name == "f" || name == "sigma_f" || name == "c" || name == "sigma_nu";
}

void apply_axis(ModelParams& p, const std::string& name, double value) {
    if (name == "f") p.f_bias = value;
    else if (name == "sigma_f") p.sigma_f = value;
    else if (name == "c") p.c = value;
    else if (name == "sigma_nu") p.sigma_nu = value;
    else throw ConfigError("unknown sweep axis \"" + name + "\"");
}

bool strictly_monotone(const std::vector<double>& g) {
    for (std::size_t i = 1; i < g.size(); ++i)
        if (!(g[i] > g[i - 1]) && !(g[i] < g[i - 1])) return false;
    for (std::size_t i = 2; i < g.size(); ++i)
        if ((g[i] > g[i - 1]) != (g[1] > g[0])) return false;
    return true;
}

// Decay rates lambda = -eig of the model at the given parameters, without
// eigenvectors. Used by the bisection predicates.
Eigen::VectorXcd decay_rates(const DisorderRealization& real, const ModelParams& params,
                             ModelKind model) {
    if (model == ModelKind::Stochastic) {
        const Eigen::MatrixXcd w =
            stochastic::build_rate_matrix(real).cast<std::complex<double>>();
        return -spectral::eigenvalues_only(w).array();
    }
    return -spectral::eigenvalues_only(lindblad::build_lindbladian(real, params)).array();
}

// Relaxation-branch decay rates: trivial for the rate matrix; for the
// Lindbladian requires eigenvectors and the diagonal-weight ranking.
Eigen::VectorXcd relaxation_rates(const DisorderRealization& real,
                                  const ModelParams& params, ModelKind model) {
    if (model == ModelKind::Stochastic) return decay_rates(real, params, model);
    const auto sol = spectral::eigendecompose(lindblad::build_lindbladian(real, params));
    // rank by diagonal weight; Unresolved labels are irrelevant for counting
    std::vector<std::pair<double, std::complex<double>>> weighted;
    for (Eigen::Index i = 0; i < sol.values.size(); ++i)
        weighted.push_back({spectral::mode_metrics(sol.vectors.col(i), params.N).diag_weight,
                            -sol.values[i]});
    std::sort(weighted.begin(), weighted.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    Eigen::VectorXcd out(params.N);
    for (int i = 0; i < params.N; ++i) out[i] = weighted[static_cast<std::size_t>(i)].second;
    return out;
}

// Drop the eigenvalue of smallest modulus (stationary / zero mode).
Eigen::VectorXcd drop_zero_mode(const Eigen::VectorXcd& lambdas) {
    Eigen::Index zero = 0;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < lambdas.size(); ++i)
        if (std::abs(lambdas[i]) < best) {
            best = std::abs(lambdas[i]);
            zero = i;
        }
    Eigen::VectorXcd out(lambdas.size() - 1);
    Eigen::Index j = 0;
    for (Eigen::Index i = 0; i < lambdas.size(); ++i)
        if (i != zero) out[j++] = lambdas[i];
    return out;
}

double ncmplx_fraction(const DisorderRealization& real, const ModelParams& params,
                       ModelKind model) {
    const Eigen::VectorXcd lam = relaxation_rates(real, params, model);
    return static_cast<double>(spectral::count_complex(lam, spectral::default_tol_im(lam))) /
           params.N;
}

struct Bisection {
    double threshold;
    bool no_transition;
    bool monotone_ok;
};

// Standard bracket bisection of a boolean predicate assumed monotone in
// [0, hi]; the assumption is checked by a 3-point probe above the threshold.
Bisection bisect_predicate(const std::function<bool(double)>& predicate, double hi,
                           double tol) {
    if (!predicate(hi)) return {kNaN, true, true};
    double lo = 0.0, up = hi;
    while (up - lo > tol) {
        const double mid = 0.5 * (lo + up);
        (predicate(mid) ? up : lo) = mid;
    }
    const double threshold = 0.5 * (lo + up);
    bool monotone = true;
    for (int k = 1; k <= 3; ++k) {
        const double probe = threshold + k * (hi - threshold) / 4.0;
        if (probe > up && !predicate(probe)) monotone = false;
    }
    return {threshold, false, monotone};
}

}  // namespace

void SweepSpec::validate() const {
    fixed.validate();
    if (realizations < 1) throw ConfigError("realizations must be >= 1");
    if (!valid_axis_name(axis1.name) || !valid_axis_name(axis2.name))
        throw ConfigError("sweep axes must be one of f, sigma_f, c, sigma_nu");
    if (axis1.name == axis2.name) throw ConfigError("sweep axes must differ");
    if (axis1.grid.empty() || axis2.grid.empty()) throw ConfigError("empty sweep grid");
    if (!strictly_monotone(axis1.grid) || !strictly_monotone(axis2.grid))
        throw ConfigError("sweep grids must be strictly monotone");
    if (model == ModelKind::Lindblad && fixed.N > kMaxLindbladSweepSites)
        throw ConfigError("Lindblad sweeps are bounded to N <= " +
                          std::to_string(kMaxLindbladSweepSites));
    if (observable == Observable::FcThreshold && (axis1.name == "f" || axis2.name == "f"))
        throw ConfigError("the f_c observable sweeps f internally; pick other axes");
    if (observable == Observable::SigmaCritical &&
        (axis1.name == "sigma_f" || axis2.name == "sigma_f"))
        throw ConfigError("sigma_critical sweeps sigma_f internally; pick other axes");
}

std::uint64_t realization_seed(std::uint64_t master, std::uint64_t realization) {
    return rng::counter_hash(master, 0x5eedULL, realization);
}

int worker_count() {
    if (const char* env = std::getenv("SDRING_WORKERS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

void parallel_for(int n_tasks, const std::function<void(int)>& task) {
    const int workers = std::min(worker_count(), n_tasks);
    if (workers <= 1) {
        for (int i = 0; i < n_tasks; ++i) task(i);
        return;
    }
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            int i;
            while (!failed.load(std::memory_order_relaxed) &&
                   (i = next.fetch_add(1)) < n_tasks) {
                try {
                    task(i);
                } catch (...) {
                    std::scoped_lock lock(error_mutex);
                    if (!error) error = std::current_exception();
                    failed.store(true);
                }
            }
        });
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

SweepResult run_sweep(const SweepSpec& spec) {
    spec.validate();
    const int n1 = static_cast<int>(spec.axis1.grid.size());
    const int n2 = static_cast<int>(spec.axis2.grid.size());
    const int reals = spec.realizations;
    const int n_tasks = n1 * n2 * reals;

    SweepResult result;
    result.rows.resize(static_cast<std::size_t>(n_tasks));

    parallel_for(n_tasks, [&](int t) {
        const int i1 = t / (n2 * reals);
        const int i2 = (t / reals) % n2;
        const int r = t % reals;
        const double a1 = spec.axis1.grid[static_cast<std::size_t>(i1)];
        const double a2 = spec.axis2.grid[static_cast<std::size_t>(i2)];
        ModelParams cell = spec.fixed;
        apply_axis(cell, spec.axis1.name, a1);
        apply_axis(cell, spec.axis2.name, a2);
        cell.seed = realization_seed(spec.master_seed, static_cast<std::uint64_t>(r));
        try {
            const DisorderRealization real = sample_realization(cell);
            double value = kNaN;
            switch (spec.observable) {
                case Observable::NcmplxFraction:
                    value = ncmplx_fraction(real, cell, spec.model);
                    break;
                case Observable::FcThreshold: {
                    const ThresholdResult thr = threshold_fc(real, cell, spec.model);
                    value = thr.no_transition ? kNaN : thr.value;
                    break;
                }
                case Observable::SigmaCritical: {
                    const ThresholdResult thr = sigma_critical(real, cell, spec.model);
                    value = thr.no_transition ? kNaN : thr.value;
                    break;
                }
            }
            result.rows[static_cast<std::size_t>(t)] = SweepCell{a1, a2, r, value};
        } catch (const std::exception& e) {
            const std::string where = "sweep cell (" + spec.axis1.name + "=" +
                                      std::to_string(a1) + ", " + spec.axis2.name + "=" +
                                      std::to_string(a2) + ", realization " +
                                      std::to_string(r) + "): " + e.what();
            if (dynamic_cast<const ConfigError*>(&e)) throw ConfigError(where);
            throw SolverError(where);
        }
    });

    result.aggregates.reserve(static_cast<std::size_t>(n1) * n2);
    for (int i1 = 0; i1 < n1; ++i1)
        for (int i2 = 0; i2 < n2; ++i2) {
            double sum = 0.0;
            int count = 0;
            for (int r = 0; r < reals; ++r) {
                const double v =
                    result.rows[static_cast<std::size_t>((i1 * n2 + i2) * reals + r)].value;
                if (std::isfinite(v)) {
                    sum += v;
                    ++count;
                }
            }
            result.aggregates.push_back(SweepCell{spec.axis1.grid[static_cast<std::size_t>(i1)],
                                                  spec.axis2.grid[static_cast<std::size_t>(i2)],
                                                  -1, count > 0 ? sum / count : kNaN});
        }
    return result;
}

ThresholdResult threshold_fc(const DisorderRealization& real, const ModelParams& params,
                             ModelKind model, const ThresholdOptions& opts) {
    const auto predicate = [&](double f) {
        const DisorderRealization probe = rescale_field(real, f, 1.0);
        ModelParams p = params;
        p.f_bias = f;  // keeps E_bias = T_bath * f in step with the swept bias
        Eigen::VectorXcd lam = drop_zero_mode(decay_rates(probe, p, model));
        const double tol_im = opts.tol_im_scale * lam.cwiseAbs().maxCoeff();
        std::sort(lam.begin(), lam.end(), [](auto a, auto b) { return a.real() < b.real(); });
        int complex_low = 0;
        for (int i = 0; i < std::min<int>(opts.k_lowest, static_cast<int>(lam.size())); ++i)
            if (std::abs(lam[i].imag()) > tol_im) ++complex_low;
        return complex_low >= 2;
    };
    const Bisection b = bisect_predicate(predicate, opts.f_max, opts.tol);
    return ThresholdResult{b.threshold, b.no_transition, b.monotone_ok};
}

ThresholdResult sigma_critical(const DisorderRealization& real, const ModelParams& params,
                               ModelKind model, const ThresholdOptions& opts) {
    const double base_sigma = params.sigma_f;
    if (!(base_sigma > 0.0))
        throw ConfigError("sigma_critical needs a realization with sigma_f > 0");

    const auto complex_count = [&](double stretch) {
        const DisorderRealization probe = rescale_field(real, params.f_bias, stretch);
        Eigen::VectorXcd lam = drop_zero_mode(relaxation_rates(probe, params, model));
        return spectral::count_complex(lam, opts.tol_im_scale * lam.cwiseAbs().maxCoeff());
    };

    const int count0 = complex_count(0.0);
    if (count0 == 0) return ThresholdResult{0.0, false, true};  // nothing left to localize

    const double s_max = opts.sigma_max / base_sigma;
    const auto predicate = [&](double s) { return complex_count(s) < count0; };
    const Bisection b = bisect_predicate(predicate, s_max, opts.tol / base_sigma);
    if (b.no_transition) return ThresholdResult{kNaN, true, true};
    return ThresholdResult{b.threshold * base_sigma, false, b.monotone_ok};
}

ThresholdStats aggregate(const std::vector<ThresholdResult>& values) {
    ThresholdStats stats;
    for (const auto& v : values) {
        if (v.no_transition || !std::isfinite(v.value)) ++stats.sentinel_count;
        else stats.cumulative.push_back(v.value);
    }
    if (stats.cumulative.empty())
        throw EmptyAfterFilter("all " + std::to_string(values.size()) +
                               " thresholds are sentinels");
    std::sort(stats.cumulative.begin(), stats.cumulative.end());
    const std::size_t n = stats.cumulative.size();
    stats.mean = 0.0;
    for (double v : stats.cumulative) stats.mean += v;
    stats.mean /= static_cast<double>(n);
    stats.median = n % 2 == 1 ? stats.cumulative[n / 2]
                              : 0.5 * (stats.cumulative[n / 2 - 1] + stats.cumulative[n / 2]);
    return stats;
}

}  // namespace sdring::ensemble
