#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sdring/model.hpp"

namespace sdring::ensemble {

enum class ModelKind { Stochastic, Lindblad };
enum class Observable { NcmplxFraction, FcThreshold, SigmaCritical };

inline constexpr int kMaxLindbladSweepSites = 64;

struct AxisSpec {
    std::string name;          // one of: f, sigma_f, c, sigma_nu
    std::vector<double> grid;  // strictly monotone
};

struct SweepSpec {
    ModelKind model = ModelKind::Stochastic;
    AxisSpec axis1;
    AxisSpec axis2;
    ModelParams fixed;
    int realizations = 1;
    Observable observable = Observable::NcmplxFraction;
    std::uint64_t master_seed = 0;

    void validate() const;
};

struct SweepCell {
    double a1, a2;
    int realization;  // -1 for the per-cell aggregate row
    double value;     // NaN for sentinel thresholds
};

struct SweepResult {
    std::vector<SweepCell> rows;        // one per (cell, realization), fixed order
    std::vector<SweepCell> aggregates;  // one per cell, mean over realizations
};

// Deterministic in (spec, master_seed). The realization seed depends only on
// the realization index, so a frozen disorder pattern is swept across the
// grid (axis values enter through the sampling widths, which scale the same
// underlying draws). Solver failures are rethrown with cell coordinates.
SweepResult run_sweep(const SweepSpec& spec);

struct ThresholdOptions {
    double f_max = 0.05;         // bias bracket for the f_c search
    double sigma_max = 0.3;      // largest effective sigma_f for the stretch search
    double tol = 1e-5;           // bisection resolution (delta f, or delta s * sigma_f)
    int k_lowest = 4;            // "vicinity of lambda ~ 0" mode count
    double tol_im_scale = 1e-8;  // tol_im = scale * max|lambda|
};

struct ThresholdResult {
    double value = 0.0;
    bool no_transition = false;  // predicate never fired inside the bracket
    bool monotone_ok = true;     // 3-point probe above the threshold
};

// Bias threshold: bisection on f with frozen fluctuations. Predicate: among
// the k_lowest nonzero decay rates of smallest Re, a conjugate pair has
// |Im| > tol_im.
ThresholdResult threshold_fc(const DisorderRealization& real, const ModelParams& params,
                             ModelKind model, const ThresholdOptions& opts = {});

// Critical field width: bisection on the stretch factor of the frozen field
// pattern at fixed bias. Predicate: an eigenvalue that is complex at zero
// stretch has become real (complex count drops below the unstretched count,
// stationary mode excluded). Returns the effective sigma_f at the transition.
ThresholdResult sigma_critical(const DisorderRealization& real, const ModelParams& params,
                               ModelKind model, const ThresholdOptions& opts = {});

struct ThresholdStats {
    double mean = 0.0;
    double median = 0.0;
    std::vector<double> cumulative;  // sorted non-sentinel values
    int sentinel_count = 0;
};

// Throws EmptyAfterFilter when every entry is a sentinel.
ThresholdStats aggregate(const std::vector<ThresholdResult>& values);

// Worker count: SDRING_WORKERS when set, hardware concurrency otherwise.
int worker_count();
// Static task queue; exceptions from workers are rethrown on the caller.
void parallel_for(int n_tasks, const std::function<void(int)>& task);

std::uint64_t realization_seed(std::uint64_t master, std::uint64_t realization);

}  // namespace sdring::ensemble
