#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "sdring/errors.hpp"

namespace sdring {

enum class DistShape { Box, Gaussian };

// All scalar controls of the ring model. sigma_f / sigma_nu are the FULL
// WIDTH of the Box distribution; the Gaussian shape interprets them as a
// standard deviation. nu = 1 fixes the unit of time.
struct ModelParams {
    int N = 8;                  // ring size (sites)
    double nu = 1.0;            // mean stochastic rate
    double c = 0.0;             // coherent hopping frequency
    double gamma = 0.0;         // on-site dephasing rate
    double f_bias = 0.0;        // mean stochastic field
    double sigma_f = 0.0;       // width of the f_x distribution
    double sigma_nu = 0.0;      // width of the nu_x distribution
    double T_bath = 100.0;      // bath temperature, units of nu
    DistShape dist_shape = DistShape::Box;
    std::uint64_t seed = 0;

    void validate() const;  // throws ConfigError
    // Non-fatal notes when c >= nu or T_bath <= nu (assumed scale hierarchy).
    std::vector<std::string> hierarchy_warnings() const;
};

struct DerivedScales {
    double sigma_E;  // potential dispersion, sigma_f * T_bath
    double eta;      // dimensionless friction, nu / (2 T_bath)
    double E_bias;   // coherent bias energy, T_bath * f_bias
};

struct RegimeLabel {
    bool classical_high_T;  // sigma_f < 1
    bool quantum_high_T;    // eta < 1
    bool sinai_regime;      // eta > sigma_f
};

// Per-bond / per-site disorder arrays. Bond x couples sites x and x+1 (mod N).
// The stochastic field is drawn independently of the potential; when mapping
// to a microscopic friction model, the widths are related through
// Var(f_x) = (C / nu^2) sigma_eta^2 Var(E_x) with C = 8 for Gaussian
// disorder, which is what motivates T_bath = sigma_E / sigma_f.
struct DisorderRealization {
    Eigen::VectorXd nu_x;  // bond rates, all > 0
    Eigen::VectorXd f_x;   // bond stochastic field, sum == N * f_bias exactly
    Eigen::VectorXd U;     // site potential
    Eigen::VectorXd E_x;   // bond energy drop, -(U(x+1) - U(x)); sums to 0

    int size() const { return static_cast<int>(nu_x.size()); }
    double field_mean() const { return f_x.mean(); }
};

DerivedScales derive_scales(const ModelParams& params);
RegimeLabel classify_regime(const ModelParams& params);

// Deterministic in (params, seed). Rejects sigma_nu >= 2 nu.
DisorderRealization sample_realization(const ModelParams& params);

// f_x' = new_f + new_scale * (f_x - mean(f_x)); nu_x and U are untouched.
// Threshold bisection uses this to sweep one frozen realization in f or sigma_f.
DisorderRealization rescale_field(const DisorderRealization& real, double new_f,
                                  double new_scale);

// JSON parameter schema, keys exactly:
// N, nu, c, gamma, f_bias, sigma_f, sigma_nu, T_bath, dist_shape, seed
ModelParams params_from_json(const std::string& text);
std::string params_to_json(const ModelParams& params);

std::string to_string(DistShape shape);

}  // namespace sdring
