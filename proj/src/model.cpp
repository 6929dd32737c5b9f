#include "sdring/model.hpp"

#include <json.hpp>

#include <cmath>

#include "sdring/rng.hpp"

namespace sdring {

namespace {
// Stream tags for the counter RNG; one independent stream per array, so the
// field pattern does not depend on f_bias, sigma_nu or T_bath.
constexpr std::uint64_t kFieldStream = 0x51;
constexpr std::uint64_t kRateStream = 0x52;
constexpr std::uint64_t kPotentialStream = 0x53;
// Offset used when a Gaussian nu_x draw has to be repeated to stay positive.
constexpr std::uint64_t kRetryStride = 1ULL << 32;
}  // namespace

void ModelParams::validate() const {
    if (N < 3) throw ConfigError("N must be >= 3");
    if (!(nu > 0.0)) throw ConfigError("nu must be > 0");
    if (c < 0.0) throw ConfigError("c must be >= 0");
    if (gamma < 0.0) throw ConfigError("gamma must be >= 0");
    if (sigma_f < 0.0) throw ConfigError("sigma_f must be >= 0");
    if (sigma_nu < 0.0) throw ConfigError("sigma_nu must be >= 0");
    if (!(T_bath > 0.0)) throw ConfigError("T_bath must be > 0");
}

std::vector<std::string> ModelParams::hierarchy_warnings() const {
    std::vector<std::string> notes;
    if (c >= nu) notes.push_back("c >= nu: coherent hopping is not a weak perturbation");
    if (T_bath <= nu) notes.push_back("T_bath <= nu: outside the high-temperature regime");
    return notes;
}

DerivedScales derive_scales(const ModelParams& params) {
    params.validate();
    return DerivedScales{
        params.sigma_f * params.T_bath,
        params.nu / (2.0 * params.T_bath),
        params.T_bath * params.f_bias,
    };
}

RegimeLabel classify_regime(const ModelParams& params) {
    const double eta = derive_scales(params).eta;
    return RegimeLabel{params.sigma_f < 1.0, eta < 1.0, eta > params.sigma_f};
}

DisorderRealization sample_realization(const ModelParams& params) {
    params.validate();
    if (params.sigma_nu >= 2.0 * params.nu)
        throw ConfigError("sigma_nu must be < 2 nu, otherwise nu_x <= 0 is possible");

    const int n = params.N;
    const double sigma_E = derive_scales(params).sigma_E;
    DisorderRealization real;
    real.nu_x.resize(n);
    real.f_x.resize(n);
    real.U.resize(n);
    real.E_x.resize(n);

    for (int x = 0; x < n; ++x) {
        const auto i = static_cast<std::uint64_t>(x);
        if (params.dist_shape == DistShape::Box) {
            real.f_x[x] = params.sigma_f * (rng::u01(params.seed, kFieldStream, i) - 0.5);
            real.nu_x[x] =
                params.nu + params.sigma_nu * (rng::u01(params.seed, kRateStream, i) - 0.5);
            real.U[x] = sigma_E * rng::u01(params.seed, kPotentialStream, i);
        } else {
            real.f_x[x] = params.sigma_f * rng::normal(params.seed, kFieldStream, i);
            double v = params.nu + params.sigma_nu * rng::normal(params.seed, kRateStream, i);
            for (std::uint64_t retry = 1; v <= 0.0; ++retry)
                v = params.nu +
                    params.sigma_nu * rng::normal(params.seed, kRateStream, i + retry * kRetryStride);
            real.nu_x[x] = v;
            real.U[x] = sigma_E * rng::normal(params.seed, kPotentialStream, i);
        }
    }

    // Pin sum f_x == N f_bias exactly: subtract the sample mean, add the bias.
    real.f_x.array() += params.f_bias - real.f_x.mean();
    for (int x = 0; x < n; ++x) real.E_x[x] = -(real.U[(x + 1) % n] - real.U[x]);
    return real;
}

DisorderRealization rescale_field(const DisorderRealization& real, double new_f,
                                  double new_scale) {
    DisorderRealization out = real;
    const double old_mean = real.f_x.mean();
    out.f_x = (new_f + new_scale * (real.f_x.array() - old_mean)).matrix();
    return out;
}

std::string to_string(DistShape shape) {
    return shape == DistShape::Box ? "box" : "gaussian";
}

namespace {

DistShape shape_from_string(const std::string& s) {
    if (s == "box" || s == "Box") return DistShape::Box;
    if (s == "gaussian" || s == "Gaussian") return DistShape::Gaussian;
    throw ConfigError("dist_shape must be \"box\" or \"gaussian\", got \"" + s + "\"");
}

}  // namespace

ModelParams params_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("parameter file must hold a JSON object");

    static const char* const keys[] = {"N",       "nu",       "c",      "gamma",
                                       "f_bias",  "sigma_f",  "sigma_nu", "T_bath",
                                       "dist_shape", "seed"};
    for (const char* k : keys)
        if (!j.contains(k)) throw ConfigError(std::string("missing parameter key \"") + k + "\"");
    for (const auto& [k, v] : j.items()) {
        bool known = false;
        for (const char* kk : keys) known = known || (k == kk);
        if (!known) throw ConfigError("unknown parameter key \"" + k + "\"");
    }

    ModelParams p;
    try {
        p.N = j.at("N").get<int>();
        p.nu = j.at("nu").get<double>();
        p.c = j.at("c").get<double>();
        p.gamma = j.at("gamma").get<double>();
        p.f_bias = j.at("f_bias").get<double>();
        p.sigma_f = j.at("sigma_f").get<double>();
        p.sigma_nu = j.at("sigma_nu").get<double>();
        p.T_bath = j.at("T_bath").get<double>();
        p.dist_shape = shape_from_string(j.at("dist_shape").get<std::string>());
        p.seed = j.at("seed").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad parameter value: ") + e.what());
    }
    p.validate();
    return p;
}

std::string params_to_json(const ModelParams& params) {
    nlohmann::json j;
    j["N"] = params.N;
    j["nu"] = params.nu;
    j["c"] = params.c;
    j["gamma"] = params.gamma;
    j["f_bias"] = params.f_bias;
    j["sigma_f"] = params.sigma_f;
    j["sigma_nu"] = params.sigma_nu;
    j["T_bath"] = params.T_bath;
    j["dist_shape"] = to_string(params.dist_shape);
    j["seed"] = params.seed;
    return j.dump(2);
}

}  // namespace sdring
