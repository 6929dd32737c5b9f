#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sdring/ensemble.hpp"
#include "sdring/lindblad.hpp"
#include "sdring/manifest.hpp"
#include "sdring/model.hpp"
#include "sdring/spectral.hpp"
#include "sdring/stochastic.hpp"

namespace {

using namespace sdring;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

ensemble::ModelKind parse_model(const std::string& name) {
    if (name == "stochastic") return ensemble::ModelKind::Stochastic;
    if (name == "lindblad") return ensemble::ModelKind::Lindblad;
    throw ConfigError("model must be \"stochastic\" or \"lindblad\"");
}

std::string output_with_suffix(const std::string& path, const std::string& suffix) {
    const auto dot = path.rfind('.');
    if (dot == std::string::npos || path.find('/', dot) != std::string::npos)
        return path + suffix;
    return path.substr(0, dot) + suffix + path.substr(dot);
}

void check_model_bounds(const ModelParams& params, ensemble::ModelKind model) {
    if (model == ensemble::ModelKind::Lindblad && params.N > lindblad::kMaxDenseSites)
        throw ConfigError("lindblad model is limited to N <= " +
                          std::to_string(lindblad::kMaxDenseSites));
}

spectral::SpectrumReport solve_spectrum(const ModelParams& params,
                                        ensemble::ModelKind model) {
    const DisorderRealization real = sample_realization(params);
    if (model == ensemble::ModelKind::Stochastic) {
        const Eigen::MatrixXcd w =
            stochastic::build_rate_matrix(real).cast<std::complex<double>>();
        return spectral::build_report(spectral::eigendecompose(w),
                                      spectral::MatrixKind::RateMatrix, params.N);
    }
    const Eigen::MatrixXcd sup = lindblad::build_lindbladian(real, params);
    return spectral::build_report(spectral::eigendecompose(sup),
                                  spectral::MatrixKind::Lindbladian, params.N);
}

struct SpectrumArgs {
    std::string config, model = "stochastic", out;
    std::vector<double> c_values;
};

int run_spectrum(const SpectrumArgs& args, const std::string& command) {
    const auto t0 = std::chrono::steady_clock::now();
    ModelParams params = params_from_json(read_file(args.config));
    const auto model = parse_model(args.model);
    check_model_bounds(params, model);
    for (const auto& note : params.hierarchy_warnings()) std::cerr << "note: " << note << "\n";

    RunManifest manifest;
    manifest.command = command;
    manifest.params_json = params_to_json(params);
    manifest.master_seed = params.seed;

    std::vector<std::pair<double, std::string>> jobs;
    if (args.c_values.empty()) {
        jobs.push_back({params.c, args.out});
    } else {
        for (double c : args.c_values)
            jobs.push_back({c, output_with_suffix(args.out, "_c" + fmt_short(c))});
    }
    for (const auto& [c, path] : jobs) {
        ModelParams p = params;
        p.c = c;
        check_model_bounds(p, model);
        spectral::write_spectrum_csv(solve_spectrum(p, model), path);
        manifest.outputs.push_back(path);
    }

    manifest.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(args.out + ".manifest.json", manifest);
    return kExitOk;
}

struct SweepArgs {
    std::string config, model = "stochastic", out, observable = "ncmplx";
    std::string axis1, axis2;
    std::vector<double> grid1, grid2;  // lo,hi,count
    int realizations = 1;
    std::uint64_t master_seed = 0;
};

std::vector<double> linspace(const std::vector<double>& spec_triplet) {
    if (spec_triplet.size() != 3)
        throw ConfigError("grid must be three numbers: lo,hi,count");
    const double lo = spec_triplet[0], hi = spec_triplet[1];
    const int count = static_cast<int>(spec_triplet[2]);
    if (count < 1 || spec_triplet[2] != count) throw ConfigError("grid count must be >= 1");
    std::vector<double> g(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        g[static_cast<std::size_t>(i)] =
            count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
    return g;
}

ensemble::Observable parse_observable(const std::string& name) {
    if (name == "ncmplx") return ensemble::Observable::NcmplxFraction;
    if (name == "fc") return ensemble::Observable::FcThreshold;
    if (name == "sigma_critical") return ensemble::Observable::SigmaCritical;
    throw ConfigError("observable must be ncmplx, fc or sigma_critical");
}

int run_sweep(const SweepArgs& args, const std::string& command) {
    const auto t0 = std::chrono::steady_clock::now();
    ensemble::SweepSpec spec;
    spec.fixed = params_from_json(read_file(args.config));
    spec.model = parse_model(args.model);
    check_model_bounds(spec.fixed, spec.model);
    for (const auto& note : spec.fixed.hierarchy_warnings()) std::cerr << "note: " << note << "\n";
    spec.axis1 = {args.axis1, linspace(args.grid1)};
    spec.axis2 = {args.axis2, linspace(args.grid2)};
    spec.realizations = args.realizations;
    spec.observable = parse_observable(args.observable);
    spec.master_seed = args.master_seed;
    spec.validate();

    const ensemble::SweepResult result = ensemble::run_sweep(spec);

    std::ofstream out(args.out);
    if (!out) throw ConfigError("cannot open output file " + args.out);
    out << "axis1,axis2,realization,observable\n";
    for (const auto& row : result.rows)
        out << fmt(row.a1) << "," << fmt(row.a2) << "," << row.realization << ","
            << fmt(row.value) << "\n";
    for (const auto& row : result.aggregates)
        out << fmt(row.a1) << "," << fmt(row.a2) << "," << row.realization << ","
            << fmt(row.value) << "\n";
    out.close();

    RunManifest manifest;
    manifest.command = command;
    manifest.params_json = params_to_json(spec.fixed);
    manifest.master_seed = args.master_seed;
    manifest.outputs = {args.out};
    manifest.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(args.out + ".manifest.json", manifest);
    return kExitOk;
}

struct ThresholdArgs {
    std::string config, model = "stochastic", out, observable = "fc";
    int realizations = 0;
    std::uint64_t master_seed = 0;
    double f_max = 0.05;
    double sigma_max = 0.3;
    double tol = 1e-5;
};

int run_threshold(const ThresholdArgs& args, const std::string& command) {
    const auto t0 = std::chrono::steady_clock::now();
    const ModelParams params = params_from_json(read_file(args.config));
    const auto model = parse_model(args.model);
    check_model_bounds(params, model);
    for (const auto& note : params.hierarchy_warnings()) std::cerr << "note: " << note << "\n";
    if (args.realizations < 1) throw ConfigError("realizations must be >= 1");
    const bool want_fc = args.observable == "fc";
    if (!want_fc && args.observable != "sigma_critical")
        throw ConfigError("observable must be fc or sigma_critical");

    ensemble::ThresholdOptions opts;
    opts.f_max = args.f_max;
    opts.sigma_max = args.sigma_max;
    opts.tol = args.tol;

    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(args.realizations));
    std::vector<ensemble::ThresholdResult> results(seeds.size());
    for (std::size_t r = 0; r < seeds.size(); ++r)
        seeds[r] = ensemble::realization_seed(args.master_seed, r);

    ensemble::parallel_for(args.realizations, [&](int r) {
        ModelParams p = params;
        p.seed = seeds[static_cast<std::size_t>(r)];
        const DisorderRealization real = sample_realization(p);
        results[static_cast<std::size_t>(r)] =
            want_fc ? ensemble::threshold_fc(real, p, model, opts)
                    : ensemble::sigma_critical(real, p, model, opts);
    });

    std::ofstream out(args.out);
    if (!out) throw ConfigError("cannot open output file " + args.out);
    out << "seed,threshold,sentinel_flag\n";
    for (std::size_t r = 0; r < results.size(); ++r)
        out << seeds[r] << "," << fmt(results[r].value) << ","
            << (results[r].no_transition ? 1 : 0) << "\n";
    out.close();

    const std::string hist_path = output_with_suffix(args.out, "_hist");
    const ensemble::ThresholdStats stats = ensemble::aggregate(results);
    std::ofstream hist(hist_path);
    if (!hist) throw ConfigError("cannot open output file " + hist_path);
    hist << "threshold,cum_fraction\n";
    for (std::size_t i = 0; i < stats.cumulative.size(); ++i)
        hist << fmt(stats.cumulative[i]) << ","
             << fmt(static_cast<double>(i + 1) / static_cast<double>(stats.cumulative.size()))
             << "\n";
    hist.close();

    RunManifest manifest;
    manifest.command = command;
    manifest.params_json = params_to_json(params);
    manifest.master_seed = args.master_seed;
    manifest.outputs = {args.out, hist_path};
    manifest.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(args.out + ".manifest.json", manifest);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    // the ensemble layer parallelizes across realizations; keep BLAS serial
    setenv("OPENBLAS_NUM_THREADS", "1", 0);

    std::string command;
    for (int i = 0; i < argc; ++i) command += std::string(i ? " " : "") + argv[i];

    CLI::App app{"spectra of disordered ring generators and their minimal Lindbladian"};
    app.require_subcommand(1);

    SpectrumArgs spectrum_args;
    auto* spectrum = app.add_subcommand("spectrum", "eigenvalues and mode metrics of one ring");
    spectrum->add_option("--config", spectrum_args.config, "model parameter JSON")->required();
    spectrum->add_option("--model", spectrum_args.model, "stochastic | lindblad");
    spectrum->add_option("--out", spectrum_args.out, "output CSV path")->required();
    spectrum->add_option("--c-values", spectrum_args.c_values,
                         "emit one spectrum file per hopping value")
        ->delimiter(',');

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "observable over a 2D parameter grid");
    sweep->add_option("--config", sweep_args.config)->required();
    sweep->add_option("--model", sweep_args.model);
    sweep->add_option("--axis1", sweep_args.axis1, "f | sigma_f | c | sigma_nu")->required();
    sweep->add_option("--grid1", sweep_args.grid1, "lo,hi,count")->delimiter(',')->required();
    sweep->add_option("--axis2", sweep_args.axis2)->required();
    sweep->add_option("--grid2", sweep_args.grid2, "lo,hi,count")->delimiter(',')->required();
    sweep->add_option("--realizations", sweep_args.realizations);
    sweep->add_option("--observable", sweep_args.observable, "ncmplx | fc | sigma_critical");
    sweep->add_option("--master-seed", sweep_args.master_seed);
    sweep->add_option("--out", sweep_args.out)->required();

    ThresholdArgs threshold_args;
    auto* threshold = app.add_subcommand("threshold", "per-realization delocalization thresholds");
    threshold->add_option("--config", threshold_args.config)->required();
    threshold->add_option("--model", threshold_args.model);
    threshold->add_option("--observable", threshold_args.observable, "fc | sigma_critical");
    threshold->add_option("--realizations", threshold_args.realizations)->required();
    threshold->add_option("--master-seed", threshold_args.master_seed);
    threshold->add_option("--f-max", threshold_args.f_max, "bias bracket upper edge");
    threshold->add_option("--sigma-max", threshold_args.sigma_max, "stretch bracket upper edge");
    threshold->add_option("--tol", threshold_args.tol, "bisection resolution");
    threshold->add_option("--out", threshold_args.out)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (spectrum->parsed()) return run_spectrum(spectrum_args, command);
        if (sweep->parsed()) return run_sweep(sweep_args, command);
        return run_threshold(threshold_args, command);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
}
