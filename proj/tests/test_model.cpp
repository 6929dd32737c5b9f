#include <doctest.h>

#include <cmath>

#include "sdring/model.hpp"

using namespace sdring;

namespace {

ModelParams base_params() {
    ModelParams p;
    p.N = 32;
    p.T_bath = 200.0;
    return p;
}

}  // namespace

TEST_CASE("derived scales") {
    ModelParams p = base_params();
    p.sigma_f = 0.01;
    p.f_bias = 0.003;
    DerivedScales d = derive_scales(p);
    CHECK(d.sigma_E == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(d.eta == doctest::Approx(0.0025).epsilon(1e-14));
    CHECK(d.E_bias == doctest::Approx(0.6).epsilon(1e-14));

    p.sigma_f = 0.0;
    p.f_bias = 0.0;
    d = derive_scales(p);
    CHECK(d.sigma_E == 0.0);
    CHECK(d.eta == doctest::Approx(0.0025).epsilon(1e-14));
    CHECK(d.E_bias == 0.0);

    p.sigma_f = 0.01;
    p.T_bath = 800.0;
    d = derive_scales(p);
    CHECK(d.sigma_E == doctest::Approx(8.0).epsilon(1e-14));
    CHECK(d.eta == doctest::Approx(0.000625).epsilon(1e-14));
    CHECK(d.E_bias == 0.0);
}

TEST_CASE("parameter validation") {
    ModelParams p = base_params();
    p.N = 2;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = base_params();
    p.nu = 0.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = base_params();
    p.T_bath = 0.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = base_params();
    p.sigma_f = -1e-3;
    CHECK_THROWS_AS(p.validate(), ConfigError);

    p = base_params();
    CHECK(p.hierarchy_warnings().empty());
    p.c = 1.5;
    p.T_bath = 0.5;
    CHECK(p.hierarchy_warnings().size() == 2);
}

TEST_CASE("zero-width realization is uniform") {
    ModelParams p = base_params();
    p.f_bias = 0.002;
    p.seed = 9;
    const DisorderRealization r = sample_realization(p);
    CHECK((r.f_x.array() == p.f_bias).all());
    CHECK((r.nu_x.array() == p.nu).all());
    CHECK((r.U.array() == 0.0).all());
    CHECK((r.E_x.array() == 0.0).all());
}

TEST_CASE("field samples stay inside the box and hit the mean exactly") {
    ModelParams p = base_params();
    p.sigma_f = 0.02;
    p.f_bias = 0.001;
    p.seed = 12345;
    const DisorderRealization r = sample_realization(p);
    CHECK((r.f_x.array() - p.f_bias).abs().maxCoeff() <= 0.01);
    CHECK(std::abs(r.f_x.mean() - p.f_bias) < 1e-15);
}

TEST_CASE("box potential bounds and closed energy drops") {
    ModelParams p = base_params();
    p.N = 4;
    p.sigma_f = 0.01;  // sigma_E = 2
    p.seed = 5;
    const DisorderRealization r = sample_realization(p);
    CHECK(r.U.minCoeff() >= 0.0);
    CHECK(r.U.maxCoeff() <= 2.0);
    CHECK(std::abs(r.E_x.sum()) < 1e-15);
    for (int x = 0; x < 4; ++x) CHECK(r.E_x[x] == -(r.U[(x + 1) % 4] - r.U[x]));
}

TEST_CASE("sampling rejects sigma_nu >= 2 nu") {
    ModelParams p = base_params();
    p.sigma_nu = 2.0;
    CHECK_THROWS_AS(sample_realization(p), ConfigError);
}

TEST_CASE("gaussian shape keeps rates positive") {
    ModelParams p = base_params();
    p.dist_shape = DistShape::Gaussian;
    p.sigma_nu = 0.9;
    p.sigma_f = 0.01;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        p.seed = seed;
        CHECK(sample_realization(p).nu_x.minCoeff() > 0.0);
    }
}

TEST_CASE("rescale_field") {
    ModelParams p = base_params();
    p.sigma_f = 0.01;
    p.f_bias = 0.004;
    p.seed = 77;
    const DisorderRealization r = sample_realization(p);

    SUBCASE("identity") {
        const DisorderRealization same = rescale_field(r, p.f_bias, 1.0);
        CHECK((same.f_x - r.f_x).cwiseAbs().maxCoeff() < 1e-16);
    }
    SUBCASE("zero scale removes the disorder") {
        const DisorderRealization flat = rescale_field(r, 0.01, 0.0);
        CHECK((flat.f_x.array() == 0.01).all());
        CHECK((flat.nu_x - r.nu_x).cwiseAbs().maxCoeff() == 0.0);
        CHECK((flat.U - r.U).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("scale doubles the sample width") {
        const DisorderRealization wide = rescale_field(r, p.f_bias, 2.0);
        const auto dev = [](const Eigen::VectorXd& v) {
            return std::sqrt((v.array() - v.mean()).square().mean());
        };
        CHECK(dev(wide.f_x) == doctest::Approx(2.0 * dev(r.f_x)).epsilon(1e-12));
        CHECK(wide.f_x.mean() == doctest::Approx(p.f_bias).epsilon(1e-13));
    }
    SUBCASE("composition: scale by a then b equals ab") {
        const DisorderRealization ab = rescale_field(rescale_field(r, 0.002, 1.5), 0.002, 2.0);
        const DisorderRealization direct = rescale_field(r, 0.002, 3.0);
        CHECK((ab.f_x - direct.f_x).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("classify_regime") {
    ModelParams p = base_params();
    p.sigma_f = 0.01;  // eta = 0.0025 at T = 200
    RegimeLabel lbl = classify_regime(p);
    CHECK(lbl.classical_high_T);
    CHECK(lbl.quantum_high_T);
    CHECK_FALSE(lbl.sinai_regime);

    p.sigma_f = 0.5;
    p.T_bath = 0.25;  // eta = 2
    lbl = classify_regime(p);
    CHECK_FALSE(lbl.quantum_high_T);

    p.sigma_f = 1e-3;
    p.T_bath = 50.0;  // eta = 1e-2 > sigma_f
    lbl = classify_regime(p);
    CHECK(lbl.sinai_regime);
}

TEST_CASE("determinism: identical (params, seed) give bit-identical realizations") {
    ModelParams p = base_params();
    p.sigma_f = 0.02;
    p.sigma_nu = 0.05;
    p.f_bias = 0.003;
    p.seed = 4242;
    const DisorderRealization a = sample_realization(p);
    const DisorderRealization b = sample_realization(p);
    CHECK((a.f_x.array() == b.f_x.array()).all());
    CHECK((a.nu_x.array() == b.nu_x.array()).all());
    CHECK((a.U.array() == b.U.array()).all());
}

TEST_CASE("fluctuation pattern is independent of the bias") {
    // shifting a realization onto a new mean equals sampling at that mean
    ModelParams p = base_params();
    p.sigma_f = 0.02;
    p.f_bias = 0.001;
    p.seed = 31;
    const DisorderRealization a = sample_realization(p);
    p.f_bias = 0.004;
    const DisorderRealization b = sample_realization(p);
    const DisorderRealization shifted = rescale_field(a, 0.004, 1.0);
    CHECK((shifted.f_x - b.f_x).cwiseAbs().maxCoeff() < 1e-16);
}

TEST_CASE("constraint closure over many realizations") {
    ModelParams p = base_params();
    p.N = 16;
    p.sigma_f = 0.02;
    p.f_bias = 0.003;
    const double sigma_E = derive_scales(p).sigma_E;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        p.seed = seed;
        const DisorderRealization r = sample_realization(p);
        REQUIRE(std::abs(r.f_x.mean() - p.f_bias) < 1e-14);
        REQUIRE(std::abs(r.E_x.sum()) < 1e-12 * sigma_E * p.N);
    }
}

TEST_CASE("json parameter schema") {
    const std::string text = R"({
        "N": 32, "nu": 1.0, "c": 0.5, "gamma": 5.0, "f_bias": 0.003,
        "sigma_f": 0.01, "sigma_nu": 0.05, "T_bath": 200.0,
        "dist_shape": "box", "seed": 7
    })";
    const ModelParams p = params_from_json(text);
    CHECK(p.N == 32);
    CHECK(p.c == 0.5);
    CHECK(p.gamma == 5.0);
    CHECK(p.dist_shape == DistShape::Box);
    CHECK(p.seed == 7);

    const ModelParams round = params_from_json(params_to_json(p));
    CHECK(round.N == p.N);
    CHECK(round.f_bias == p.f_bias);
    CHECK(round.T_bath == p.T_bath);

    CHECK_THROWS_AS(params_from_json("{\"N\": 8}"), ConfigError);
    CHECK_THROWS_AS(params_from_json("not json"), ConfigError);
    std::string with_unknown = text;
    with_unknown.insert(1, "\"extra\": 1,");
    CHECK_THROWS_AS(params_from_json(with_unknown), ConfigError);
    std::string bad_shape = text;
    bad_shape.replace(bad_shape.find("\"box\""), 5, "\"triangle\"");
    CHECK_THROWS_AS(params_from_json(bad_shape), ConfigError);
}
