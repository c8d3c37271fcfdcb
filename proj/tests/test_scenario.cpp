#include <gtest/gtest.h>

#include <fstream>
#include <string>

#include "monospde/errors.hpp"
#include "monospde/scenario.hpp"

using namespace monospde;
using nlohmann::json;

#ifndef MONOSPDE_SCENARIO_DIR
#define MONOSPDE_SCENARIO_DIR ""
#endif

namespace {

std::string config_error(const json& doc) {
    try {
        parse_scenario(doc);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST(Scenario, EmptyConfigTakesDefaults) {
    const Scenario s = parse_scenario(json::object());
    EXPECT_EQ(s.domain.points, std::vector<int>{64});
    EXPECT_EQ(s.semilinear.preset, "ginzburg_landau");
    ASSERT_TRUE(s.solver.truncation);
    EXPECT_EQ(*s.solver.truncation, 1e4);
    EXPECT_EQ(s.estimator.lags, (std::vector<int>{2, 4, 8, 16, 32}));
    EXPECT_EQ(s.estimator.pairs, 64);
}

TEST(Scenario, UnknownKeysAreListed) {
    const json doc = {{"domian", {{"points", {8}}}}, {"solver", {{"dt", 0.01}, {"dtt", 1}}}};
    const std::string msg = config_error(doc);
    EXPECT_NE(msg.find("domian"), std::string::npos) << msg;
    EXPECT_NE(msg.find("solver.dtt"), std::string::npos) << msg;
}

TEST(Scenario, WrongTypeAndBadValuesAreConfigErrors) {
    EXPECT_NE(config_error({{"solver", {{"dt", "fast"}}}}), "");
    EXPECT_NE(config_error({{"solver", {{"T", 0.1}, {"dt", 0.2}}}}), "");
    EXPECT_NE(config_error({{"semilinear", {{"preset", "quintic"}}}}), "");
    EXPECT_NE(config_error({{"domain", {{"extents", {1.0}}, {"points", {3}}}}}), "");
    EXPECT_NE(config_error({{"domain", {{"extents", {0.0, -1.0}}, {"points", {5, 5}}}}}), "");
    EXPECT_NE(config_error({{"solver", {{"refine", 3}}}}), "");
    EXPECT_NE(config_error({{"estimator", {{"margin", 0.6}}}}), "");
    EXPECT_NE(config_error(json::array()), "");
}

TEST(Scenario, RoundTripIsIdempotent) {
    const json doc = {{"domain", {{"extents", {1.0, 2.0}}, {"points", {9, 17}}}},
                      {"semilinear", {{"preset", "lipschitz_tanh"}, {"scale", 2.0}, {"K", 3.0}}},
                      {"solver", {{"truncation", nullptr}, {"refine", 2}}},
                      {"estimator", {{"theta", 8.5}}},
                      {"modes", 3}};
    const json once = to_json(parse_scenario(doc));
    const json twice = to_json(parse_scenario(once));
    EXPECT_EQ(once.dump(), twice.dump());
    EXPECT_TRUE(once["solver"]["truncation"].is_null());
}

TEST(Scenario, FingerprintIsStableAndSensitive) {
    const Scenario a = parse_scenario(json::object());
    const Scenario b = parse_scenario(to_json(a));
    EXPECT_EQ(config_fingerprint(a), config_fingerprint(b));
    EXPECT_EQ(config_fingerprint(a).size(), 16u);
    Scenario c = a;
    c.seed = 2;
    EXPECT_NE(config_fingerprint(a), config_fingerprint(c));
}

TEST(Scenario, OverridesSetNestedKeys) {
    json doc = json::object();
    apply_override(doc, "solver.dt", "0.005");
    apply_override(doc, "estimator.m_list", "[1, 2]");
    apply_override(doc, "semilinear.preset", "zero");
    EXPECT_EQ(doc["solver"]["dt"].get<double>(), 0.005);
    EXPECT_EQ(doc["estimator"]["m_list"].size(), 2u);
    EXPECT_EQ(doc["semilinear"]["preset"], "zero");
    json leaf = {{"seed", 1}};
    EXPECT_THROW(apply_override(leaf, "seed.x", "1"), ConfigError);
    EXPECT_THROW(apply_override(leaf, "a..b", "1"), ConfigError);
}

TEST(Scenario, BuildProblemFromPresets) {
    const json doc = {{"domain", {{"extents", {2.0}}, {"points", {33}}}},
                      {"initial", {{"preset", "sine"}, {"amplitude", 3.0}}},
                      {"forcing", {{"g", {{"preset", "sine_modes"}, {"amplitude", 1.0}}}}},
                      {"modes", 2}};
    const Scenario s = parse_scenario(doc);
    const Problem p = build_problem(s);
    EXPECT_EQ(p.grid.node_count(), 33u);
    EXPECT_NEAR(p.initial[16], 3.0, 1e-12);  // x = 1 is the middle of (0, 2)
    EXPECT_EQ(p.initial[0], 0.0);
    EXPECT_NEAR(p.forcing.g(0.0, {0.5, 0.0}, 1), std::sin(3.14159265358979323846 * 2 * 0.25) / 2, 1e-12);
    EXPECT_EQ(p.coeffs.modes, 2);
}

TEST(Scenario, RefinementHelpers) {
    const Scenario s = parse_scenario({{"domain", {{"extents", {1.0}}, {"points", {64}}}}, {"modes", 2}});
    EXPECT_EQ(refined_in_space(s).domain.points[0], 127);
    const Scenario t = refined_in_time(s);
    EXPECT_EQ(t.solver.refine, 2);
    EXPECT_DOUBLE_EQ(build_solver_config(t).dt, s.solver.dt / 2);
    EXPECT_EQ(t.estimator.lags[0], 2 * s.estimator.lags[0]);
    // The refined noise sums back to the coarse noise.
    const auto coarse = build_noise(s, 3);
    const auto fine = build_noise(t, 3);
    const double dw = coarse->increment(0, 1);
    EXPECT_NEAR(fine->increment(0, 1) + fine->increment(1, 1), dw, 4e-16 * (1.0 + std::abs(dw)));
}

TEST(Scenario, ShippedScenariosParse) {
    const std::string dir = MONOSPDE_SCENARIO_DIR;
    if (dir.empty()) GTEST_SKIP() << "scenario directory not configured";
    for (const char* name : {"gl_moment.json", "truncation.json", "interior_additive.json", "weighted_additive.json",
                             "holder_additive.json", "holder_gl.json", "zero_data.json", "heat.json"}) {
        EXPECT_NO_THROW(load_scenario(dir + "/" + name)) << name;
    }
}

TEST(Scenario, ReferenceFileListsEveryDefault) {
    const std::string dir = MONOSPDE_SCENARIO_DIR;
    if (dir.empty()) GTEST_SKIP() << "scenario directory not configured";
    std::ifstream in(dir + "/../config_reference.json");
    ASSERT_TRUE(in);
    json ref;
    in >> ref;
    EXPECT_EQ(ref, to_json(Scenario{}));
}
