#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "lrcs/dataset.hpp"
#include "lrcs/error.hpp"
#include "lrcs/run_config.hpp"

namespace lrcs {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string config_error(const json& j) {
    try {
        RunConfig::from_json(j);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

TEST(RunConfig, DefaultsAreTheReferenceConstants) {
    const RunConfig c = RunConfig::from_json(json::object());
    EXPECT_EQ(c.method, "mri1");
    EXPECT_EQ(c.alpha1, 64);
    EXPECT_EQ(c.alpha, 64);
    EXPECT_EQ(c.t_max_first, 70);
    EXPECT_EQ(c.t_max_next, 5);
    EXPECT_TRUE(c.reproducible);
    const auto& a = c.recon.altgdmin;
    EXPECT_EQ(a.t_max, 70);
    EXPECT_EQ(a.eps_exit, 0.01);
    EXPECT_EQ(a.energy_b, 85.0);
    EXPECT_EQ(a.eta_numerator, 0.14);
    EXPECT_EQ(a.truncation_factor, 36.0);
    EXPECT_EQ(a.eta_mode, StepSizeMode::GradientScaled);
    EXPECT_EQ(c.recon.mean.tol, 1e-3);
    EXPECT_EQ(c.recon.mean.max_iter, 10);
    EXPECT_EQ(c.recon.mec.cgls_iters, 3);
    EXPECT_EQ(c.recon.mec.ista_max, 10);
    EXPECT_EQ(c.recon.mec.ista_relchange, 0.0025);
    EXPECT_EQ(c.recon.mec.ista_omega_factor, 0.001);
}

TEST(RunConfig, UnknownKeysAreAllListed) {
    const std::string top = config_error({{"method", "mri1"}, {"alpah", 3}, {"zeta", 1}});
    EXPECT_NE(top.find("unknown keys: alpah, zeta"), std::string::npos) << top;
    const std::string nested = config_error({{"solver", {{"t_max", 5}, {"step", 0.5}}}});
    EXPECT_NE(nested.find("solver: unknown keys: step"), std::string::npos) << nested;
    const std::string sampling = config_error({{"sampling", {{"scheme", "radial"}, {"line", 3}}}});
    EXPECT_NE(sampling.find("sampling: unknown keys: line"), std::string::npos) << sampling;
}

TEST(RunConfig, TypeAndRangeErrors) {
    EXPECT_NE(config_error({{"alpha", "many"}}).find("'alpha' must be an integer"), std::string::npos);
    EXPECT_NE(config_error({{"alpha", 2.5}}).find("'alpha'"), std::string::npos);
    EXPECT_NE(config_error({{"reproducible", 1}}).find("boolean"), std::string::npos);
    EXPECT_NE(config_error({{"seed", -1}}).find("non-negative"), std::string::npos);
    EXPECT_NE(config_error({{"solver", {{"eta_mode", "fast"}}}}).find("eta_mode"), std::string::npos);
    EXPECT_NE(config_error({{"method", "mri3"}}).find("mri3"), std::string::npos);
    EXPECT_FALSE(config_error({{"solver", {{"t_max", 0}}}}).empty());
    EXPECT_FALSE(config_error({{"method", "online"}, {"alpha1", 0}}).empty());
    EXPECT_FALSE(config_error(json::array()).empty());
}

TEST(RunConfig, JsonRoundTrip) {
    RunConfig c = RunConfig::from_json({{"method", "st2"},
                                        {"alpha1", 30},
                                        {"alpha", 12},
                                        {"seed", 9},
                                        {"reproducible", false},
                                        {"sampling", {{"scheme", "uniform"}, {"m", 40}, {"coils", 2}}},
                                        {"solver",
                                         {{"t_max_next", 3},
                                          {"eta_mode", "conservative"},
                                          {"ista_max", 7},
                                          {"energy_b", 90}}}});
    EXPECT_TRUE(c.is_tracking());
    const TrackerConfig t = c.tracker();
    EXPECT_EQ(t.mode, TrackingMode::MinibatchSt2);
    EXPECT_EQ(t.t_max_next, 3);
    EXPECT_EQ(t.recon.mec.ista_max, 7);
    EXPECT_EQ(t.recon.altgdmin.eta_mode, StepSizeMode::Conservative);
    ASSERT_TRUE(c.sampling.has_value());
    EXPECT_EQ(c.sampling->m, 40);

    const RunConfig back = RunConfig::from_json(c.to_json());
    EXPECT_EQ(back.to_json(), c.to_json());
}

TEST(DatasetSpec, ParsesAndRejects) {
    const DatasetSpec d = DatasetSpec::from_json({{"n1", 8},
                                                  {"n2", 6},
                                                  {"q", 12},
                                                  {"r", 2},
                                                  {"energy_ratios", {1, 2, 0}},
                                                  {"seed", 4},
                                                  {"sampling", {{"scheme", "gaussian"}, {"m", 10}}}});
    EXPECT_EQ(d.synthetic.n1, 8);
    EXPECT_EQ(d.synthetic.lowrank_energy, 2.0);
    EXPECT_EQ(d.sampling_seed(), 4u);
    EXPECT_EQ(DatasetSpec::from_json(d.to_json()).to_json(), d.to_json());

    EXPECT_THROW(DatasetSpec::from_json({{"energy_ratios", {1, 2}}}), ConfigError);
    EXPECT_THROW(DatasetSpec::from_json({{"source", "mri"}}), ConfigError);
    EXPECT_THROW(DatasetSpec::from_json({{"sampling", {{"scheme", "gaussian"}, {"m", 10}, {"coils", 2}}}}),
                 ConfigError);
    EXPECT_THROW(DatasetSpec::from_json({{"phantom", {{"wobble", 1}}}}), ConfigError);
}

TEST(LoadJsonFile, SyntaxErrorsAreConfigErrors) {
    const fs::path p = fs::temp_directory_path() / "lrcs_bad_syntax.json";
    std::ofstream(p) << "{\"method\": ";
    EXPECT_THROW(load_json_file(p.string()), ConfigError);
    fs::remove(p);
    EXPECT_THROW(load_json_file("/nonexistent/config.json"), ConfigError);
}

class DatasetIo : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("lrcs_dataset_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    fs::path dir_;
};

TEST_F(DatasetIo, FourierRoundTrip) {
    DatasetSpec spec;
    spec.synthetic.n1 = 10;
    spec.synthetic.n2 = 8;
    spec.synthetic.q = 6;
    spec.synthetic.r = 2;
    spec.sampling.lines = 3;
    spec.sampling.coils = 2;
    const Dataset d = synthesize(spec);
    save_dataset(dir_, d);
    for (const char* f : {DatasetFiles::truth, DatasetFiles::kspace, DatasetFiles::masks, DatasetFiles::coils,
                          DatasetFiles::manifest})
        EXPECT_TRUE(fs::exists(dir_ / f)) << f;

    const Dataset back = load_dataset(dir_);
    ASSERT_TRUE(back.truth.has_value());
    EXPECT_TRUE(*back.truth == *d.truth);
    ASSERT_EQ(back.ops.size(), d.ops.size());
    for (std::size_t k = 0; k < d.ops.size(); ++k) {
        EXPECT_TRUE(back.y.frames[k] == d.y.frames[k]);
        const ComplexVector x = d.truth->col(static_cast<Index>(k));
        EXPECT_TRUE(back.ops[k].apply(x) == d.ops[k].apply(x));
    }
    EXPECT_EQ(back.scheme, SamplingScheme::PseudoRadial);
    EXPECT_TRUE(back.manifest.contains("incoherence"));
}

TEST_F(DatasetIo, GaussianOperatorsAreRegenerated) {
    DatasetSpec spec;
    spec.synthetic.n1 = 6;
    spec.synthetic.n2 = 5;
    spec.synthetic.q = 4;
    spec.synthetic.r = 2;
    spec.sampling.scheme = SamplingScheme::Gaussian;
    spec.sampling.m = 9;
    spec.sampling.seed = 77;
    const Dataset d = synthesize(spec);
    save_dataset(dir_, d);
    EXPECT_FALSE(fs::exists(dir_ / DatasetFiles::masks));
    const Dataset back = load_dataset(dir_);
    EXPECT_EQ(back.operator_seed, 77u);
    ASSERT_EQ(back.ops.size(), 4u);
    for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(back.ops[k].gaussian()->matrix, d.ops[k].gaussian()->matrix);
}

TEST_F(DatasetIo, InconsistentDirectoriesAreRejected) {
    EXPECT_THROW(load_dataset(dir_), DataError);
    DatasetSpec spec;
    spec.synthetic.n1 = 8;
    spec.synthetic.n2 = 8;
    spec.synthetic.q = 3;
    spec.synthetic.r = 1;
    save_dataset(dir_, synthesize(spec));
    fs::remove(dir_ / DatasetFiles::coils);
    EXPECT_THROW(load_dataset(dir_), DataError);
}

}  // namespace
}  // namespace lrcs
