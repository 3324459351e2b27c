#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include <unistd.h>

#include "rtfm/config.hpp"
#include "rtfm/error.hpp"

using rtfm::ErrorCode;
using rtfm::RunConfig;

namespace {

ErrorCode parse_error(const std::string& ini)
{
    try {
        rtfm::parse_run_config(ini);
    } catch (const rtfm::Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "accepted: " << ini;
    return ErrorCode::io;
}

}  // namespace

TEST(Config, Defaults)
{
    const RunConfig c;
    EXPECT_EQ(c.get("profile.shopped_weight"), "5");
    EXPECT_EQ(c.get("profile.reviewed_weight"), "10");
    EXPECT_EQ(c.get("profile.k"), "300");
    EXPECT_EQ(c.get("ranker.k1"), "1.2");
    EXPECT_EQ(c.get("ranker.b"), "0.75");
    EXPECT_EQ(c.get("ranker.idf"), "smoothed");
    EXPECT_EQ(c.get("ranker.idf_scope"), "product");
    EXPECT_EQ(c.get("profile.dwell_schedule"), "two_segment");
    EXPECT_EQ(c.get("simulation.seed"), "42");
    EXPECT_EQ(c.get("text.include_summary"), "false");
    EXPECT_NO_THROW(c.validate());
}

TEST(Config, ParseOverridesAndKeepsDefaults)
{
    const auto c = rtfm::parse_run_config(
        "; comment\n[ranker]\nk1 = 2.0\nidf_scope = corpus\n\n[profile]\nk = 50\ndwell_schedule = single_line\n"
        "[text]\nstemming = off\n");
    EXPECT_EQ(c.ranker.k1, 2.0);
    EXPECT_EQ(c.ranker.b, 0.75);
    EXPECT_EQ(c.ranker.idf_scope, rtfm::IdfScope::corpus);
    EXPECT_EQ(c.profile.k, 50u);
    EXPECT_EQ(c.profile.dwell_schedule, rtfm::DwellSchedule::single_line);
    EXPECT_FALSE(c.stemming);
    EXPECT_FALSE(c.text_pipeline().stemming);
}

TEST(Config, IniRoundTrip)
{
    RunConfig c;
    c.set("ranker.b", "0.5");
    c.set("simulation.seed", "18446744073709551615");
    c.set("profile.dwell_low_weight", "-2.125");
    c.set("dataset.path", "/data/reviews.json");
    const auto back = rtfm::parse_run_config(c.to_ini());
    for (const auto& key : RunConfig::keys())
        EXPECT_EQ(back.get(key), c.get(key)) << key;
    EXPECT_EQ(back.hash(), c.hash());
}

TEST(Config, Errors)
{
    EXPECT_EQ(parse_error("[ranker]\nk1 = fast\n"), ErrorCode::invalid_argument);
    EXPECT_EQ(parse_error("[ranker]\nbogus = 1\n"), ErrorCode::invalid_argument);
    EXPECT_EQ(parse_error("[ranker]\nb = 1.5\n"), ErrorCode::invalid_argument);
    EXPECT_EQ(parse_error("[ranker]\nidf = fancy\n"), ErrorCode::invalid_argument);
    EXPECT_EQ(parse_error("[profile]\nk = 0\n"), ErrorCode::invalid_argument);
    EXPECT_EQ(parse_error("[profile]\nk = -3\n"), ErrorCode::invalid_argument);
    EXPECT_EQ(parse_error("[simulation]\nbrowse_min = 900\n"), ErrorCode::invalid_argument);
    EXPECT_EQ(parse_error("seed = 3\n"), ErrorCode::invalid_argument);
    EXPECT_EQ(parse_error("[ranker\nk1 = 1\n"), ErrorCode::parse);

    RunConfig c;
    EXPECT_THROW(c.set("nope.key", "1"), rtfm::Error);
    EXPECT_THROW(c.get("nope.key"), rtfm::Error);
    EXPECT_THROW(c.set("dataset.strict", "maybe"), rtfm::Error);
}

TEST(Config, MissingFile)
{
    try {
        rtfm::load_run_config("/nonexistent/rtfm.ini");
        FAIL();
    } catch (const rtfm::Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::io);
    }
}

TEST(Config, HashCoversResultAffectingKeysOnly)
{
    const RunConfig base;
    const auto h = base.hash();
    EXPECT_EQ(h.size(), 16u);

    for (const auto& [key, value] : std::vector<std::pair<std::string, std::string>>{
             {"dataset.path", "/elsewhere.json"}, {"output.dir", "elsewhere"}, {"output.threads", "7"}}) {
        RunConfig c;
        c.set(key, value);
        EXPECT_EQ(c.hash(), h) << key;
    }
    for (const auto& [key, value] : std::vector<std::pair<std::string, std::string>>{
             {"ranker.k1", "1.3"}, {"profile.k", "10"}, {"simulation.seed", "7"}, {"text.stemming", "false"},
             {"dataset.strict", "false"}, {"ranker.idf", "classic"}}) {
        RunConfig c;
        c.set(key, value);
        EXPECT_NE(c.hash(), h) << key;
    }
}

TEST(Config, StopwordFileContentsEnterHash)
{
    const auto path = std::filesystem::temp_directory_path() / ("rtfm_stop_" + std::to_string(::getpid()) + ".txt");
    {
        std::ofstream(path) << "alpha\nbeta\n";
    }
    RunConfig c;
    c.set("text.stopwords", path.string());
    const auto h1 = c.hash();
    const auto pipeline = c.text_pipeline();
    EXPECT_TRUE(pipeline.stopwords->count("alpha"));
    EXPECT_FALSE(pipeline.stopwords->count("the"));
    {
        std::ofstream(path) << "alpha\ngamma\n";
    }
    EXPECT_NE(c.hash(), h1);
    std::filesystem::remove(path);
}
