#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fixtures.hpp"
#include "rtfm/error.hpp"
#include "rtfm/eval.hpp"

using fixtures::DocSpec;
using fixtures::make_index;

namespace {

double precision(std::vector<std::int64_t> cand, std::vector<std::int64_t> ref, std::size_t k)
{
    return rtfm::precision_at_k(cand, ref, k);
}

rtfm::UserProfile random_profile(std::mt19937_64& rng, const std::string& user, std::size_t vocab)
{
    rtfm::UserProfile p{user, {}, 1};
    for (std::size_t i = 0; i < vocab; ++i)
        if (rng() % 2)
            p.weighted_freq["t" + std::to_string(i)] = static_cast<double>(static_cast<int>(rng() % 30) - 5);
    std::erase_if(p.weighted_freq, [](const auto& kv) { return kv.second == 0; });
    return p;
}

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ','))
        out.push_back(field);
    return out;
}

}  // namespace

TEST(Rss, Examples)
{
    const std::vector<double> one{10}, desc{3, 2, 1}, asc{1, 2, 3};
    EXPECT_EQ(rtfm::rss(one), 10.0);
    EXPECT_NEAR(rtfm::rss(desc), 14.0 / 3.0, 1e-12);
    EXPECT_NEAR(rtfm::rss(asc), 10.0 / 3.0, 1e-12);
    EXPECT_THROW(rtfm::rss(std::span<const double>{}), rtfm::Error);
}

TEST(Rss, DescendingIsMaximal)
{
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> score(0.0, 20.0);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<double> s(1 + rng() % 6);
        for (auto& x : s)
            x = trial % 3 ? score(rng) : static_cast<double>(rng() % 3);
        std::sort(s.begin(), s.end(), std::greater<>());
        EXPECT_NEAR(rtfm::rss(s), oracle::max_rss_by_enumeration(s), 1e-12);
    }
}

TEST(PercentIncrease, Examples)
{
    EXPECT_NEAR(rtfm::percent_increase(66897.73314318295, 82537.05329346986), 23.38, 0.01);
    EXPECT_EQ(rtfm::percent_increase(7.5, 7.5), 0.0);
    EXPECT_NEAR(rtfm::percent_increase(100, 120), 20.0, 1e-12);
    EXPECT_THROW(rtfm::percent_increase(0, 1), rtfm::Error);
    EXPECT_THROW(rtfm::percent_increase(-1, 1), rtfm::Error);
}

TEST(PercentIncrease, IncreasingInPersonalized)
{
    double prev = rtfm::percent_increase(10, 0);
    for (int i = 1; i < 100; ++i) {
        const double v = rtfm::percent_increase(10, i * 0.5);
        EXPECT_GT(v, prev);
        prev = v;
    }
}

TEST(Precision, RankingTable)
{
    const std::vector<std::int64_t> ref{1, 2, 3, 4, 5, 6, 7, 8, 9};
    EXPECT_EQ(precision({2, 1, 3, 5, 4, 6, 9, 7, 8}, ref, 3), 1.0);
    EXPECT_EQ(precision({3, 1, 5, 4, 2, 7, 6, 8, 9}, ref, 3), 2.0 / 3.0);
    EXPECT_EQ(precision(ref, ref, 4), 1.0);
}

TEST(Precision, SymmetricAndFullK)
{
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::int64_t> a(1 + rng() % 12);
        std::iota(a.begin(), a.end(), 100);
        auto b = a;
        std::shuffle(a.begin(), a.end(), rng);
        std::shuffle(b.begin(), b.end(), rng);
        const std::size_t k = 1 + rng() % a.size();
        const double p = precision(a, b, k);
        EXPECT_EQ(p, precision(b, a, k));
        EXPECT_GE(p, 0.0);
        EXPECT_LE(p, 1.0);
        EXPECT_EQ(precision(a, b, a.size()), 1.0);
    }
}

TEST(Precision, RejectsBadInput)
{
    EXPECT_THROW(precision({1, 2, 3}, {1, 2, 4}, 2), rtfm::Error);
    EXPECT_THROW(precision({1, 1, 3}, {1, 3, 1}, 2), rtfm::Error);
    EXPECT_THROW(precision({1, 2}, {1, 2, 3}, 1), rtfm::Error);
    EXPECT_THROW(precision({1, 2}, {2, 1}, 0), rtfm::Error);
    EXPECT_THROW(precision({1, 2}, {2, 1}, 3), rtfm::Error);
}

TEST(EvaluateScores, AlreadyDescending)
{
    const auto idx = make_index("P", std::vector<DocSpec>{{{"a"}, 9}, {{"a"}, 5}, {{"a"}, 1}});
    const auto e = rtfm::evaluate_scores(idx, {3.0, 2.0, 1.0}, "u");
    EXPECT_EQ(e.percent_increase, 0.0);
    EXPECT_EQ(e.rss_default, e.rss_personalized);
    EXPECT_EQ(e.n, 3u);
}

TEST(EvaluateScores, DefaultIsAscending)
{
    // Default order is doc order (votes 5..1); scores rise along it.
    const auto idx = make_index(
        "P", std::vector<DocSpec>{{{"a"}, 5}, {{"a"}, 4}, {{"a"}, 3}, {{"a"}, 2}, {{"a"}, 1}});
    const auto e = rtfm::evaluate_scores(idx, {1, 2, 3, 4, 5}, "u");
    EXPECT_NEAR(e.rss_default, (1 * 5 + 2 * 4 + 3 * 3 + 4 * 2 + 5 * 1) / 5.0, 1e-12);
    EXPECT_NEAR(e.rss_personalized, (5 * 5 + 4 * 4 + 3 * 3 + 2 * 2 + 1 * 1) / 5.0, 1e-12);
    EXPECT_NEAR(e.percent_increase, 100.0 * (11.0 - 7.0) / 7.0, 1e-9);
}

TEST(EvaluateScores, AllZero)
{
    const auto idx = make_index("P", std::vector<oracle::Doc>{{"a"}, {"b"}});
    const auto e = rtfm::evaluate_scores(idx, {0.0, 0.0});
    EXPECT_EQ(e.rss_default, 0.0);
    EXPECT_EQ(e.rss_personalized, 0.0);
    EXPECT_EQ(e.percent_increase, 0.0);
}

TEST(EvaluatePair, NonNegativeWithEqualityIffDescending)
{
    std::mt19937_64 rng(3);
    int zero_rows = 0;
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<DocSpec> specs(1 + rng() % 7);
        for (auto& s : specs) {
            s.terms = oracle::random_doc(rng, 6, 8);
            s.helpful = static_cast<std::int64_t>(rng() % 4);
            s.time = static_cast<std::int64_t>(rng() % 4);
        }
        const auto idx = make_index("P", specs);
        const auto profile = random_profile(rng, "u", 8);
        const auto e = rtfm::evaluate_pair(idx, profile, {}, {});
        EXPECT_GE(e.rss_personalized, e.rss_default);
        EXPECT_GE(e.percent_increase, 0.0);

        const auto scores = rtfm::score_documents(idx, rtfm::top_k(profile, 300), {});
        std::vector<double> in_default;
        for (auto i : rtfm::default_order(idx))
            in_default.push_back(scores[i]);
        const bool descending = std::is_sorted(in_default.begin(), in_default.end(), std::greater<>());
        EXPECT_EQ(e.percent_increase == 0.0, descending);
        zero_rows += descending;

        auto sorted = in_default;
        std::sort(sorted.begin(), sorted.end(), std::greater<>());
        EXPECT_EQ(e.rss_default, rtfm::rss(in_default));
        EXPECT_EQ(e.rss_personalized, rtfm::rss(sorted));
    }
    EXPECT_GT(zero_rows, 0);
    EXPECT_LT(zero_rows, 300);
}

TEST(Batch, SingleRow)
{
    const rtfm::IndexStore store({make_index("P", std::vector<DocSpec>{{{"a"}, 5}, {{"a", "b"}, 1}})});
    const std::vector<rtfm::UserProfile> profiles{{"u", {{"b", 2.0}}, 1}};
    const std::vector<std::string> sel{"P"};
    const auto report = rtfm::batch_evaluate(store, profiles, sel, {}, {});
    ASSERT_EQ(report.count(), 1u);
    EXPECT_EQ(report.mean_percent_increase, report.rows[0].percent_increase);
    EXPECT_EQ(report.median_percent_increase, report.rows[0].percent_increase);
    EXPECT_GT(report.rows[0].percent_increase, 0.0);
}

TEST(Batch, ErrorsAreCountedNotDropped)
{
    const rtfm::IndexStore store({make_index("P", std::vector<oracle::Doc>{{"a"}})});
    const std::vector<rtfm::UserProfile> profiles{{"u", {{"a", 1.0}}, 1}};
    const std::vector<std::string> sel{"P", "MISSING"};
    const auto report = rtfm::batch_evaluate(store, profiles, sel, {}, {});
    EXPECT_EQ(report.count(), 1u);
    ASSERT_EQ(report.errors.size(), 1u);
    EXPECT_EQ(report.errors[0].asin, "MISSING");
    const auto summary = nlohmann::json::parse(rtfm::report_summary_json(report));
    EXPECT_EQ(summary["errors"], 1);
    EXPECT_EQ(summary["count"], 1);

    EXPECT_THROW(rtfm::batch_evaluate(store, profiles, {}, {}, {}), rtfm::Error);
    EXPECT_THROW(rtfm::batch_evaluate(store, {}, sel, {}, {}), rtfm::Error);
}

TEST(Batch, AggregatesRecomputeFromCsv)
{
    std::mt19937_64 rng(4);
    std::vector<rtfm::ProductIndex> products;
    std::vector<std::string> selection;
    for (int p = 0; p < 50; ++p) {
        std::vector<DocSpec> specs(1 + rng() % 8);
        for (auto& s : specs) {
            s.terms = oracle::random_doc(rng, 8, 15);
            s.helpful = static_cast<std::int64_t>(rng() % 10);
            s.time = static_cast<std::int64_t>(rng() % 100);
        }
        selection.push_back("B" + std::to_string(p));
        products.push_back(make_index(selection.back(), specs));
    }
    const rtfm::IndexStore store(std::move(products));
    const std::vector<rtfm::UserProfile> profiles{random_profile(rng, "alice", 15), random_profile(rng, "bob", 15)};

    for (auto pairing : {rtfm::Pairing::fixed_user, rtfm::Pairing::cross}) {
        const auto report = rtfm::batch_evaluate(store, profiles, selection, {}, {}, pairing, 4);
        EXPECT_EQ(report.count(), pairing == rtfm::Pairing::cross ? 100u : 50u);
        EXPECT_TRUE(report.errors.empty());

        const auto csv = rtfm::report_csv(report, "abc");
        std::istringstream in(csv);
        std::string line;
        std::getline(in, line);
        EXPECT_EQ(line, "# config_hash=abc");
        std::getline(in, line);
        EXPECT_EQ(line, "asin,user_id,n,rss_default,rss_personalized,percent_increase");
        std::vector<double> values;
        while (std::getline(in, line)) {
            const auto fields = split_csv_line(line);
            ASSERT_EQ(fields.size(), 6u);
            values.push_back(std::stod(fields[5]));
            EXPECT_GE(values.back(), 0.0);
        }
        ASSERT_EQ(values.size(), report.count());
        const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
        EXPECT_NEAR(*report.mean_percent_increase, mean, 1e-9);
        std::sort(values.begin(), values.end());
        const auto n = values.size();
        const double median = n % 2 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2;
        EXPECT_NEAR(*report.median_percent_increase, median, 1e-9);

        // Thread count does not change the report.
        EXPECT_EQ(rtfm::report_csv(rtfm::batch_evaluate(store, profiles, selection, {}, {}, pairing, 1), "abc"), csv);
    }
}

TEST(Batch, SummaryJson)
{
    const rtfm::IndexStore store({make_index("P", std::vector<oracle::Doc>{{"a"}})});
    const std::vector<rtfm::UserProfile> profiles{{"u", {{"a", 1.0}}, 1}};
    const std::vector<std::string> sel{"P"};
    const auto j = nlohmann::json::parse(rtfm::report_summary_json(rtfm::batch_evaluate(store, profiles, sel, {}, {}), "h"));
    EXPECT_EQ(j["mean"], 0.0);
    EXPECT_EQ(j["median"], 0.0);
    EXPECT_EQ(j["count"], 1);
    EXPECT_EQ(j["config_hash"], "h");
}
