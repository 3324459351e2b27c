#include <gtest/gtest.h>

#include <array>
#include <random>

#include "fixtures.hpp"
#include "rtfm/error.hpp"
#include "rtfm/stats.hpp"

namespace {

rtfm::Review review(const std::string& user, const std::string& asin, int rating = 5,
                    const std::string& text = "")
{
    rtfm::Review r;
    r.reviewer_id = user;
    r.asin = asin;
    r.overall = rating;
    r.review_text = text;
    return r;
}

void expect_summary(const rtfm::Summary& s, std::array<double, 7> v)
{
    EXPECT_NEAR(s.mean, v[0], 1e-12);
    EXPECT_NEAR(s.std, v[1], 1e-12);
    EXPECT_DOUBLE_EQ(s.min, v[2]);
    EXPECT_DOUBLE_EQ(s.q25, v[3]);
    EXPECT_DOUBLE_EQ(s.median, v[4]);
    EXPECT_DOUBLE_EQ(s.q75, v[5]);
    EXPECT_DOUBLE_EQ(s.max, v[6]);
}

}  // namespace

// Expected values were computed with numpy (linear percentiles, ddof=1).
TEST(Stats, SixReviewFixture)
{
    const auto corpus = rtfm::load_corpus(fixtures::data_path("sample_6.jsonl")).corpus;
    const auto s = rtfm::compute_stats(corpus);
    EXPECT_EQ(s.n_reviews, 6u);
    EXPECT_EQ(s.n_users, 3u);
    EXPECT_EQ(s.n_products, 2u);
    expect_summary(s.reviews_per_user, {2, 1, 1, 1.5, 2, 2.5, 3});
    expect_summary(s.reviews_per_product, {3, 1.4142135623730951, 2, 2.5, 3, 3.5, 4});
    expect_summary(s.rating, {3.1666666666666665, 1.4719601443879746, 1, 2.25, 3.5, 4, 5});
    expect_summary(s.review_length, {33.5, 17.25977983637103, 0, 34, 38.5, 41.5, 49});
}

TEST(Stats, SingleReviewIsDegenerate)
{
    const rtfm::ReviewCorpus corpus({review("u", "p", 4, "hello")});
    const auto s = rtfm::compute_stats(corpus);
    for (const auto* sum : {&s.reviews_per_user, &s.reviews_per_product, &s.rating, &s.review_length}) {
        EXPECT_EQ(sum->min, sum->max);
        EXPECT_EQ(sum->q25, sum->min);
        EXPECT_EQ(sum->median, sum->min);
        EXPECT_EQ(sum->q75, sum->min);
        EXPECT_EQ(sum->std, 0);
    }
}

TEST(Stats, MedianReviewsPerUser)
{
    // Users with 5, 5, 7, 9 and 152 reviews: the middle count is 7.
    std::vector<rtfm::Review> reviews;
    const std::pair<const char*, int> users[] = {{"a", 5}, {"b", 5}, {"c", 7}, {"d", 9}, {"e", 152}};
    for (const auto& [user, n] : users)
        for (int i = 0; i < n; ++i)
            reviews.push_back(review(user, "p" + std::to_string(i % 4)));
    const auto s = rtfm::compute_stats(rtfm::ReviewCorpus(std::move(reviews)));
    EXPECT_EQ(s.reviews_per_user.median, 7);
    EXPECT_EQ(s.reviews_per_user.min, 5);
    EXPECT_EQ(s.reviews_per_user.max, 152);
}

TEST(Stats, TotalsAndOrdering)
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<rtfm::Review> reviews;
        const auto n = 1 + rng() % 60;
        for (std::uint64_t i = 0; i < n; ++i)
            reviews.push_back(review("u" + std::to_string(rng() % 7), "p" + std::to_string(rng() % 5),
                                     1 + static_cast<int>(rng() % 5), std::string(rng() % 40, 'x')));
        const rtfm::ReviewCorpus corpus(std::move(reviews));
        const auto s = rtfm::compute_stats(corpus);
        EXPECT_NEAR(s.reviews_per_user.mean * static_cast<double>(s.n_users), static_cast<double>(s.n_reviews), 1e-9);
        EXPECT_NEAR(s.reviews_per_product.mean * static_cast<double>(s.n_products), static_cast<double>(s.n_reviews), 1e-9);
        for (const auto* sum : {&s.reviews_per_user, &s.reviews_per_product, &s.rating, &s.review_length}) {
            EXPECT_LE(sum->min, sum->q25);
            EXPECT_LE(sum->q25, sum->median);
            EXPECT_LE(sum->median, sum->q75);
            EXPECT_LE(sum->q75, sum->max);
        }
    }
}

TEST(Stats, CountsCodePoints) { EXPECT_EQ(rtfm::utf8_length("caf\xc3\xa9"), 4u); }

TEST(Stats, EmptyCorpusFails)
{
    EXPECT_THROW(rtfm::compute_stats(rtfm::ReviewCorpus{}), rtfm::Error);
}
