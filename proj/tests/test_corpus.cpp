#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "rtfm/corpus.hpp"
#include "rtfm/error.hpp"

using rtfm::ErrorCode;
using rtfm::parse_review_record;

namespace {

ErrorCode code_of(const std::string& line)
{
    try {
        parse_review_record(line, 7);
    } catch (const rtfm::RecordError& e) {
        EXPECT_EQ(e.line(), 7u);
        return e.code();
    }
    ADD_FAILURE() << "no error for " << line;
    return ErrorCode::invalid_argument;
}

}  // namespace

TEST(ParseReview, SampleRecord)
{
    const auto line = fixtures::read_file(fixtures::data_path("sample_record.jsonl"));
    const auto r = parse_review_record(line.substr(0, line.find('\n')));
    EXPECT_EQ(r.reviewer_id, "A2SUAM1J3GNN3B");
    EXPECT_EQ(r.asin, "0000013714");
    EXPECT_EQ(r.reviewer_name, "J. McDonald");
    EXPECT_EQ(r.helpful_yes, 2);
    EXPECT_EQ(r.helpful_total, 3);
    EXPECT_EQ(r.review_text, "I bought this for my husband who loves playing piano.");
    EXPECT_EQ(r.overall, 5);
    EXPECT_EQ(r.summary, "Heavenly Highway Hymns");
    EXPECT_EQ(r.unix_review_time, 1252800000);
    EXPECT_EQ(r.review_time_raw, "09 13, 2009");
}

TEST(ParseReview, EmptyTextAccepted)
{
    const auto r = parse_review_record(
        R"({"reviewerID":"u","asin":"p","reviewText":"","overall":1,"unixReviewTime":0})");
    EXPECT_TRUE(r.review_text.empty());
    EXPECT_FALSE(r.reviewer_name.has_value());
    EXPECT_EQ(r.helpful_total, 0);
}

TEST(ParseReview, UnknownFieldsIgnored)
{
    const auto r = parse_review_record(
        R"({"reviewerID":"u","asin":"p","overall":3,"unixReviewTime":5,"style":{"Color":"red"}})");
    EXPECT_EQ(r.overall, 3);
}

TEST(ParseReview, Errors)
{
    EXPECT_EQ(code_of("{not json"), ErrorCode::parse);
    EXPECT_EQ(code_of("[1,2]"), ErrorCode::parse);
    EXPECT_EQ(code_of(R"({"asin":"p","overall":3,"unixReviewTime":5})"), ErrorCode::schema);
    EXPECT_EQ(code_of(R"({"reviewerID":"u","overall":3,"unixReviewTime":5})"), ErrorCode::schema);
    EXPECT_EQ(code_of(R"({"reviewerID":"u","asin":"p","unixReviewTime":5})"), ErrorCode::schema);
    EXPECT_EQ(code_of(R"({"reviewerID":"u","asin":"p","overall":3})"), ErrorCode::schema);
    EXPECT_EQ(code_of(R"({"reviewerID":"u","asin":"p","overall":3,"unixReviewTime":5,"helpful":[1]})"),
              ErrorCode::schema);
    EXPECT_EQ(code_of(R"({"reviewerID":"u","asin":"p","overall":3,"unixReviewTime":5,"helpful":[3,2]})"),
              ErrorCode::schema);
    EXPECT_EQ(code_of(R"({"reviewerID":"u","asin":"p","overall":6,"unixReviewTime":5})"), ErrorCode::schema);
    EXPECT_EQ(code_of(R"({"reviewerID":"u","asin":"p","overall":4.5,"unixReviewTime":5})"),
              ErrorCode::schema);
    EXPECT_EQ(code_of(R"({"reviewerID":"","asin":"p","overall":3,"unixReviewTime":5})"), ErrorCode::schema);
}

TEST(ParseReview, MissingFieldIsNamed)
{
    try {
        parse_review_record(R"({"reviewerID":"u","asin":"p","overall":3})", 12);
        FAIL();
    } catch (const rtfm::RecordError& e) {
        EXPECT_NE(std::string(e.what()).find("unixReviewTime"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("line 12"), std::string::npos);
    }
}

TEST(ParseReview, SerializeRoundTripProperty)
{
    std::mt19937_64 rng(11);
    const std::vector<std::string> alphabet = {"a", "b", "c", "X", "Y", "Z", " ", "0", "1", "9", "\"",
                                               "\\", "/", "\n", "\t", "\xc3\xa9", ".", ",", "!"};
    auto rand_string = [&](std::size_t max) {
        std::uniform_int_distribution<std::size_t> len(0, max);
        std::uniform_int_distribution<std::size_t> ch(0, alphabet.size() - 1);
        std::string s;
        for (auto n = len(rng); n > 0; --n)
            s += alphabet[ch(rng)];
        return s;
    };
    for (int i = 0; i < 200; ++i) {
        rtfm::Review r;
        r.reviewer_id = "U" + rand_string(8);
        r.asin = "P" + rand_string(8);
        if (i % 2)
            r.reviewer_name = rand_string(10);
        r.helpful_total = static_cast<std::int64_t>(rng() % 1000);
        r.helpful_yes = r.helpful_total ? static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(r.helpful_total + 1)) : 0;
        r.review_text = rand_string(60);
        r.overall = 1 + static_cast<int>(rng() % 5);
        r.summary = rand_string(20);
        r.unix_review_time = static_cast<std::int64_t>(rng() % 2000000000);
        r.review_time_raw = rand_string(11);
        EXPECT_EQ(parse_review_record(rtfm::serialize_review(r)), r);
    }
}

TEST(LoadCorpus, Fixture)
{
    const auto result = rtfm::load_corpus(fixtures::data_path("sample_6.jsonl"));
    const auto& corpus = result.corpus;
    EXPECT_EQ(corpus.size(), 6u);
    EXPECT_EQ(corpus.by_product().size(), 2u);
    EXPECT_EQ(corpus.by_user().size(), 3u);
    EXPECT_EQ(corpus[0].asin, "P1");
    EXPECT_EQ(corpus[4].review_text, "");
    EXPECT_EQ(corpus.product_reviews("P1"), (std::vector<std::size_t>{0, 1, 3, 5}));
    EXPECT_EQ(corpus.user_reviews("U1"), (std::vector<std::size_t>{0, 2, 5}));
    EXPECT_TRUE(corpus.product_reviews("nope").empty());
}

TEST(LoadCorpus, GroupingsPartitionReviews)
{
    const auto corpus = rtfm::load_corpus(fixtures::data_path("sample_6.jsonl")).corpus;
    std::vector<int> seen_p(corpus.size()), seen_u(corpus.size());
    std::size_t total = 0;
    for (const auto& [asin, positions] : corpus.by_product()) {
        EXPECT_GE(positions.size(), 1u);
        total += positions.size();
        for (auto p : positions) {
            EXPECT_EQ(corpus[p].asin, asin);
            ++seen_p[p];
        }
    }
    for (const auto& [user, positions] : corpus.by_user())
        for (auto p : positions) {
            EXPECT_EQ(corpus[p].reviewer_id, user);
            ++seen_u[p];
        }
    EXPECT_EQ(total, corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        EXPECT_EQ(seen_p[i], 1);
        EXPECT_EQ(seen_u[i], 1);
    }
}

TEST(LoadCorpus, StrictStopsAtBadLine)
{
    try {
        rtfm::load_corpus(fixtures::data_path("bad_line.jsonl"));
        FAIL();
    } catch (const rtfm::RecordError& e) {
        EXPECT_EQ(e.line(), 4u);
        EXPECT_EQ(e.code(), ErrorCode::parse);
    }
}

TEST(LoadCorpus, LenientSkipsAndCounts)
{
    const auto result = rtfm::load_corpus(fixtures::data_path("bad_line.jsonl"), {.strict = false});
    EXPECT_EQ(result.corpus.size(), 6u);
    EXPECT_EQ(result.skipped, 1u);
    ASSERT_EQ(result.skip_messages.size(), 1u);
    EXPECT_NE(result.skip_messages[0].find("line 4"), std::string::npos);
}

TEST(LoadCorpus, MissingFile)
{
    try {
        rtfm::load_corpus(fixtures::data_path("does_not_exist.jsonl"));
        FAIL();
    } catch (const rtfm::Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::io);
    }
}
