#pragma once

#include <string>
#include <vector>

#include "rtfm/index.hpp"
#include "rtfm/profile.hpp"

namespace rtfm {

enum class IdfVariant {
    /// ln((N - df + 0.5) / (df + 0.5) + 1); never negative.
    smoothed,
    /// ln((N - df + 0.5) / (df + 0.5)); negative for terms in more than half the docs.
    classic,
};

enum class IdfScope {
    /// N and df over the target product's reviews.
    product,
    /// N and df over every review in the store.
    corpus,
};

struct RankerConfig {
    double k1 = 1.2;
    double b = 0.75;
    IdfVariant idf = IdfVariant::smoothed;
    IdfScope idf_scope = IdfScope::product;

    /// Throws Error(invalid_argument) unless k1 > 0 and 0 <= b <= 1.
    void validate() const;
};

/// Collection statistics BM25 reads: document count, document frequencies and
/// average length. Built from a product index, or from a whole store for
/// corpus-scope IDF.
struct Bm25Collection {
    std::size_t n_docs = 0;
    double avg_doc_len = 0;
    const TermFreq* doc_freq = nullptr;

    static Bm25Collection of(const ProductIndex& index);
    static Bm25Collection of(const IndexStore& store);
};

double idf(std::uint64_t df, std::size_t n_docs, IdfVariant variant);

/// BM25 score of one document. Duplicate query terms count once. Returns 0
/// when the collection's average document length is 0.
double bm25_score(const Bm25Collection& collection, const ReviewDoc& doc, const Terms& query,
                  const RankerConfig& config);
double bm25_score(const ProductIndex& index, const ReviewDoc& doc, const Terms& query,
                  const RankerConfig& config);

enum class RankMethod { personalized, default_order };

const char* to_string(RankMethod method) noexcept;

struct ScoredReview {
    std::size_t review_position = 0;
    double score = 0;
    std::size_t rank = 0;
    std::int64_t helpful_yes = 0;
    std::int64_t unix_review_time = 0;
};

struct Ranking {
    std::string asin;
    RankMethod method = RankMethod::personalized;
    std::vector<ScoredReview> ordering;
    /// Set when the query had no terms; every score is then 0.
    bool empty_query = false;
};

/// Scores every doc of the index, in doc order. `store` is required only for
/// corpus-scope IDF.
std::vector<double> score_documents(const ProductIndex& index, const Terms& query,
                                    const RankerConfig& config, const IndexStore* store = nullptr);

/// Score descending; ties by helpful votes desc, review time desc, doc order.
Ranking rank_with_query(const ProductIndex& index, const Terms& query, const RankerConfig& config,
                        const IndexStore* store = nullptr);

/// rank_with_query using the profile's top-k terms as the query.
Ranking rank_personalized(const ProductIndex& index, const UserProfile& profile,
                          const RankerConfig& config, const ProfileConfig& profile_config,
                          const IndexStore* store = nullptr);

/// Helpful votes desc, review time desc, doc order. Scores are 0.
Ranking rank_default(const ProductIndex& index);
/// Default order carrying precomputed per-doc scores (doc order), so both
/// orderings can be compared on the same scores.
Ranking rank_default(const ProductIndex& index, const std::vector<double>& scores);

/// Orders doc indices [0, n) by the default rule.
std::vector<std::size_t> default_order(const ProductIndex& index);

/// JSON {asin, method, entries:[{rank, review_position, score, helpful_yes, unix_review_time}]}.
std::string ranking_to_json(const Ranking& ranking, const std::string& config_hash = {});

}  // namespace rtfm
