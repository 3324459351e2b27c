#include "rtfm/ranker.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "rtfm/error.hpp"

namespace rtfm {

void RankerConfig::validate() const
{
    if (!(k1 > 0) || !std::isfinite(k1))
        throw Error(ErrorCode::invalid_argument, "BM25 k1 must be > 0");
    if (!(b >= 0 && b <= 1))
        throw Error(ErrorCode::invalid_argument, "BM25 b must be in [0, 1]");
}

Bm25Collection Bm25Collection::of(const ProductIndex& index)
{
    return {index.n_docs(), index.avg_doc_len(), &index.doc_freq()};
}

Bm25Collection Bm25Collection::of(const IndexStore& store)
{
    return {store.total_docs(), store.total_avg_doc_len(), &store.global_doc_freq()};
}

double idf(std::uint64_t df, std::size_t n_docs, IdfVariant variant)
{
    const double ratio = (static_cast<double>(n_docs) - static_cast<double>(df) + 0.5) /
                         (static_cast<double>(df) + 0.5);
    return variant == IdfVariant::smoothed ? std::log(ratio + 1.0) : std::log(ratio);
}

double bm25_score(const Bm25Collection& collection, const ReviewDoc& doc, const Terms& query,
                  const RankerConfig& config)
{
    if (collection.avg_doc_len <= 0 || doc.doc_len == 0)
        return 0.0;
    const double norm =
        config.k1 * (1.0 - config.b + config.b * static_cast<double>(doc.doc_len) / collection.avg_doc_len);

    std::unordered_set<std::string_view> seen;
    double score = 0;
    for (const auto& term : query) {
        if (!seen.insert(term).second)
            continue;
        const auto tf = static_cast<double>(doc.term_freq.get(term));
        if (tf == 0)
            continue;
        const double w = idf(collection.doc_freq->get(term), collection.n_docs, config.idf);
        score += w * tf * (config.k1 + 1.0) / (tf + norm);
    }
    return score;
}

double bm25_score(const ProductIndex& index, const ReviewDoc& doc, const Terms& query,
                  const RankerConfig& config)
{
    return bm25_score(Bm25Collection::of(index), doc, query, config);
}

const char* to_string(RankMethod method) noexcept
{
    return method == RankMethod::personalized ? "personalized" : "default";
}

namespace {

// helpful votes desc, then newer first, then input order
bool default_before(const ReviewDoc& a, std::size_t ia, const ReviewDoc& b, std::size_t ib)
{
    if (a.helpful_yes != b.helpful_yes)
        return a.helpful_yes > b.helpful_yes;
    if (a.unix_review_time != b.unix_review_time)
        return a.unix_review_time > b.unix_review_time;
    return ia < ib;
}

Ranking make_ranking(const ProductIndex& index, RankMethod method, const std::vector<std::size_t>& order,
                     const std::vector<double>& scores)
{
    Ranking ranking;
    ranking.asin = index.asin();
    ranking.method = method;
    ranking.ordering.reserve(order.size());
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
        const auto& doc = index.docs()[order[rank]];
        ranking.ordering.push_back(
            {doc.review_position, scores[order[rank]], rank, doc.helpful_yes, doc.unix_review_time});
    }
    return ranking;
}

}  // namespace

std::vector<double> score_documents(const ProductIndex& index, const Terms& query,
                                    const RankerConfig& config, const IndexStore* store)
{
    config.validate();
    Bm25Collection collection = Bm25Collection::of(index);
    if (config.idf_scope == IdfScope::corpus) {
        if (!store)
            throw Error(ErrorCode::invalid_argument, "corpus-scope IDF needs the index store");
        collection = Bm25Collection::of(*store);
    }
    std::vector<double> scores;
    scores.reserve(index.n_docs());
    for (const auto& doc : index.docs())
        scores.push_back(bm25_score(collection, doc, query, config));
    return scores;
}

std::vector<std::size_t> default_order(const ProductIndex& index)
{
    const auto& docs = index.docs();
    std::vector<std::size_t> order(docs.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return default_before(docs[a], a, docs[b], b); });
    return order;
}

Ranking rank_with_query(const ProductIndex& index, const Terms& query, const RankerConfig& config,
                        const IndexStore* store)
{
    const auto scores = score_documents(index, query, config, store);
    const auto& docs = index.docs();
    std::vector<std::size_t> order(docs.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b])
            return scores[a] > scores[b];
        return default_before(docs[a], a, docs[b], b);
    });
    Ranking ranking = make_ranking(index, RankMethod::personalized, order, scores);
    ranking.empty_query = query.empty();
    return ranking;
}

Ranking rank_personalized(const ProductIndex& index, const UserProfile& profile,
                          const RankerConfig& config, const ProfileConfig& profile_config,
                          const IndexStore* store)
{
    return rank_with_query(index, top_k(profile, profile_config.k), config, store);
}

Ranking rank_default(const ProductIndex& index)
{
    return rank_default(index, std::vector<double>(index.n_docs(), 0.0));
}

Ranking rank_default(const ProductIndex& index, const std::vector<double>& scores)
{
    if (scores.size() != index.n_docs())
        throw Error(ErrorCode::invalid_argument, "one score per document is required");
    return make_ranking(index, RankMethod::default_order, default_order(index), scores);
}

std::string ranking_to_json(const Ranking& ranking, const std::string& config_hash)
{
    nlohmann::ordered_json root;
    root["asin"] = ranking.asin;
    root["method"] = to_string(ranking.method);
    if (!config_hash.empty())
        root["config_hash"] = config_hash;
    if (ranking.empty_query)
        root["warning"] = "empty query: every score is 0, ordering follows the tie rule";
    auto entries = nlohmann::ordered_json::array();
    for (const auto& e : ranking.ordering) {
        nlohmann::ordered_json item;
        item["rank"] = e.rank;
        item["review_position"] = e.review_position;
        item["score"] = e.score;
        item["helpful_yes"] = e.helpful_yes;
        item["unix_review_time"] = e.unix_review_time;
        entries.push_back(std::move(item));
    }
    root["entries"] = std::move(entries);
    return root.dump(2) + "\n";
}

}  // namespace rtfm
