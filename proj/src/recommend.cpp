#include "rtfm/recommend.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

namespace rtfm {

std::optional<TermRating> term_rating(const ProductIndex& index, const std::string& term)
{
    std::size_t support = 0;
    long long rating_sum = 0;
    for (const auto& doc : index.docs()) {
        if (doc.term_freq.contains(term)) {
            ++support;
            rating_sum += doc.overall;
        }
    }
    if (support == 0)
        return std::nullopt;
    return TermRating{term, static_cast<double>(rating_sum) / static_cast<double>(support), support};
}

RecommendationScore recommendation_score(const ProductIndex& index, const UserProfile& profile,
                                         const ProfileConfig& profile_config)
{
    RecommendationScore rec;
    rec.asin = index.asin();
    rec.user_id = profile.user_id;

    double sum = 0;
    for (const auto& term : top_k(profile, profile_config.k)) {
        if (auto rating = term_rating(index, term)) {
            sum += rating->avg_rating;
            rec.term_ratings.push_back(std::move(*rating));
        }
    }
    rec.covered_terms = rec.term_ratings.size();
    if (rec.covered_terms > 0)
        rec.score = sum / static_cast<double>(rec.covered_terms);
    std::stable_sort(rec.term_ratings.begin(), rec.term_ratings.end(),
                     [](const TermRating& a, const TermRating& b) {
                         if (a.support != b.support)
                             return a.support > b.support;
                         return a.term < b.term;
                     });
    return rec;
}

std::string recommendation_to_json(const RecommendationScore& rec, const std::string& config_hash)
{
    nlohmann::ordered_json root;
    root["asin"] = rec.asin;
    root["user_id"] = rec.user_id;
    root["score"] = rec.score ? nlohmann::ordered_json(*rec.score) : nlohmann::ordered_json(nullptr);
    root["covered_terms"] = rec.covered_terms;
    if (!config_hash.empty())
        root["config_hash"] = config_hash;
    auto terms = nlohmann::ordered_json::array();
    for (const auto& t : rec.term_ratings)
        terms.push_back({{"term", t.term}, {"avg_rating", t.avg_rating}, {"support", t.support}});
    root["terms"] = std::move(terms);
    return root.dump(2) + "\n";
}

}  // namespace rtfm
