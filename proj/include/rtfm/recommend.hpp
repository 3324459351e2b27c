#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rtfm/index.hpp"
#include "rtfm/profile.hpp"

namespace rtfm {

struct TermRating {
    std::string term;
    double avg_rating = 0;
    /// Reviews of the product containing the term.
    std::size_t support = 0;
};

/// Mean star rating over the product's reviews that contain `term` (a review
/// counts once however often the term repeats). std::nullopt when no review
/// contains it. `term` must already be pipeline-normalized.
std::optional<TermRating> term_rating(const ProductIndex& index, const std::string& term);

struct RecommendationScore {
    std::string asin;
    std::string user_id;
    /// Mean avg_rating over covered top-k terms; empty when none is covered.
    std::optional<double> score;
    std::size_t covered_terms = 0;
    /// Covered terms, support descending then term ascending.
    std::vector<TermRating> term_ratings;

    bool scorable() const noexcept { return score.has_value(); }
};

RecommendationScore recommendation_score(const ProductIndex& index, const UserProfile& profile,
                                         const ProfileConfig& profile_config);

/// JSON {asin, user_id, score, covered_terms, terms:[{term, avg_rating, support}]};
/// score is null when not scorable.
std::string recommendation_to_json(const RecommendationScore& rec, const std::string& config_hash = {});

}  // namespace rtfm
