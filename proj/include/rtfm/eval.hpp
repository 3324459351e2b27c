#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rtfm/index.hpp"
#include "rtfm/profile.hpp"
#include "rtfm/ranker.hpp"

namespace rtfm {

/// Ranking Satisfaction Score: sum of s_i * (n - i) over ranks i = 0..n-1,
/// divided by n. Throws Error(domain) on an empty sequence.
double rss(std::span<const double> scores_in_rank_order);

/// 100 * (personalized - default) / default. Throws Error(domain) unless
/// rss_default > 0.
double percent_increase(double rss_default, double rss_personalized);

/// |top-k(candidate) ∩ top-k(reference)| / k. Both inputs must be permutations
/// of the same items and 1 <= k <= n; otherwise Error(domain).
double precision_at_k(std::span<const std::int64_t> candidate,
                      std::span<const std::int64_t> reference, std::size_t k);

struct RankingEvaluation {
    std::string asin;
    std::string user_id;
    std::size_t n = 0;
    double rss_default = 0;
    double rss_personalized = 0;
    double percent_increase = 0;
};

/// Applies one set of per-doc scores (doc order) under both orderings. All-zero
/// scores give both RSS 0 and a 0% increase.
RankingEvaluation evaluate_scores(const ProductIndex& index, const std::vector<double>& scores,
                                  const std::string& user_id = {});

/// Scores every review once with the profile's top-k query and compares the
/// score-descending order against the default order.
RankingEvaluation evaluate_pair(const ProductIndex& index, const UserProfile& profile,
                                const RankerConfig& config, const ProfileConfig& profile_config,
                                const IndexStore* store = nullptr);

enum class Pairing {
    /// The first profile against every selected product.
    fixed_user,
    /// Every profile against every selected product.
    cross,
};

struct RowError {
    std::string asin;
    std::string user_id;
    std::string message;
};

struct BatchReport {
    /// Sorted by (asin, user_id).
    std::vector<RankingEvaluation> rows;
    std::vector<RowError> errors;
    /// Over `rows` only; empty when no row succeeded.
    std::optional<double> mean_percent_increase;
    std::optional<double> median_percent_increase;

    std::size_t count() const noexcept { return rows.size(); }
};

/// Throws Error(invalid_argument) for an empty selection or no profiles.
/// Per-row failures (unknown asin, undefined increase) land in `errors`.
BatchReport batch_evaluate(const IndexStore& store, std::span<const UserProfile> profiles,
                           std::span<const std::string> selection, const RankerConfig& config,
                           const ProfileConfig& profile_config, Pairing pairing = Pairing::fixed_user,
                           unsigned threads = 0);

/// CSV: asin,user_id,n,rss_default,rss_personalized,percent_increase. With a
/// config hash the file starts with a "# config_hash=<hash>" comment line.
std::string report_csv(const BatchReport& report, const std::string& config_hash = {});
/// JSON {mean, median, count, errors, config_hash?, error_rows:[...]}.
std::string report_summary_json(const BatchReport& report, const std::string& config_hash = {});

}  // namespace rtfm
