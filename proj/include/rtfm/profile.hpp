#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rtfm/corpus.hpp"
#include "rtfm/index.hpp"
#include "rtfm/text.hpp"

namespace rtfm {

enum class DwellSchedule {
    /// Linear pieces through (low, low_weight), (neutral, 0), (high, high_weight).
    two_segment,
    /// One line from (low, low_weight) to (high, high_weight); ignores `neutral`.
    single_line,
};

/// Activity weights used when folding events into a profile.
struct ProfileConfig {
    double shopped_weight = 5.0;
    double reviewed_weight = 10.0;

    DwellSchedule dwell_schedule = DwellSchedule::two_segment;
    double dwell_low_minutes = 1.0;
    double dwell_neutral_minutes = 2.5;
    double dwell_high_minutes = 5.0;
    double dwell_low_weight = -2.0;
    double dwell_high_weight = 2.0;

    /// Number of profile terms used as the ranking query.
    std::size_t k = 300;

    /// Throws Error(invalid_argument) if k is 0 or the dwell breakpoints are
    /// not strictly increasing.
    void validate() const;
};

struct Browsed {
    double dwell_minutes = 0;
    bool operator==(const Browsed&) const = default;
};
struct Shopped {
    bool operator==(const Shopped&) const = default;
};
/// The user's own review of `asin`, already run through the text pipeline.
struct Reviewed {
    Terms review_terms;
    bool operator==(const Reviewed&) const = default;
};

struct ActivityEvent {
    std::string user_id;
    std::string asin;
    std::variant<Browsed, Shopped, Reviewed> kind;

    bool operator==(const ActivityEvent&) const = default;
};

/// Piecewise-linear map from page dwell time to profile weight. Throws
/// Error(domain) for negative or non-finite minutes.
double dwell_weight(double minutes, const ProfileConfig& config);

double event_weight(const ActivityEvent& event, const ProfileConfig& config);

/// Weighted term frequencies accumulated from activity. Weights may be
/// negative; terms whose weight returns to exactly zero are dropped.
struct UserProfile {
    std::string user_id;
    std::map<std::string, double> weighted_freq;
    std::uint64_t event_count = 0;

    double weight(const std::string& term) const
    {
        auto it = weighted_freq.find(term);
        return it == weighted_freq.end() ? 0.0 : it->second;
    }

    bool operator==(const UserProfile&) const = default;
};

/// freq(t) += weight(event) * source(t) for every term in `source`.
void apply_event(UserProfile& profile, const ActivityEvent& event, const TermFreq& source,
                 const ProfileConfig& config);

/// The term frequencies an event contributes: the product's summed review
/// term frequencies for Browsed/Shopped, the review's own terms for Reviewed.
/// Throws Error(not_found) when a Browsed/Shopped asin is not in the store.
TermFreq event_source(const ActivityEvent& event, const IndexStore& store);

/// Left fold of apply_event over `events` from an empty profile.
UserProfile build_profile(const std::string& user_id, std::span<const ActivityEvent> events,
                          const IndexStore& store, const ProfileConfig& config);

/// Up to k strictly positive terms, weight descending, ties by term ascending.
Terms top_k(const UserProfile& profile, std::size_t k);

/// JSON {user_id, event_count, terms:[{term, weight}], config_hash?} with terms
/// sorted by weight descending then term.
std::string profile_to_json(const UserProfile& profile, const std::string& config_hash = {});
/// Throws Error(parse|schema).
UserProfile profile_from_json(std::string_view text);

struct ActivitySimulationConfig {
    std::uint64_t seed = 42;
    std::int64_t browse_min = 100;
    std::int64_t browse_max = 500;
    std::int64_t shop_min = 30;
    std::int64_t shop_max = 100;
    double dwell_min = 0.0;
    double dwell_max = 6.0;

    void validate() const;
};

/// Random browsing and shopping history for one user plus a Reviewed event for
/// each of the user's reviews in the corpus. Products are drawn uniformly with
/// replacement. The stream depends only on (seed, user_id, corpus products).
/// Throws Error(domain) if the corpus has no products.
std::vector<ActivityEvent> simulate_activity(const ActivitySimulationConfig& config,
                                             const ReviewCorpus& corpus, const std::string& user_id,
                                             const TextPipelineConfig& text_config);

/// Event log JSON {user_id, config_hash?, events:[...]}.
std::string events_to_json(const std::string& user_id, std::span<const ActivityEvent> events,
                           const std::string& config_hash = {});
/// Returns the events; `user_id` receives the log's user. Throws Error(parse|schema).
std::vector<ActivityEvent> events_from_json(std::string_view text, std::string* user_id = nullptr);

}  // namespace rtfm
