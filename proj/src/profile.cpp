#include "rtfm/profile.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "hash.hpp"
#include "rtfm/error.hpp"

namespace rtfm {

using nlohmann::json;
using nlohmann::ordered_json;

void ProfileConfig::validate() const
{
    if (k == 0)
        throw Error(ErrorCode::invalid_argument, "profile k must be >= 1");
    if (!(dwell_low_minutes < dwell_high_minutes))
        throw Error(ErrorCode::invalid_argument, "dwell breakpoints must satisfy low < high");
    if (dwell_schedule == DwellSchedule::two_segment &&
        !(dwell_low_minutes < dwell_neutral_minutes && dwell_neutral_minutes < dwell_high_minutes))
        throw Error(ErrorCode::invalid_argument,
                    "dwell breakpoints must satisfy low < neutral < high");
    for (double w : {shopped_weight, reviewed_weight, dwell_low_weight, dwell_high_weight})
        if (!std::isfinite(w))
            throw Error(ErrorCode::invalid_argument, "profile weights must be finite");
}

double dwell_weight(double minutes, const ProfileConfig& c)
{
    if (!std::isfinite(minutes) || minutes < 0)
        throw Error(ErrorCode::domain, "dwell time must be a non-negative number of minutes");
    if (minutes <= c.dwell_low_minutes)
        return c.dwell_low_weight;
    if (minutes >= c.dwell_high_minutes)
        return c.dwell_high_weight;

    if (c.dwell_schedule == DwellSchedule::single_line) {
        const double t = (minutes - c.dwell_low_minutes) / (c.dwell_high_minutes - c.dwell_low_minutes);
        return c.dwell_low_weight + t * (c.dwell_high_weight - c.dwell_low_weight);
    }
    if (minutes == c.dwell_neutral_minutes)
        return 0.0;
    if (minutes < c.dwell_neutral_minutes) {
        const double t = (minutes - c.dwell_low_minutes) / (c.dwell_neutral_minutes - c.dwell_low_minutes);
        return c.dwell_low_weight * (1.0 - t);
    }
    const double t = (minutes - c.dwell_neutral_minutes) / (c.dwell_high_minutes - c.dwell_neutral_minutes);
    return c.dwell_high_weight * t;
}

double event_weight(const ActivityEvent& event, const ProfileConfig& config)
{
    struct Visitor {
        const ProfileConfig& config;
        double operator()(const Browsed& b) const { return dwell_weight(b.dwell_minutes, config); }
        double operator()(const Shopped&) const { return config.shopped_weight; }
        double operator()(const Reviewed&) const { return config.reviewed_weight; }
    };
    return std::visit(Visitor{config}, event.kind);
}

void apply_event(UserProfile& profile, const ActivityEvent& event, const TermFreq& source,
                 const ProfileConfig& config)
{
    const double weight = event_weight(event, config);
    ++profile.event_count;
    if (weight == 0.0)
        return;
    for (const auto& [term, count] : source) {
        auto [it, inserted] = profile.weighted_freq.try_emplace(term, 0.0);
        it->second += weight * static_cast<double>(count);
        if (it->second == 0.0)
            profile.weighted_freq.erase(it);
    }
}

TermFreq event_source(const ActivityEvent& event, const IndexStore& store)
{
    if (const auto* r = std::get_if<Reviewed>(&event.kind))
        return TermFreq::count(r->review_terms);
    return store.at(event.asin).term_totals();
}

UserProfile build_profile(const std::string& user_id, std::span<const ActivityEvent> events,
                          const IndexStore& store, const ProfileConfig& config)
{
    UserProfile profile;
    profile.user_id = user_id;
    for (const auto& event : events) {
        if (const auto* r = std::get_if<Reviewed>(&event.kind)) {
            apply_event(profile, event, TermFreq::count(r->review_terms), config);
        } else {
            apply_event(profile, event, store.at(event.asin).term_totals(), config);
        }
    }
    return profile;
}

namespace {

using WeightedTerm = std::pair<std::string, double>;

bool heavier(const WeightedTerm& a, const WeightedTerm& b)
{
    if (a.second != b.second)
        return a.second > b.second;
    return a.first < b.first;
}

}  // namespace

Terms top_k(const UserProfile& profile, std::size_t k)
{
    std::vector<const std::pair<const std::string, double>*> positive;
    for (const auto& entry : profile.weighted_freq)
        if (entry.second > 0)
            positive.push_back(&entry);

    const std::size_t n = std::min(k, positive.size());
    std::partial_sort(positive.begin(), positive.begin() + static_cast<std::ptrdiff_t>(n),
                      positive.end(), [](const auto* a, const auto* b) {
                          if (a->second != b->second)
                              return a->second > b->second;
                          return a->first < b->first;
                      });
    Terms out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(positive[i]->first);
    return out;
}

std::string profile_to_json(const UserProfile& profile, const std::string& config_hash)
{
    std::vector<WeightedTerm> terms(profile.weighted_freq.begin(), profile.weighted_freq.end());
    std::sort(terms.begin(), terms.end(), heavier);

    ordered_json root;
    root["user_id"] = profile.user_id;
    root["event_count"] = profile.event_count;
    if (!config_hash.empty())
        root["config_hash"] = config_hash;
    ordered_json arr = ordered_json::array();
    for (const auto& [term, weight] : terms)
        arr.push_back(ordered_json{{"term", term}, {"weight", weight}});
    root["terms"] = std::move(arr);
    return root.dump(2) + "\n";
}

namespace {

json parse_json(std::string_view text, const char* what)
{
    json doc = json::parse(text.begin(), text.end(), nullptr, false);
    if (doc.is_discarded() || !doc.is_object())
        throw Error(ErrorCode::parse, std::string("malformed ") + what + " JSON");
    return doc;
}

template <typename T>
T field(const json& obj, const char* key, const char* what)
{
    auto it = obj.find(key);
    if (it == obj.end())
        throw Error(ErrorCode::schema, std::string(what) + " is missing '" + key + "'");
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        throw Error(ErrorCode::schema, std::string(what) + " has a mistyped '" + key + "'");
    }
}

}  // namespace

UserProfile profile_from_json(std::string_view text)
{
    const json doc = parse_json(text, "profile");
    UserProfile profile;
    profile.user_id = field<std::string>(doc, "user_id", "profile");
    profile.event_count = field<std::uint64_t>(doc, "event_count", "profile");
    const auto terms = field<json>(doc, "terms", "profile");
    if (!terms.is_array())
        throw Error(ErrorCode::schema, "profile 'terms' must be an array");
    for (const auto& t : terms) {
        if (!t.is_object())
            throw Error(ErrorCode::schema, "profile term entries must be objects");
        const auto weight = field<double>(t, "weight", "profile term");
        if (!std::isfinite(weight))
            throw Error(ErrorCode::schema, "profile weights must be finite");
        if (!profile.weighted_freq.emplace(field<std::string>(t, "term", "profile term"), weight).second)
            throw Error(ErrorCode::schema, "duplicate term in profile");
    }
    return profile;
}

void ActivitySimulationConfig::validate() const
{
    if (browse_min < 0 || browse_min > browse_max)
        throw Error(ErrorCode::invalid_argument, "browse count range must satisfy 0 <= min <= max");
    if (shop_min < 0 || shop_min > shop_max)
        throw Error(ErrorCode::invalid_argument, "shop count range must satisfy 0 <= min <= max");
    if (!(dwell_min >= 0 && dwell_min <= dwell_max && std::isfinite(dwell_max)))
        throw Error(ErrorCode::invalid_argument, "dwell range must satisfy 0 <= min <= max");
}

std::vector<ActivityEvent> simulate_activity(const ActivitySimulationConfig& config,
                                             const ReviewCorpus& corpus, const std::string& user_id,
                                             const TextPipelineConfig& text_config)
{
    config.validate();
    if (corpus.by_product().empty())
        throw Error(ErrorCode::domain, "cannot simulate activity over an empty corpus");

    std::vector<const std::string*> products;
    products.reserve(corpus.by_product().size());
    for (const auto& [asin, positions] : corpus.by_product())
        products.push_back(&asin);

    // Per-user stream: independent of which other users are simulated.
    const std::uint64_t user_hash = detail::fnv1a(user_id);
    std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32),
                      static_cast<std::uint32_t>(user_hash), static_cast<std::uint32_t>(user_hash >> 32)};
    std::mt19937_64 rng(seq);

    std::uniform_int_distribution<std::int64_t> browse_count(config.browse_min, config.browse_max);
    std::uniform_int_distribution<std::int64_t> shop_count(config.shop_min, config.shop_max);
    std::uniform_int_distribution<std::size_t> pick(0, products.size() - 1);
    std::uniform_real_distribution<double> dwell(config.dwell_min, config.dwell_max);

    const auto n_browse = browse_count(rng);
    const auto n_shop = shop_count(rng);
    const auto& own_reviews = corpus.user_reviews(user_id);

    std::vector<ActivityEvent> events;
    events.reserve(static_cast<std::size_t>(n_browse + n_shop) + own_reviews.size());
    for (std::int64_t i = 0; i < n_browse; ++i) {
        const auto& asin = *products[pick(rng)];
        events.push_back({user_id, asin, Browsed{dwell(rng)}});
    }
    for (std::int64_t i = 0; i < n_shop; ++i)
        events.push_back({user_id, *products[pick(rng)], Shopped{}});
    for (std::size_t pos : own_reviews) {
        const Review& r = corpus[pos];
        events.push_back({user_id, r.asin, Reviewed{review_terms(r, text_config)}});
    }
    return events;
}

std::string events_to_json(const std::string& user_id, std::span<const ActivityEvent> events,
                           const std::string& config_hash)
{
    ordered_json root;
    root["user_id"] = user_id;
    if (!config_hash.empty())
        root["config_hash"] = config_hash;
    ordered_json arr = ordered_json::array();
    for (const auto& e : events) {
        ordered_json item;
        item["asin"] = e.asin;
        if (const auto* b = std::get_if<Browsed>(&e.kind)) {
            item["kind"] = "browsed";
            item["dwell_minutes"] = b->dwell_minutes;
        } else if (std::holds_alternative<Shopped>(e.kind)) {
            item["kind"] = "shopped";
        } else {
            item["kind"] = "reviewed";
            item["review_terms"] = std::get<Reviewed>(e.kind).review_terms;
        }
        if (e.user_id != user_id)
            item["user_id"] = e.user_id;
        arr.push_back(std::move(item));
    }
    root["events"] = std::move(arr);
    return root.dump(1) + "\n";
}

std::vector<ActivityEvent> events_from_json(std::string_view text, std::string* user_id)
{
    const json doc = parse_json(text, "event log");
    const auto log_user = field<std::string>(doc, "user_id", "event log");
    const auto events = field<json>(doc, "events", "event log");
    if (!events.is_array())
        throw Error(ErrorCode::schema, "event log 'events' must be an array");

    std::vector<ActivityEvent> out;
    out.reserve(events.size());
    for (const auto& item : events) {
        if (!item.is_object())
            throw Error(ErrorCode::schema, "event entries must be objects");
        ActivityEvent e;
        e.user_id = item.contains("user_id") ? field<std::string>(item, "user_id", "event") : log_user;
        e.asin = field<std::string>(item, "asin", "event");
        const auto kind = field<std::string>(item, "kind", "event");
        if (kind == "browsed") {
            const auto minutes = field<double>(item, "dwell_minutes", "event");
            if (!std::isfinite(minutes) || minutes < 0)
                throw Error(ErrorCode::schema, "event dwell_minutes must be >= 0");
            e.kind = Browsed{minutes};
        } else if (kind == "shopped") {
            e.kind = Shopped{};
        } else if (kind == "reviewed") {
            e.kind = Reviewed{field<Terms>(item, "review_terms", "event")};
        } else {
            throw Error(ErrorCode::schema, "unknown event kind '" + kind + "'");
        }
        out.push_back(std::move(e));
    }
    if (user_id)
        *user_id = log_user;
    return out;
}

}  // namespace rtfm
