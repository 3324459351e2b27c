#include "rtfm/eval.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "parallel.hpp"
#include "rtfm/error.hpp"

namespace rtfm {

double rss(std::span<const double> scores)
{
    if (scores.empty())
        throw Error(ErrorCode::domain, "RSS of an empty ranking is undefined");
    const auto n = scores.size();
    double sum = 0;
    for (std::size_t i = 0; i < n; ++i)
        sum += scores[i] * static_cast<double>(n - i);
    return sum / static_cast<double>(n);
}

double percent_increase(double rss_default, double rss_personalized)
{
    if (!(rss_default > 0) || !std::isfinite(rss_default) || !std::isfinite(rss_personalized))
        throw Error(ErrorCode::domain, "percent increase needs a positive finite default RSS");
    return 100.0 * (rss_personalized - rss_default) / rss_default;
}

double precision_at_k(std::span<const std::int64_t> candidate,
                      std::span<const std::int64_t> reference, std::size_t k)
{
    if (candidate.size() != reference.size())
        throw Error(ErrorCode::domain, "orders have different lengths");
    const std::unordered_set<std::int64_t> items(reference.begin(), reference.end());
    if (items.size() != reference.size())
        throw Error(ErrorCode::domain, "reference order repeats an item");
    std::unordered_set<std::int64_t> seen;
    for (auto v : candidate)
        if (!items.contains(v) || !seen.insert(v).second)
            throw Error(ErrorCode::domain, "candidate is not a permutation of the reference");
    if (k == 0 || k > reference.size())
        throw Error(ErrorCode::domain, "k must satisfy 1 <= k <= n");

    const std::unordered_set<std::int64_t> top(reference.begin(), reference.begin() + static_cast<std::ptrdiff_t>(k));
    std::size_t hits = 0;
    for (std::size_t i = 0; i < k; ++i)
        hits += top.contains(candidate[i]) ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(k);
}

RankingEvaluation evaluate_scores(const ProductIndex& index, const std::vector<double>& scores,
                                  const std::string& user_id)
{
    if (scores.size() != index.n_docs())
        throw Error(ErrorCode::invalid_argument, "one score per document is required");

    RankingEvaluation ev;
    ev.asin = index.asin();
    ev.user_id = user_id;
    ev.n = scores.size();

    std::vector<double> by_default;
    by_default.reserve(scores.size());
    for (std::size_t d : default_order(index))
        by_default.push_back(scores[d]);
    std::vector<double> by_score(scores);
    std::sort(by_score.begin(), by_score.end(), std::greater<>());

    ev.rss_default = rss(by_default);
    ev.rss_personalized = rss(by_score);
    const bool all_zero = std::all_of(scores.begin(), scores.end(), [](double s) { return s == 0.0; });
    ev.percent_increase = all_zero ? 0.0 : percent_increase(ev.rss_default, ev.rss_personalized);
    return ev;
}

RankingEvaluation evaluate_pair(const ProductIndex& index, const UserProfile& profile,
                                const RankerConfig& config, const ProfileConfig& profile_config,
                                const IndexStore* store)
{
    const auto scores = score_documents(index, top_k(profile, profile_config.k), config, store);
    return evaluate_scores(index, scores, profile.user_id);
}

BatchReport batch_evaluate(const IndexStore& store, std::span<const UserProfile> profiles,
                           std::span<const std::string> selection, const RankerConfig& config,
                           const ProfileConfig& profile_config, Pairing pairing, unsigned threads)
{
    if (selection.empty())
        throw Error(ErrorCode::invalid_argument, "product selection is empty");
    if (profiles.empty())
        throw Error(ErrorCode::invalid_argument, "no user profile given");
    config.validate();
    profile_config.validate();

    const std::set<std::string> asins(selection.begin(), selection.end());
    std::vector<std::pair<const std::string*, const UserProfile*>> jobs;
    const auto users = pairing == Pairing::fixed_user ? profiles.first(1) : profiles;
    for (const auto& asin : asins)
        for (const auto& user : users)
            jobs.emplace_back(&asin, &user);
    std::sort(jobs.begin(), jobs.end(), [](const auto& a, const auto& b) {
        if (*a.first != *b.first)
            return *a.first < *b.first;
        return a.second->user_id < b.second->user_id;
    });

    // Queries depend only on the profile.
    std::vector<std::pair<const UserProfile*, Terms>> queries;
    for (const auto& user : users)
        queries.emplace_back(&user, top_k(user, profile_config.k));
    auto query_of = [&](const UserProfile* p) -> const Terms& {
        for (const auto& [profile, terms] : queries)
            if (profile == p)
                return terms;
        throw Error(ErrorCode::invalid_argument, "profile not in batch");
    };

    std::vector<std::optional<RankingEvaluation>> results(jobs.size());
    std::vector<std::string> failures(jobs.size());
    detail::parallel_for(jobs.size(), threads, [&](std::size_t i) {
        const auto& [asin, user] = jobs[i];
        try {
            const auto& index = store.at(*asin);
            const auto scores = score_documents(index, query_of(user), config, &store);
            results[i] = evaluate_scores(index, scores, user->user_id);
        } catch (const Error& e) {
            failures[i] = e.what();
        }
    });

    BatchReport report;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        if (results[i])
            report.rows.push_back(std::move(*results[i]));
        else
            report.errors.push_back({*jobs[i].first, jobs[i].second->user_id, failures[i]});
    }
    if (!report.rows.empty()) {
        std::vector<double> values;
        values.reserve(report.rows.size());
        double sum = 0;
        for (const auto& row : report.rows) {
            values.push_back(row.percent_increase);
            sum += row.percent_increase;
        }
        report.mean_percent_increase = sum / static_cast<double>(values.size());
        std::sort(values.begin(), values.end());
        const auto mid = values.size() / 2;
        report.median_percent_increase =
            values.size() % 2 ? values[mid] : (values[mid - 1] + values[mid]) / 2.0;
    }
    return report;
}

namespace {

std::string csv_field(const std::string& v)
{
    if (v.find_first_of(",\"\n\r") == std::string::npos)
        return v;
    std::string out = "\"";
    for (char c : v) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + '"';
}

}  // namespace

std::string report_csv(const BatchReport& report, const std::string& config_hash)
{
    std::ostringstream out;
    out << std::setprecision(17);
    if (!config_hash.empty())
        out << "# config_hash=" << config_hash << '\n';
    out << "asin,user_id,n,rss_default,rss_personalized,percent_increase\n";
    for (const auto& row : report.rows)
        out << csv_field(row.asin) << ',' << csv_field(row.user_id) << ',' << row.n << ',' << row.rss_default << ','
            << row.rss_personalized << ',' << row.percent_increase << '\n';
    return out.str();
}

std::string report_summary_json(const BatchReport& report, const std::string& config_hash)
{
    nlohmann::ordered_json root;
    root["mean"] = report.mean_percent_increase ? nlohmann::ordered_json(*report.mean_percent_increase)
                                                : nlohmann::ordered_json(nullptr);
    root["median"] = report.median_percent_increase
                         ? nlohmann::ordered_json(*report.median_percent_increase)
                         : nlohmann::ordered_json(nullptr);
    root["count"] = report.count();
    root["errors"] = report.errors.size();
    if (!config_hash.empty())
        root["config_hash"] = config_hash;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& e : report.errors)
        rows.push_back({{"asin", e.asin}, {"user_id", e.user_id}, {"message", e.message}});
    root["error_rows"] = std::move(rows);
    return root.dump(2) + "\n";
}

}  // namespace rtfm
