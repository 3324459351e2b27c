#include "rtfm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <nlohmann/json.hpp>

#include "rtfm/error.hpp"

namespace rtfm {

namespace {

double quantile(const std::vector<double>& sorted, double q)
{
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = static_cast<std::size_t>(std::ceil(pos));
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

}  // namespace

Summary summarize(std::span<const double> values)
{
    if (values.empty())
        throw Error(ErrorCode::domain, "cannot summarize an empty sample");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    Summary s;
    const auto n = static_cast<double>(sorted.size());
    double sum = 0;
    for (double v : sorted)
        sum += v;
    s.mean = sum / n;
    if (sorted.size() > 1) {
        double ss = 0;
        for (double v : sorted)
            ss += (v - s.mean) * (v - s.mean);
        s.std = std::sqrt(ss / (n - 1));
    }
    s.min = sorted.front();
    s.q25 = quantile(sorted, 0.25);
    s.median = quantile(sorted, 0.5);
    s.q75 = quantile(sorted, 0.75);
    s.max = sorted.back();
    return s;
}

std::size_t utf8_length(std::string_view text)
{
    std::size_t n = 0;
    for (unsigned char c : text)
        if ((c & 0xC0) != 0x80)
            ++n;
    return n;
}

DatasetStats compute_stats(const ReviewCorpus& corpus)
{
    if (corpus.empty())
        throw Error(ErrorCode::domain, "cannot compute statistics of an empty corpus");

    DatasetStats stats;
    stats.n_reviews = corpus.size();
    stats.n_users = corpus.by_user().size();
    stats.n_products = corpus.by_product().size();

    std::vector<double> per_user;
    per_user.reserve(stats.n_users);
    for (const auto& [user, positions] : corpus.by_user())
        per_user.push_back(static_cast<double>(positions.size()));
    std::vector<double> per_product;
    per_product.reserve(stats.n_products);
    for (const auto& [asin, positions] : corpus.by_product())
        per_product.push_back(static_cast<double>(positions.size()));

    std::vector<double> ratings;
    std::vector<double> lengths;
    ratings.reserve(corpus.size());
    lengths.reserve(corpus.size());
    for (const auto& r : corpus.reviews()) {
        ratings.push_back(r.overall);
        lengths.push_back(static_cast<double>(utf8_length(r.review_text)));
    }

    stats.reviews_per_user = summarize(per_user);
    stats.reviews_per_product = summarize(per_product);
    stats.rating = summarize(ratings);
    stats.review_length = summarize(lengths);
    return stats;
}

std::string stats_to_json(const DatasetStats& stats, const std::string& config_hash)
{
    auto summary = [](const Summary& s) {
        return nlohmann::ordered_json{{"mean", s.mean},     {"std", s.std}, {"min", s.min},
                                      {"q25", s.q25},       {"median", s.median},
                                      {"q75", s.q75},       {"max", s.max}};
    };
    nlohmann::ordered_json root;
    root["n_reviews"] = stats.n_reviews;
    root["n_users"] = stats.n_users;
    root["n_products"] = stats.n_products;
    root["reviews_per_user"] = summary(stats.reviews_per_user);
    root["reviews_per_product"] = summary(stats.reviews_per_product);
    root["rating"] = summary(stats.rating);
    root["review_length"] = summary(stats.review_length);
    if (!config_hash.empty())
        root["config_hash"] = config_hash;
    return root.dump(2) + "\n";
}

}  // namespace rtfm
