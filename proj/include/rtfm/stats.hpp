#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "rtfm/corpus.hpp"

namespace rtfm {

/// Five-number summary with mean and sample standard deviation. Quantiles use
/// linear interpolation between order statistics.
struct Summary {
    double mean = 0;
    double std = 0;
    double min = 0;
    double q25 = 0;
    double median = 0;
    double q75 = 0;
    double max = 0;
};

/// Throws Error(domain) on an empty sample.
Summary summarize(std::span<const double> values);

struct DatasetStats {
    std::size_t n_reviews = 0;
    std::size_t n_users = 0;
    std::size_t n_products = 0;
    Summary reviews_per_user;
    Summary reviews_per_product;
    Summary rating;
    /// Review text length in Unicode code points.
    Summary review_length;
};

/// Throws Error(domain) on an empty corpus.
DatasetStats compute_stats(const ReviewCorpus& corpus);

std::size_t utf8_length(std::string_view text);

/// {n_reviews, n_users, n_products, reviews_per_user:{mean,std,min,q25,median,q75,max}, ...}
std::string stats_to_json(const DatasetStats& stats, const std::string& config_hash = {});

}  // namespace rtfm
