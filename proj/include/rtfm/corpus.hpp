#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rtfm {

/// One customer review, field-for-field with the 5-core JSON records.
struct Review {
    std::string reviewer_id;
    std::string asin;
    std::optional<std::string> reviewer_name;
    std::int64_t helpful_yes = 0;
    std::int64_t helpful_total = 0;
    std::string review_text;
    int overall = 0;
    std::string summary;
    std::int64_t unix_review_time = 0;
    std::string review_time_raw;

    bool operator==(const Review&) const = default;
};

/// Parses one JSON-lines record. `line_number` only decorates error messages.
/// Throws RecordError (parse or schema) on malformed input.
Review parse_review_record(std::string_view line, std::size_t line_number = 0);

/// Single-line JSON using the dataset's field names; parses back to an equal Review.
std::string serialize_review(const Review& review);

/// Reviews in input order plus position groupings by product and by user.
/// Immutable once built.
class ReviewCorpus {
public:
    ReviewCorpus() = default;
    explicit ReviewCorpus(std::vector<Review> reviews);

    const std::vector<Review>& reviews() const noexcept { return reviews_; }
    std::size_t size() const noexcept { return reviews_.size(); }
    bool empty() const noexcept { return reviews_.empty(); }
    const Review& operator[](std::size_t pos) const { return reviews_.at(pos); }

    /// Positions grouped by asin / reviewer id; keys in ascending order,
    /// positions ascending within each group.
    const std::map<std::string, std::vector<std::size_t>>& by_product() const noexcept
    {
        return by_product_;
    }
    const std::map<std::string, std::vector<std::size_t>>& by_user() const noexcept
    {
        return by_user_;
    }

    /// Empty group if the asin / user is unknown.
    const std::vector<std::size_t>& product_reviews(const std::string& asin) const;
    const std::vector<std::size_t>& user_reviews(const std::string& user_id) const;

private:
    std::vector<Review> reviews_;
    std::map<std::string, std::vector<std::size_t>> by_product_;
    std::map<std::string, std::vector<std::size_t>> by_user_;
};

struct LoadOptions {
    /// Strict: first bad record aborts with its line number. Lenient: bad
    /// records are skipped and counted.
    bool strict = true;
};

struct LoadResult {
    ReviewCorpus corpus;
    std::size_t skipped = 0;
    /// First skip reason per skipped line (lenient mode), capped at 100 entries.
    std::vector<std::string> skip_messages;
};

/// Blank lines are ignored. Throws Error(io) for unreadable paths and
/// RecordError in strict mode.
LoadResult load_corpus(const std::string& path, const LoadOptions& options = {});

}  // namespace rtfm
