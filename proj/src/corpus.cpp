#include "rtfm/corpus.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "rtfm/error.hpp"

namespace rtfm {

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(std::size_t line, const std::string& what)
{
    throw RecordError(ErrorCode::schema, what, line);
}

const json* find(const json& obj, const char* key)
{
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

const json& require(const json& obj, const char* key, std::size_t line)
{
    const json* v = find(obj, key);
    if (!v || v->is_null())
        schema_error(line, std::string("missing required field '") + key + "'");
    return *v;
}

std::string string_field(const json& obj, const char* key, std::size_t line)
{
    const json* v = find(obj, key);
    if (!v || v->is_null())
        return {};
    if (!v->is_string())
        schema_error(line, std::string("field '") + key + "' must be a string");
    return v->get<std::string>();
}

std::int64_t integer_value(const json& v, const char* key, std::size_t line)
{
    if (v.is_number_integer())
        return v.get<std::int64_t>();
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (std::isfinite(d) && std::floor(d) == d && std::fabs(d) < 9.0e15)
            return static_cast<std::int64_t>(d);
    }
    schema_error(line, std::string("field '") + key + "' must be an integer");
}

const std::vector<std::size_t>& group_or_empty(
    const std::map<std::string, std::vector<std::size_t>>& groups, const std::string& key)
{
    static const std::vector<std::size_t> empty;
    auto it = groups.find(key);
    return it == groups.end() ? empty : it->second;
}

}  // namespace

Review parse_review_record(std::string_view line, std::size_t line_number)
{
    json obj = json::parse(line.begin(), line.end(), nullptr, false);
    if (obj.is_discarded())
        throw RecordError(ErrorCode::parse, "malformed JSON record", line_number);
    if (!obj.is_object())
        throw RecordError(ErrorCode::parse, "record is not a JSON object", line_number);

    Review r;
    const json& reviewer = require(obj, "reviewerID", line_number);
    const json& asin = require(obj, "asin", line_number);
    if (!reviewer.is_string() || reviewer.get_ref<const std::string&>().empty())
        schema_error(line_number, "field 'reviewerID' must be a non-empty string");
    if (!asin.is_string() || asin.get_ref<const std::string&>().empty())
        schema_error(line_number, "field 'asin' must be a non-empty string");
    r.reviewer_id = reviewer.get<std::string>();
    r.asin = asin.get<std::string>();

    if (const json* name = find(obj, "reviewerName"); name && !name->is_null()) {
        if (!name->is_string())
            schema_error(line_number, "field 'reviewerName' must be a string");
        r.reviewer_name = name->get<std::string>();
    }

    if (const json* helpful = find(obj, "helpful"); helpful && !helpful->is_null()) {
        if (!helpful->is_array() || helpful->size() != 2)
            schema_error(line_number, "field 'helpful' must be a pair [yes, total]");
        r.helpful_yes = integer_value((*helpful)[0], "helpful", line_number);
        r.helpful_total = integer_value((*helpful)[1], "helpful", line_number);
        if (r.helpful_yes < 0 || r.helpful_total < 0 || r.helpful_yes > r.helpful_total)
            schema_error(line_number, "field 'helpful' must satisfy 0 <= yes <= total");
    }

    r.review_text = string_field(obj, "reviewText", line_number);
    r.summary = string_field(obj, "summary", line_number);
    r.review_time_raw = string_field(obj, "reviewTime", line_number);

    const auto overall = integer_value(require(obj, "overall", line_number), "overall", line_number);
    if (overall < 1 || overall > 5)
        schema_error(line_number, "field 'overall' must be in [1, 5]");
    r.overall = static_cast<int>(overall);

    r.unix_review_time =
        integer_value(require(obj, "unixReviewTime", line_number), "unixReviewTime", line_number);
    return r;
}

std::string serialize_review(const Review& review)
{
    json obj;
    obj["reviewerID"] = review.reviewer_id;
    obj["asin"] = review.asin;
    if (review.reviewer_name)
        obj["reviewerName"] = *review.reviewer_name;
    obj["helpful"] = json::array({review.helpful_yes, review.helpful_total});
    obj["reviewText"] = review.review_text;
    obj["overall"] = static_cast<double>(review.overall);
    obj["summary"] = review.summary;
    obj["unixReviewTime"] = review.unix_review_time;
    obj["reviewTime"] = review.review_time_raw;
    return obj.dump();
}

ReviewCorpus::ReviewCorpus(std::vector<Review> reviews) : reviews_(std::move(reviews))
{
    for (std::size_t i = 0; i < reviews_.size(); ++i) {
        by_product_[reviews_[i].asin].push_back(i);
        by_user_[reviews_[i].reviewer_id].push_back(i);
    }
}

const std::vector<std::size_t>& ReviewCorpus::product_reviews(const std::string& asin) const
{
    return group_or_empty(by_product_, asin);
}

const std::vector<std::size_t>& ReviewCorpus::user_reviews(const std::string& user_id) const
{
    return group_or_empty(by_user_, user_id);
}

LoadResult load_corpus(const std::string& path, const LoadOptions& options)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::io, "cannot read dataset: " + path);

    LoadResult result;
    std::vector<Review> reviews;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos)
            continue;
        try {
            reviews.push_back(parse_review_record(line, line_number));
        } catch (const RecordError& e) {
            if (options.strict)
                throw;
            ++result.skipped;
            if (result.skip_messages.size() < 100)
                result.skip_messages.emplace_back(e.what());
        }
    }
    if (in.bad())
        throw Error(ErrorCode::io, "read failure: " + path);
    result.corpus = ReviewCorpus(std::move(reviews));
    return result;
}

}  // namespace rtfm
