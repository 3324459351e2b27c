#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rtfm/corpus.hpp"
#include "rtfm/text.hpp"

namespace rtfm {

/// Term → count mapping stored as a vector sorted by term. Counts are ≥ 1.
class TermFreq {
public:
    using Entry = std::pair<std::string, std::uint64_t>;

    TermFreq() = default;

    /// Counts occurrences in a term sequence.
    static TermFreq count(const Terms& terms);
    /// Takes ownership of entries; sorts them and merges duplicate terms.
    static TermFreq from_entries(std::vector<Entry> entries);

    /// 0 if absent.
    std::uint64_t get(std::string_view term) const;
    bool contains(std::string_view term) const { return get(term) != 0; }
    std::uint64_t total() const;

    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    auto begin() const noexcept { return entries_.begin(); }
    auto end() const noexcept { return entries_.end(); }
    const std::vector<Entry>& entries() const noexcept { return entries_; }

    bool operator==(const TermFreq&) const = default;

private:
    std::vector<Entry> entries_;
};

struct ReviewDoc {
    std::size_t review_position = 0;
    TermFreq term_freq;
    std::uint64_t doc_len = 0;
    std::int64_t helpful_yes = 0;
    std::int64_t unix_review_time = 0;
    int overall = 0;

    bool operator==(const ReviewDoc&) const = default;
};

/// Forward index over one product's reviews. Collection statistics are
/// derived from the documents on construction and cannot drift from them.
class ProductIndex {
public:
    /// Throws Error(invalid_argument) if `docs` is empty or a doc's doc_len
    /// disagrees with its term counts.
    ProductIndex(std::string asin, std::vector<ReviewDoc> docs);

    const std::string& asin() const noexcept { return asin_; }
    const std::vector<ReviewDoc>& docs() const noexcept { return docs_; }
    std::size_t n_docs() const noexcept { return docs_.size(); }
    double avg_doc_len() const noexcept { return avg_doc_len_; }
    std::uint64_t total_doc_len() const noexcept { return total_len_; }
    /// Number of this product's reviews containing each term.
    const TermFreq& doc_freq() const noexcept { return doc_freq_; }
    /// Sum of term frequencies over all of this product's reviews.
    const TermFreq& term_totals() const noexcept { return term_totals_; }

    bool operator==(const ProductIndex& other) const
    {
        return asin_ == other.asin_ && docs_ == other.docs_;
    }

private:
    std::string asin_;
    std::vector<ReviewDoc> docs_;
    std::uint64_t total_len_ = 0;
    double avg_doc_len_ = 0;
    TermFreq doc_freq_;
    TermFreq term_totals_;
};

/// Analyzed text of one review: reviewText, plus summary when configured.
Terms review_terms(const Review& review, const TextPipelineConfig& config);

/// Throws Error(not_found) for an asin absent from the corpus.
ProductIndex build_product_index(const ReviewCorpus& corpus, const std::string& asin,
                                 const TextPipelineConfig& config);

/// All product indexes keyed by asin, with corpus-wide document frequencies for
/// the corpus-scope IDF variant.
class IndexStore {
public:
    IndexStore() = default;
    explicit IndexStore(std::vector<ProductIndex> products, std::string config_hash = {});

    /// Throws Error(not_found).
    const ProductIndex& at(const std::string& asin) const;
    const ProductIndex* find(const std::string& asin) const;
    bool contains(const std::string& asin) const { return find(asin) != nullptr; }

    const std::map<std::string, ProductIndex>& products() const noexcept { return products_; }
    std::size_t size() const noexcept { return products_.size(); }
    std::vector<std::string> asins() const;

    std::size_t total_docs() const noexcept { return total_docs_; }
    double total_avg_doc_len() const noexcept { return total_avg_doc_len_; }
    const TermFreq& global_doc_freq() const noexcept { return global_doc_freq_; }

    /// Hash of the configuration that produced the store; carried through persistence.
    const std::string& config_hash() const noexcept { return config_hash_; }

    bool operator==(const IndexStore& other) const
    {
        return config_hash_ == other.config_hash_ && products_ == other.products_;
    }

private:
    std::map<std::string, ProductIndex> products_;
    std::size_t total_docs_ = 0;
    double total_avg_doc_len_ = 0;
    TermFreq global_doc_freq_;
    std::string config_hash_;
};

/// One index per product. Products are built on up to `threads` workers
/// (0 = hardware concurrency); the result does not depend on the thread count.
IndexStore build_all_indexes(const ReviewCorpus& corpus, const TextPipelineConfig& config,
                             std::string config_hash = {}, unsigned threads = 0);

/// Binary store encoding; see docs/index-format.md.
std::string encode_store(const IndexStore& store);
/// Throws Error(format) on bad magic, unsupported version, truncation,
/// checksum mismatch or inconsistent statistics.
IndexStore decode_store(std::string_view bytes);

void persist_index(const IndexStore& store, const std::string& path);
IndexStore load_index(const std::string& path);

/// Debug export mirroring the in-memory fields.
std::string store_to_json(const IndexStore& store, int indent = 2);

}  // namespace rtfm
