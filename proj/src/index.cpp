#include "rtfm/index.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <optional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hash.hpp"
#include "parallel.hpp"
#include "rtfm/error.hpp"

namespace rtfm {

TermFreq TermFreq::count(const Terms& terms)
{
    std::vector<Entry> entries;
    entries.reserve(terms.size());
    for (const auto& t : terms)
        entries.emplace_back(t, 1);
    return from_entries(std::move(entries));
}

TermFreq TermFreq::from_entries(std::vector<Entry> entries)
{
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.first < b.first; });
    TermFreq tf;
    tf.entries_.reserve(entries.size());
    for (auto& e : entries) {
        if (e.second == 0)
            continue;
        if (!tf.entries_.empty() && tf.entries_.back().first == e.first)
            tf.entries_.back().second += e.second;
        else
            tf.entries_.push_back(std::move(e));
    }
    tf.entries_.shrink_to_fit();
    return tf;
}

std::uint64_t TermFreq::get(std::string_view term) const
{
    auto it = std::lower_bound(entries_.begin(), entries_.end(), term,
                               [](const Entry& e, std::string_view t) { return e.first < t; });
    return (it != entries_.end() && it->first == term) ? it->second : 0;
}

std::uint64_t TermFreq::total() const
{
    std::uint64_t sum = 0;
    for (const auto& e : entries_)
        sum += e.second;
    return sum;
}

ProductIndex::ProductIndex(std::string asin, std::vector<ReviewDoc> docs)
    : asin_(std::move(asin)), docs_(std::move(docs))
{
    if (docs_.empty())
        throw Error(ErrorCode::invalid_argument, "product index needs at least one review: " + asin_);

    std::vector<TermFreq::Entry> df;
    std::vector<TermFreq::Entry> totals;
    for (const auto& doc : docs_) {
        if (doc.term_freq.total() != doc.doc_len)
            throw Error(ErrorCode::invalid_argument,
                        "doc_len does not match term counts in product " + asin_);
        total_len_ += doc.doc_len;
        for (const auto& [term, count] : doc.term_freq) {
            df.emplace_back(term, 1);
            totals.emplace_back(term, count);
        }
    }
    avg_doc_len_ = static_cast<double>(total_len_) / static_cast<double>(docs_.size());
    doc_freq_ = TermFreq::from_entries(std::move(df));
    term_totals_ = TermFreq::from_entries(std::move(totals));
}

Terms review_terms(const Review& review, const TextPipelineConfig& config)
{
    Terms terms = run_pipeline(review.review_text, config);
    if (config.include_summary) {
        Terms extra = run_pipeline(review.summary, config);
        terms.insert(terms.end(), std::make_move_iterator(extra.begin()),
                     std::make_move_iterator(extra.end()));
    }
    return terms;
}

namespace {

ProductIndex build_from_positions(const ReviewCorpus& corpus, const std::string& asin,
                                  const std::vector<std::size_t>& positions,
                                  const TextPipelineConfig& config)
{
    std::vector<ReviewDoc> docs;
    docs.reserve(positions.size());
    for (std::size_t pos : positions) {
        const Review& r = corpus[pos];
        ReviewDoc doc;
        doc.review_position = pos;
        doc.term_freq = TermFreq::count(review_terms(r, config));
        doc.doc_len = doc.term_freq.total();
        doc.helpful_yes = r.helpful_yes;
        doc.unix_review_time = r.unix_review_time;
        doc.overall = r.overall;
        docs.push_back(std::move(doc));
    }
    return ProductIndex(asin, std::move(docs));
}

}  // namespace

ProductIndex build_product_index(const ReviewCorpus& corpus, const std::string& asin,
                                 const TextPipelineConfig& config)
{
    const auto& positions = corpus.product_reviews(asin);
    if (positions.empty())
        throw Error(ErrorCode::not_found, "unknown product: " + asin);
    return build_from_positions(corpus, asin, positions, config);
}

IndexStore::IndexStore(std::vector<ProductIndex> products, std::string config_hash)
    : config_hash_(std::move(config_hash))
{
    std::vector<TermFreq::Entry> gdf;
    std::uint64_t total_len = 0;
    for (auto& p : products) {
        total_docs_ += p.n_docs();
        total_len += p.total_doc_len();
        for (const auto& e : p.doc_freq())
            gdf.push_back(e);
        std::string key = p.asin();
        if (!products_.emplace(std::move(key), std::move(p)).second)
            throw Error(ErrorCode::invalid_argument, "duplicate product in store");
    }
    if (total_docs_ > 0)
        total_avg_doc_len_ = static_cast<double>(total_len) / static_cast<double>(total_docs_);
    global_doc_freq_ = TermFreq::from_entries(std::move(gdf));
}

const ProductIndex* IndexStore::find(const std::string& asin) const
{
    auto it = products_.find(asin);
    return it == products_.end() ? nullptr : &it->second;
}

const ProductIndex& IndexStore::at(const std::string& asin) const
{
    if (const auto* p = find(asin))
        return *p;
    throw Error(ErrorCode::not_found, "unknown product: " + asin);
}

std::vector<std::string> IndexStore::asins() const
{
    std::vector<std::string> out;
    out.reserve(products_.size());
    for (const auto& [asin, index] : products_)
        out.push_back(asin);
    return out;
}

IndexStore build_all_indexes(const ReviewCorpus& corpus, const TextPipelineConfig& config,
                             std::string config_hash, unsigned threads)
{
    std::vector<const std::pair<const std::string, std::vector<std::size_t>>*> groups;
    groups.reserve(corpus.by_product().size());
    for (const auto& g : corpus.by_product())
        groups.push_back(&g);

    std::vector<std::optional<ProductIndex>> built(groups.size());
    detail::parallel_for(groups.size(), threads, [&](std::size_t i) {
        built[i].emplace(build_from_positions(corpus, groups[i]->first, groups[i]->second, config));
    });

    std::vector<ProductIndex> products;
    products.reserve(built.size());
    for (auto& p : built)
        products.push_back(std::move(*p));
    return IndexStore(std::move(products), std::move(config_hash));
}

// Binary layout (all integers little-endian):
//   "RTFMIDX1" | u32 version | str config_hash | u64 product_count | product* | u64 fnv1a
//   product: str asin | u64 n_docs | f64 avg_doc_len | u64 n_df | (str term, u64 df)* | doc*
//   doc:     u64 review_position | u64 doc_len | i64 helpful_yes | i64 unix_review_time
//            | u8 overall | u64 n_terms | (str term, u64 count)*
//   str:     u32 byte length | bytes
namespace {

constexpr std::string_view kMagic = "RTFMIDX1";
constexpr std::uint32_t kVersion = 1;

class Writer {
public:
    void raw(std::string_view s) { out_.append(s); }

    template <typename T>
    void integer(T v)
    {
        auto u = static_cast<std::make_unsigned_t<T>>(v);
        for (std::size_t i = 0; i < sizeof(T); ++i) {
            out_.push_back(static_cast<char>(u & 0xFF));
            u = static_cast<decltype(u)>(u >> 8);
        }
    }

    void real(double d) { integer(std::bit_cast<std::uint64_t>(d)); }

    void str(std::string_view s)
    {
        integer(static_cast<std::uint32_t>(s.size()));
        raw(s);
    }

    std::string take() && { return std::move(out_); }
    const std::string& bytes() const { return out_; }

private:
    std::string out_;
};

class Reader {
public:
    explicit Reader(std::string_view in) : in_(in) {}

    std::string_view raw(std::size_t n)
    {
        if (in_.size() - pos_ < n)
            throw Error(ErrorCode::format, "index file is truncated");
        auto s = in_.substr(pos_, n);
        pos_ += n;
        return s;
    }

    template <typename T>
    T integer()
    {
        auto bytes = raw(sizeof(T));
        std::make_unsigned_t<T> u = 0;
        for (std::size_t i = sizeof(T); i-- > 0;)
            u = static_cast<decltype(u)>((u << 8) | static_cast<unsigned char>(bytes[i]));
        return static_cast<T>(u);
    }

    double real() { return std::bit_cast<double>(integer<std::uint64_t>()); }

    std::string str() { return std::string(raw(integer<std::uint32_t>())); }

    // Guards element counts against the bytes actually left.
    std::uint64_t count(std::size_t min_element_size)
    {
        const auto n = integer<std::uint64_t>();
        if (n > (in_.size() - pos_) / min_element_size)
            throw Error(ErrorCode::format, "index file is truncated");
        return n;
    }

    std::size_t position() const { return pos_; }
    std::size_t remaining() const { return in_.size() - pos_; }

private:
    std::string_view in_;
    std::size_t pos_ = 0;
};

void write_terms(Writer& w, const TermFreq& tf)
{
    w.integer<std::uint64_t>(tf.size());
    for (const auto& [term, count] : tf) {
        w.str(term);
        w.integer<std::uint64_t>(count);
    }
}

TermFreq read_terms(Reader& r)
{
    const auto n = r.count(12);
    std::vector<TermFreq::Entry> entries;
    entries.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        std::string term = r.str();
        const auto count = r.integer<std::uint64_t>();
        if (count == 0 || (!entries.empty() && entries.back().first >= term))
            throw Error(ErrorCode::format, "term table is not a sorted positive mapping");
        entries.emplace_back(std::move(term), count);
    }
    return TermFreq::from_entries(std::move(entries));
}

}  // namespace

std::string encode_store(const IndexStore& store)
{
    Writer w;
    w.raw(kMagic);
    w.integer(kVersion);
    w.str(store.config_hash());
    w.integer<std::uint64_t>(store.size());
    for (const auto& [asin, index] : store.products()) {
        w.str(asin);
        w.integer<std::uint64_t>(index.n_docs());
        w.real(index.avg_doc_len());
        write_terms(w, index.doc_freq());
        for (const auto& doc : index.docs()) {
            w.integer<std::uint64_t>(doc.review_position);
            w.integer<std::uint64_t>(doc.doc_len);
            w.integer<std::int64_t>(doc.helpful_yes);
            w.integer<std::int64_t>(doc.unix_review_time);
            w.integer<std::uint8_t>(static_cast<std::uint8_t>(doc.overall));
            write_terms(w, doc.term_freq);
        }
    }
    w.integer(detail::fnv1a(w.bytes()));
    return std::move(w).take();
}

IndexStore decode_store(std::string_view bytes)
{
    Reader r(bytes);
    if (bytes.size() < kMagic.size() || r.raw(kMagic.size()) != kMagic)
        throw Error(ErrorCode::format, "not an index file (bad magic)");
    const auto version = r.integer<std::uint32_t>();
    if (version != kVersion)
        throw Error(ErrorCode::format,
                    "unsupported index version " + std::to_string(version) + " (expected " +
                        std::to_string(kVersion) + ")");
    std::string config_hash = r.str();

    const auto n_products = r.count(4);
    std::vector<ProductIndex> products;
    products.reserve(n_products);
    for (std::uint64_t p = 0; p < n_products; ++p) {
        std::string asin = r.str();
        const auto n_docs = r.count(41);
        const double avg = r.real();
        TermFreq df = read_terms(r);
        std::vector<ReviewDoc> docs;
        docs.reserve(n_docs);
        for (std::uint64_t d = 0; d < n_docs; ++d) {
            ReviewDoc doc;
            doc.review_position = r.integer<std::uint64_t>();
            doc.doc_len = r.integer<std::uint64_t>();
            doc.helpful_yes = r.integer<std::int64_t>();
            doc.unix_review_time = r.integer<std::int64_t>();
            doc.overall = r.integer<std::uint8_t>();
            doc.term_freq = read_terms(r);
            docs.push_back(std::move(doc));
        }
        try {
            ProductIndex index(std::move(asin), std::move(docs));
            if (index.avg_doc_len() != avg || index.doc_freq() != df)
                throw Error(ErrorCode::format, "stored statistics disagree with documents");
            products.push_back(std::move(index));
        } catch (const Error& e) {
            if (e.code() == ErrorCode::format)
                throw;
            throw Error(ErrorCode::format, std::string("corrupt product record: ") + e.what());
        }
    }

    const std::size_t body_end = r.position();
    const auto checksum = r.integer<std::uint64_t>();
    if (checksum != detail::fnv1a(bytes.substr(0, body_end)))
        throw Error(ErrorCode::format, "index checksum mismatch");
    if (r.remaining() != 0)
        throw Error(ErrorCode::format, "trailing bytes after index data");
    return IndexStore(std::move(products), std::move(config_hash));
}

void persist_index(const IndexStore& store, const std::string& path)
{
    const std::string bytes = encode_store(store);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(ErrorCode::io, "cannot write index: " + path);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw Error(ErrorCode::io, "write failure: " + path);
}

IndexStore load_index(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::io, "cannot read index: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return decode_store(buf.str());
}

std::string store_to_json(const IndexStore& store, int indent)
{
    using nlohmann::ordered_json;
    auto terms_json = [](const TermFreq& tf) {
        ordered_json obj = ordered_json::object();
        for (const auto& [term, count] : tf)
            obj[term] = count;
        return obj;
    };

    ordered_json root;
    root["config_hash"] = store.config_hash();
    root["total_docs"] = store.total_docs();
    ordered_json products = ordered_json::array();
    for (const auto& [asin, index] : store.products()) {
        ordered_json p;
        p["asin"] = asin;
        p["n_docs"] = index.n_docs();
        p["avg_doc_len"] = index.avg_doc_len();
        p["doc_freq"] = terms_json(index.doc_freq());
        ordered_json docs = ordered_json::array();
        for (const auto& doc : index.docs()) {
            ordered_json d;
            d["review_position"] = doc.review_position;
            d["doc_len"] = doc.doc_len;
            d["helpful_yes"] = doc.helpful_yes;
            d["unix_review_time"] = doc.unix_review_time;
            d["overall"] = doc.overall;
            d["term_freq"] = terms_json(doc.term_freq);
            docs.push_back(std::move(d));
        }
        p["docs"] = std::move(docs);
        products.push_back(std::move(p));
    }
    root["products"] = std::move(products);
    return root.dump(indent);
}

}  // namespace rtfm
