#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "rtfm/index.hpp"
#include "rtfm/profile.hpp"

namespace fixtures {

inline std::string data_path(const std::string& name)
{
    return std::string(RTFM_TEST_DATA_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct DocSpec {
    oracle::Doc terms;
    std::int64_t helpful = 0;
    std::int64_t time = 0;
    int overall = 5;
};

/// Index over already-analyzed term lists; review positions are 0..n-1.
inline rtfm::ProductIndex make_index(const std::string& asin, const std::vector<DocSpec>& specs)
{
    std::vector<rtfm::ReviewDoc> docs;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        rtfm::ReviewDoc d;
        d.review_position = i;
        d.term_freq = rtfm::TermFreq::count(specs[i].terms);
        d.doc_len = specs[i].terms.size();
        d.helpful_yes = specs[i].helpful;
        d.unix_review_time = specs[i].time;
        d.overall = specs[i].overall;
        docs.push_back(std::move(d));
    }
    return rtfm::ProductIndex(asin, std::move(docs));
}

inline rtfm::ProductIndex make_index(const std::string& asin, const std::vector<oracle::Doc>& terms)
{
    std::vector<DocSpec> specs;
    for (const auto& t : terms)
        specs.push_back({t});
    return make_index(asin, specs);
}

/// Store of 1..max_products products with random docs, helpful votes, times
/// and ratings. Positions are globally unique.
inline rtfm::IndexStore random_store(std::mt19937_64& rng, std::size_t max_products = 6,
                                     std::size_t max_docs = 8, std::size_t vocab = 30)
{
    std::vector<rtfm::ProductIndex> products;
    std::size_t position = 0;
    const auto n_products = 1 + rng() % max_products;
    for (std::uint64_t p = 0; p < n_products; ++p) {
        std::vector<rtfm::ReviewDoc> docs;
        const auto n_docs = 1 + rng() % max_docs;
        for (std::uint64_t i = 0; i < n_docs; ++i) {
            const auto terms = oracle::random_doc(rng, 12, vocab);
            rtfm::ReviewDoc d;
            d.review_position = position++;
            d.term_freq = rtfm::TermFreq::count(terms);
            d.doc_len = terms.size();
            d.helpful_yes = static_cast<std::int64_t>(rng() % 50);
            d.unix_review_time = static_cast<std::int64_t>(rng() % 2000000000) - 1000;
            d.overall = 1 + static_cast<int>(rng() % 5);
            docs.push_back(std::move(d));
        }
        products.emplace_back("P" + std::to_string(p) + "_" + std::to_string(rng() % 1000), std::move(docs));
    }
    return rtfm::IndexStore(std::move(products), "h" + std::to_string(rng() % 100000));
}

/// Synthetic products plus a random event sequence, in both the library's and
/// the oracle's representation.
struct SyntheticActivity {
    std::vector<std::vector<oracle::Doc>> product_docs;
    rtfm::IndexStore store;
    std::vector<oracle::Event> oracle_events;
    std::vector<rtfm::ActivityEvent> events;
};

inline std::string product_asin(std::size_t i) { return "SP" + std::to_string(i); }

inline SyntheticActivity random_activity(std::mt19937_64& rng, std::size_t n_products, std::size_t n_events,
                                         std::size_t vocab = 25)
{
    SyntheticActivity a;
    std::vector<rtfm::ProductIndex> products;
    for (std::size_t p = 0; p < n_products; ++p) {
        std::vector<oracle::Doc> docs(1 + rng() % 6);
        for (auto& d : docs)
            d = oracle::random_doc(rng, 10, vocab);
        products.push_back(make_index(product_asin(p), docs));
        a.product_docs.push_back(std::move(docs));
    }
    a.store = rtfm::IndexStore(std::move(products));

    std::uniform_real_distribution<double> dwell(0.0, 6.0);
    for (std::size_t i = 0; i < n_events; ++i) {
        oracle::Event e{static_cast<int>(rng() % 3), 0.0, static_cast<std::size_t>(rng() % n_products), {}};
        rtfm::ActivityEvent ev{"user", product_asin(e.product), rtfm::Shopped{}};
        if (e.kind == 0) {
            // Land exactly on the schedule's anchors now and then.
            const double anchors[] = {0.0, 1.0, 2.5, 5.0};
            e.dwell = rng() % 5 == 0 ? anchors[rng() % 4] : dwell(rng);
            ev.kind = rtfm::Browsed{e.dwell};
        } else if (e.kind == 2) {
            e.own_terms = oracle::random_doc(rng, 10, vocab);
            ev.kind = rtfm::Reviewed{e.own_terms};
        }
        a.oracle_events.push_back(std::move(e));
        a.events.push_back(std::move(ev));
    }
    return a;
}

}  // namespace fixtures
