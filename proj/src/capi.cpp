#include "rtfm/rtfm.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rtfm/config.hpp"
#include "rtfm/corpus.hpp"
#include "rtfm/error.hpp"
#include "rtfm/eval.hpp"
#include "rtfm/index.hpp"
#include "rtfm/profile.hpp"
#include "rtfm/ranker.hpp"
#include "rtfm/recommend.hpp"
#include "rtfm/stats.hpp"
#include "rtfm/version.hpp"

struct rtfm_config {
    rtfm::RunConfig config;
};

struct rtfm_corpus {
    rtfm::ReviewCorpus corpus;
    std::vector<std::string> users;

    explicit rtfm_corpus(rtfm::ReviewCorpus c) : corpus(std::move(c))
    {
        users.reserve(corpus.by_user().size());
        for (const auto& [user, positions] : corpus.by_user())
            users.push_back(user);
    }
};

struct rtfm_store {
    rtfm::IndexStore store;
    std::vector<std::string> asins;

    explicit rtfm_store(rtfm::IndexStore s) : store(std::move(s)), asins(store.asins()) {}
};

struct rtfm_profile {
    rtfm::UserProfile profile;
};

namespace {

thread_local std::string last_error;

rtfm_status to_status(rtfm::ErrorCode code)
{
    switch (code) {
    case rtfm::ErrorCode::invalid_argument:
        return RTFM_E_INVALID_ARGUMENT;
    case rtfm::ErrorCode::io:
        return RTFM_E_IO;
    case rtfm::ErrorCode::parse:
        return RTFM_E_PARSE;
    case rtfm::ErrorCode::schema:
        return RTFM_E_SCHEMA;
    case rtfm::ErrorCode::not_found:
        return RTFM_E_NOT_FOUND;
    case rtfm::ErrorCode::format:
        return RTFM_E_FORMAT;
    case rtfm::ErrorCode::domain:
        return RTFM_E_DOMAIN;
    }
    return RTFM_E_INTERNAL;
}

template <typename Fn>
rtfm_status guarded(Fn&& fn) noexcept
{
    try {
        last_error.clear();
        fn();
        return RTFM_OK;
    } catch (const rtfm::Error& e) {
        last_error = e.what();
        return to_status(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
    } catch (const std::exception& e) {
        last_error = e.what();
    } catch (...) {
        last_error = "unknown failure";
    }
    return RTFM_E_INTERNAL;
}

void require(bool ok, const char* what)
{
    if (!ok)
        throw rtfm::Error(rtfm::ErrorCode::invalid_argument, what);
}

char* copy_out(const std::string& s)
{
    auto* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out)
        throw std::bad_alloc();
    std::memcpy(out, s.data(), s.size() + 1);
    return out;
}

}  // namespace

extern "C" {

const char* rtfm_version(void) { return RTFM_VERSION_STRING; }

const char* rtfm_status_string(rtfm_status status)
{
    switch (status) {
    case RTFM_OK:
        return "ok";
    case RTFM_E_INVALID_ARGUMENT:
        return rtfm::to_string(rtfm::ErrorCode::invalid_argument);
    case RTFM_E_IO:
        return rtfm::to_string(rtfm::ErrorCode::io);
    case RTFM_E_PARSE:
        return rtfm::to_string(rtfm::ErrorCode::parse);
    case RTFM_E_SCHEMA:
        return rtfm::to_string(rtfm::ErrorCode::schema);
    case RTFM_E_NOT_FOUND:
        return rtfm::to_string(rtfm::ErrorCode::not_found);
    case RTFM_E_FORMAT:
        return rtfm::to_string(rtfm::ErrorCode::format);
    case RTFM_E_DOMAIN:
        return rtfm::to_string(rtfm::ErrorCode::domain);
    case RTFM_E_INTERNAL:
        return "internal error";
    }
    return "unknown status";
}

const char* rtfm_last_error(void) { return last_error.c_str(); }

void rtfm_string_free(char* s) { std::free(s); }

// ---- config

rtfm_status rtfm_config_new(rtfm_config** out)
{
    return guarded([&] {
        require(out, "out is null");
        *out = new rtfm_config{};
    });
}

rtfm_status rtfm_config_load(const char* path, rtfm_config** out)
{
    return guarded([&] {
        require(path && out, "null argument");
        *out = new rtfm_config{rtfm::load_run_config(path)};
    });
}

rtfm_status rtfm_config_parse(const char* ini_text, rtfm_config** out)
{
    return guarded([&] {
        require(ini_text && out, "null argument");
        *out = new rtfm_config{rtfm::parse_run_config(ini_text)};
    });
}

void rtfm_config_free(rtfm_config* config) { delete config; }

rtfm_status rtfm_config_set(rtfm_config* config, const char* key, const char* value)
{
    return guarded([&] {
        require(config && key && value, "null argument");
        config->config.set(key, value);
    });
}

rtfm_status rtfm_config_get(const rtfm_config* config, const char* key, char** value)
{
    return guarded([&] {
        require(config && key && value, "null argument");
        *value = copy_out(config->config.get(key));
    });
}

rtfm_status rtfm_config_validate(const rtfm_config* config)
{
    return guarded([&] {
        require(config, "config is null");
        config->config.validate();
    });
}

rtfm_status rtfm_config_to_ini(const rtfm_config* config, char** ini_text)
{
    return guarded([&] {
        require(config && ini_text, "null argument");
        *ini_text = copy_out(config->config.to_ini());
    });
}

rtfm_status rtfm_config_hash(const rtfm_config* config, char** hash)
{
    return guarded([&] {
        require(config && hash, "null argument");
        *hash = copy_out(config->config.hash());
    });
}

// ---- corpus

rtfm_status rtfm_corpus_load(const char* path, const rtfm_config* config, rtfm_corpus** out,
                             size_t* skipped)
{
    return guarded([&] {
        require(path && config && out, "null argument");
        auto result = rtfm::load_corpus(path, {config->config.strict});
        if (skipped)
            *skipped = result.skipped;
        *out = new rtfm_corpus(std::move(result.corpus));
    });
}

void rtfm_corpus_free(rtfm_corpus* corpus) { delete corpus; }

size_t rtfm_corpus_size(const rtfm_corpus* corpus) { return corpus ? corpus->corpus.size() : 0; }

size_t rtfm_corpus_user_count(const rtfm_corpus* corpus) { return corpus ? corpus->users.size() : 0; }

rtfm_status rtfm_corpus_user_id(const rtfm_corpus* corpus, size_t i, const char** user_id)
{
    return guarded([&] {
        require(corpus && user_id, "null argument");
        if (i >= corpus->users.size())
            throw rtfm::Error(rtfm::ErrorCode::not_found, "user index out of range");
        *user_id = corpus->users[i].c_str();
    });
}

int rtfm_corpus_has_user(const rtfm_corpus* corpus, const char* user_id)
{
    return corpus && user_id && corpus->corpus.by_user().count(user_id) ? 1 : 0;
}

rtfm_status rtfm_corpus_review_text(const rtfm_corpus* corpus, size_t position, const char** text)
{
    return guarded([&] {
        require(corpus && text, "null argument");
        if (position >= corpus->corpus.size())
            throw rtfm::Error(rtfm::ErrorCode::not_found, "review position out of range");
        *text = corpus->corpus[position].review_text.c_str();
    });
}

rtfm_status rtfm_corpus_stats_json(const rtfm_corpus* corpus, const rtfm_config* config, char** json)
{
    return guarded([&] {
        require(corpus && json, "null argument");
        const auto stats = rtfm::compute_stats(corpus->corpus);
        *json = copy_out(rtfm::stats_to_json(stats, config ? config->config.hash() : std::string{}));
    });
}

rtfm_status rtfm_pipeline_json(const rtfm_config* config, const char* text, char** json)
{
    return guarded([&] {
        require(config && text && json, "null argument");
        const auto terms = rtfm::run_pipeline(text, config->config.text_pipeline());
        *json = copy_out(nlohmann::json(terms).dump());
    });
}

// ---- store

rtfm_status rtfm_store_build(const rtfm_corpus* corpus, const rtfm_config* config, rtfm_store** out)
{
    return guarded([&] {
        require(corpus && config && out, "null argument");
        const auto& c = config->config;
        *out = new rtfm_store(
            rtfm::build_all_indexes(corpus->corpus, c.text_pipeline(), c.hash(), c.threads));
    });
}

rtfm_status rtfm_store_save(const rtfm_store* store, const char* path)
{
    return guarded([&] {
        require(store && path, "null argument");
        rtfm::persist_index(store->store, path);
    });
}

rtfm_status rtfm_store_load(const char* path, rtfm_store** out)
{
    return guarded([&] {
        require(path && out, "null argument");
        *out = new rtfm_store(rtfm::load_index(path));
    });
}

void rtfm_store_free(rtfm_store* store) { delete store; }

size_t rtfm_store_product_count(const rtfm_store* store) { return store ? store->asins.size() : 0; }

rtfm_status rtfm_store_product_asin(const rtfm_store* store, size_t i, const char** asin)
{
    return guarded([&] {
        require(store && asin, "null argument");
        if (i >= store->asins.size())
            throw rtfm::Error(rtfm::ErrorCode::not_found, "product index out of range");
        *asin = store->asins[i].c_str();
    });
}

int rtfm_store_contains(const rtfm_store* store, const char* asin)
{
    return store && asin && store->store.contains(asin) ? 1 : 0;
}

rtfm_status rtfm_store_config_hash(const rtfm_store* store, const char** hash)
{
    return guarded([&] {
        require(store && hash, "null argument");
        *hash = store->store.config_hash().c_str();
    });
}

rtfm_status rtfm_store_to_json(const rtfm_store* store, char** json)
{
    return guarded([&] {
        require(store && json, "null argument");
        *json = copy_out(rtfm::store_to_json(store->store));
    });
}

// ---- profiles

rtfm_status rtfm_simulate_events(const rtfm_corpus* corpus, const rtfm_config* config,
                                 const char* user_id, char** events_json)
{
    return guarded([&] {
        require(corpus && config && user_id && events_json, "null argument");
        const auto& c = config->config;
        const auto events =
            rtfm::simulate_activity(c.simulation, corpus->corpus, user_id, c.text_pipeline());
        *events_json = copy_out(rtfm::events_to_json(user_id, events, c.hash()));
    });
}

rtfm_status rtfm_profile_from_events(const rtfm_store* store, const rtfm_config* config,
                                     const char* events_json, rtfm_profile** out)
{
    return guarded([&] {
        require(store && config && events_json && out, "null argument");
        config->config.profile.validate();
        std::string user;
        const auto events = rtfm::events_from_json(events_json, &user);
        *out = new rtfm_profile{rtfm::build_profile(user, events, store->store, config->config.profile)};
    });
}

rtfm_status rtfm_profile_parse(const char* profile_json, rtfm_profile** out)
{
    return guarded([&] {
        require(profile_json && out, "null argument");
        *out = new rtfm_profile{rtfm::profile_from_json(profile_json)};
    });
}

rtfm_status rtfm_profile_load(const char* path, rtfm_profile** out)
{
    return guarded([&] {
        require(path && out, "null argument");
        std::FILE* f = std::fopen(path, "rb");
        if (!f)
            throw rtfm::Error(rtfm::ErrorCode::io, std::string("cannot read profile: ") + path);
        std::string text;
        char buf[65536];
        for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, f)) > 0;)
            text.append(buf, n);
        std::fclose(f);
        *out = new rtfm_profile{rtfm::profile_from_json(text)};
    });
}

void rtfm_profile_free(rtfm_profile* profile) { delete profile; }

rtfm_status rtfm_profile_user_id(const rtfm_profile* profile, const char** user_id)
{
    return guarded([&] {
        require(profile && user_id, "null argument");
        *user_id = profile->profile.user_id.c_str();
    });
}

rtfm_status rtfm_profile_to_json(const rtfm_profile* profile, const rtfm_config* config, char** json)
{
    return guarded([&] {
        require(profile && json, "null argument");
        *json = copy_out(
            rtfm::profile_to_json(profile->profile, config ? config->config.hash() : std::string{}));
    });
}

rtfm_status rtfm_profile_top_k(const rtfm_profile* profile, size_t k, char** json)
{
    return guarded([&] {
        require(profile && json, "null argument");
        require(k >= 1, "k must be >= 1");
        *json = copy_out(nlohmann::json(rtfm::top_k(profile->profile, k)).dump());
    });
}

// ---- ranking, evaluation, recommendation

rtfm_status rtfm_rank_json(const rtfm_store* store, const rtfm_profile* profile,
                           const rtfm_config* config, const char* asin, rtfm_rank_method method,
                           char** json, int* empty_query)
{
    return guarded([&] {
        require(store && profile && config && asin && json, "null argument");
        const auto& c = config->config;
        c.profile.validate();
        const auto& index = store->store.at(asin);
        const auto query = rtfm::top_k(profile->profile, c.profile.k);
        rtfm::Ranking ranking;
        if (method == RTFM_RANK_DEFAULT) {
            ranking = rtfm::rank_default(index, rtfm::score_documents(index, query, c.ranker, &store->store));
            ranking.empty_query = query.empty();
        } else {
            ranking = rtfm::rank_with_query(index, query, c.ranker, &store->store);
        }
        if (empty_query)
            *empty_query = ranking.empty_query ? 1 : 0;
        *json = copy_out(rtfm::ranking_to_json(ranking, c.hash()));
    });
}

rtfm_status rtfm_evaluate_batch(const rtfm_store* store, const rtfm_profile* const* profiles,
                                size_t n_profiles, const char* const* asins, size_t n_asins,
                                const rtfm_config* config, rtfm_pairing pairing, char** csv,
                                char** summary_json)
{
    return guarded([&] {
        require(store && config && csv && summary_json, "null argument");
        require(n_profiles == 0 || profiles, "profiles is null");
        require(n_asins == 0 || asins, "asins is null");
        std::vector<rtfm::UserProfile> users;
        users.reserve(n_profiles);
        for (size_t i = 0; i < n_profiles; ++i) {
            require(profiles[i], "null profile");
            users.push_back(profiles[i]->profile);
        }
        std::vector<std::string> selection;
        selection.reserve(n_asins);
        for (size_t i = 0; i < n_asins; ++i) {
            require(asins[i], "null asin");
            selection.emplace_back(asins[i]);
        }
        const auto& c = config->config;
        const auto report = rtfm::batch_evaluate(
            store->store, users, selection, c.ranker, c.profile,
            pairing == RTFM_PAIR_CROSS ? rtfm::Pairing::cross : rtfm::Pairing::fixed_user, c.threads);
        const auto hash = c.hash();
        std::string csv_text = rtfm::report_csv(report, hash);
        std::string summary = rtfm::report_summary_json(report, hash);
        *csv = copy_out(csv_text);
        try {
            *summary_json = copy_out(summary);
        } catch (...) {
            std::free(*csv);
            *csv = nullptr;
            throw;
        }
    });
}

rtfm_status rtfm_recommend_json(const rtfm_store* store, const rtfm_profile* profile,
                                const rtfm_config* config, const char* asin, char** json,
                                int* scorable, double* score)
{
    return guarded([&] {
        require(store && profile && config && asin && json, "null argument");
        const auto& c = config->config;
        c.profile.validate();
        const auto rec = rtfm::recommendation_score(store->store.at(asin), profile->profile, c.profile);
        if (scorable)
            *scorable = rec.scorable() ? 1 : 0;
        if (score)
            *score = rec.score.value_or(0.0);
        *json = copy_out(rtfm::recommendation_to_json(rec, c.hash()));
    });
}

// ---- scalar metrics

rtfm_status rtfm_rss(const double* scores, size_t n, double* out)
{
    return guarded([&] {
        require(out && (scores || n == 0), "null argument");
        *out = rtfm::rss(std::span<const double>(scores, n));
    });
}

rtfm_status rtfm_percent_increase(double rss_default, double rss_personalized, double* out)
{
    return guarded([&] {
        require(out, "out is null");
        *out = rtfm::percent_increase(rss_default, rss_personalized);
    });
}

rtfm_status rtfm_precision_at_k(const int64_t* candidate, const int64_t* reference, size_t n,
                                size_t k, double* out)
{
    return guarded([&] {
        require(out && ((candidate && reference) || n == 0), "null argument");
        *out = rtfm::precision_at_k(std::span<const std::int64_t>(candidate, n),
                                    std::span<const std::int64_t>(reference, n), k);
    });
}

rtfm_status rtfm_dwell_weight(const rtfm_config* config, double minutes, double* out)
{
    return guarded([&] {
        require(config && out, "null argument");
        config->config.profile.validate();
        *out = rtfm::dwell_weight(minutes, config->config.profile);
    });
}

}  // extern "C"
