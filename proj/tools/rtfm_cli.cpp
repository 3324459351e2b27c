// rtfm - command-line front end over the C API.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rtfm/rtfm.h"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kUsageError = 1;
constexpr int kDataError = 2;

struct Failure {
    int exit_code;
    std::string message;
};

[[noreturn]] void usage_error(const std::string& message) { throw Failure{kUsageError, message}; }
[[noreturn]] void data_error(const std::string& message) { throw Failure{kDataError, message}; }

void check(rtfm_status status, const std::string& context)
{
    if (status == RTFM_OK)
        return;
    std::string message = context + ": " + rtfm_last_error();
    throw Failure{status == RTFM_E_INVALID_ARGUMENT ? kUsageError : kDataError, std::move(message)};
}

struct Free {
    void operator()(char* s) const { rtfm_string_free(s); }
    void operator()(rtfm_config* c) const { rtfm_config_free(c); }
    void operator()(rtfm_corpus* c) const { rtfm_corpus_free(c); }
    void operator()(rtfm_store* s) const { rtfm_store_free(s); }
    void operator()(rtfm_profile* p) const { rtfm_profile_free(p); }
};
using Config = std::unique_ptr<rtfm_config, Free>;
using Corpus = std::unique_ptr<rtfm_corpus, Free>;
using Store = std::unique_ptr<rtfm_store, Free>;
using Profile = std::unique_ptr<rtfm_profile, Free>;

std::string take(char* s)
{
    std::unique_ptr<char, Free> owned(s);
    return s ? std::string(s) : std::string();
}

struct Options {
    std::string config_path;
    std::string dataset;
    std::string store;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> k;
    std::optional<unsigned> threads;
    bool strict = false;
    bool lenient = false;

    std::vector<std::string> users;
    bool all_users = false;
    std::vector<std::string> profiles;
    std::vector<std::string> events;
    std::vector<std::string> asins;
    std::string products_file;
    bool all_products = false;
    std::optional<std::size_t> sample;
    std::string pairing = "fixed";
};

/// Config file (or defaults) with command-line overrides applied.
Config load_config(const Options& o)
{
    rtfm_config* raw = nullptr;
    if (o.config_path.empty())
        check(rtfm_config_new(&raw), "config");
    else
        check(rtfm_config_load(o.config_path.c_str(), &raw), o.config_path);
    Config config(raw);

    auto set = [&](const char* key, const std::string& value) {
        check(rtfm_config_set(config.get(), key, value.c_str()), std::string("--") + key);
    };
    if (!o.dataset.empty())
        set("dataset.path", o.dataset);
    if (o.strict)
        set("dataset.strict", "true");
    if (o.lenient)
        set("dataset.strict", "false");
    if (o.seed)
        set("simulation.seed", std::to_string(*o.seed));
    if (o.k)
        set("profile.k", std::to_string(*o.k));
    if (o.threads)
        set("output.threads", std::to_string(*o.threads));
    if (!o.out.empty())
        set("output.dir", o.out);
    check(rtfm_config_validate(config.get()), "config");
    return config;
}

std::string config_value(const rtfm_config* config, const char* key)
{
    char* value = nullptr;
    check(rtfm_config_get(config, key, &value), key);
    return take(value);
}

std::string config_hash(const rtfm_config* config)
{
    char* hash = nullptr;
    check(rtfm_config_hash(config, &hash), "config");
    return take(hash);
}

fs::path output_dir(const rtfm_config* config) { return config_value(config, "output.dir"); }

fs::path store_path(const Options& o, const rtfm_config* config)
{
    return o.store.empty() ? output_dir(config) / "index.bin" : fs::path(o.store);
}

/// Keeps ids usable as file names.
std::string file_stem(const std::string& id)
{
    std::string out = id;
    for (char& c : out)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.'))
            c = '_';
    if (out.empty() || out == "." || out == "..")
        out = "_" + out;
    return out;
}

void write_file(const fs::path& path, const std::string& text)
{
    std::error_code ec;
    if (path.has_parent_path())
        fs::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (text.empty() || text.back() != '\n')
        out << '\n';
    out.close();
    if (!out)
        data_error("cannot write " + path.string());
}

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        data_error("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Corpus load_corpus(const rtfm_config* config)
{
    const auto path = config_value(config, "dataset.path");
    if (path.empty())
        usage_error("no dataset: pass --dataset or set dataset.path");
    rtfm_corpus* raw = nullptr;
    std::size_t skipped = 0;
    check(rtfm_corpus_load(path.c_str(), config, &raw, &skipped), path);
    if (skipped)
        std::cerr << "warning: skipped " << skipped << " malformed line(s) in " << path << "\n";
    return Corpus(raw);
}

Store load_store(const Options& o, const rtfm_config* config)
{
    const auto path = store_path(o, config);
    rtfm_store* raw = nullptr;
    check(rtfm_store_load(path.string().c_str(), &raw), path.string());
    Store store(raw);
    const char* built_with = nullptr;
    check(rtfm_store_config_hash(store.get(), &built_with), "store");
    if (built_with != config_hash(config))
        std::cerr << "note: store was built under config " << built_with << ", running under "
                  << config_hash(config) << "\n";
    return store;
}

std::string user_of(const rtfm_profile* profile)
{
    const char* user = nullptr;
    check(rtfm_profile_user_id(profile, &user), "profile");
    return user;
}

/// --profile paths, then --user ids resolved under <out>/profiles.
std::vector<Profile> load_profiles(const Options& o, const rtfm_config* config)
{
    std::vector<fs::path> paths(o.profiles.begin(), o.profiles.end());
    for (const auto& user : o.users)
        paths.push_back(output_dir(config) / "profiles" / (file_stem(user) + ".json"));
    if (paths.empty())
        usage_error("no profile: pass --profile or --user");

    std::vector<Profile> out;
    for (const auto& path : paths) {
        if (!fs::exists(path))
            data_error("no profile at " + path.string() + " (run simulate first?)");
        rtfm_profile* raw = nullptr;
        check(rtfm_profile_load(path.string().c_str(), &raw), path.string());
        out.emplace_back(raw);
    }
    return out;
}

std::vector<std::string> store_asins(const rtfm_store* store)
{
    std::vector<std::string> out;
    const auto n = rtfm_store_product_count(store);
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const char* asin = nullptr;
        check(rtfm_store_product_asin(store, i, &asin), "store");
        out.emplace_back(asin);
    }
    return out;
}

/// Seeded draw of n ids; the result is sorted.
std::vector<std::string> sample_ids(std::vector<std::string> ids, std::size_t n, const rtfm_config* config)
{
    if (n >= ids.size())
        return ids;
    std::mt19937_64 rng(std::stoull(config_value(config, "simulation.seed")));
    std::vector<std::string> out;
    std::sample(ids.begin(), ids.end(), std::back_inserter(out), n, rng);
    return out;
}

/// Products named by --asin, --products-file, --all-products and --sample.
std::vector<std::string> product_selection(const Options& o, const rtfm_store* store, const rtfm_config* config)
{
    std::vector<std::string> selection = o.asins;
    if (!o.products_file.empty()) {
        std::istringstream in(read_file(o.products_file));
        std::string line;
        while (std::getline(in, line)) {
            line.erase(std::find_if(line.rbegin(), line.rend(), [](unsigned char c) { return !std::isspace(c); }).base(),
                       line.end());
            line.erase(line.begin(), std::find_if(line.begin(), line.end(), [](unsigned char c) { return !std::isspace(c); }));
            if (!line.empty() && line[0] != '#')
                selection.push_back(line);
        }
    }
    if (o.all_products || (o.sample && selection.empty()))
        selection = store_asins(store);
    std::sort(selection.begin(), selection.end());
    selection.erase(std::unique(selection.begin(), selection.end()), selection.end());
    if (o.sample)
        selection = sample_ids(std::move(selection), *o.sample, config);
    if (selection.empty())
        usage_error("empty product selection: pass --asin, --products-file, --all-products or --sample");
    return selection;
}

std::string excerpt(const rtfm_corpus* corpus, std::size_t position)
{
    const char* text = nullptr;
    if (rtfm_corpus_review_text(corpus, position, &text) != RTFM_OK)
        return "(unavailable)";
    std::string s = text;
    if (s.size() > 160)
        s = s.substr(0, 157) + "...";
    return s.empty() ? "(empty review)" : "\"" + s + "\"";
}

// ---- commands

int cmd_ingest(const Options& o)
{
    const auto config = load_config(o);
    const auto corpus = load_corpus(config.get());
    rtfm_store* raw = nullptr;
    check(rtfm_store_build(corpus.get(), config.get(), &raw), "index");
    const Store store(raw);

    const auto index_path = store_path(o, config.get());
    std::error_code ec;
    if (index_path.has_parent_path())
        fs::create_directories(index_path.parent_path(), ec);
    check(rtfm_store_save(store.get(), index_path.string().c_str()), index_path.string());

    char* stats = nullptr;
    check(rtfm_corpus_stats_json(corpus.get(), config.get(), &stats), "stats");
    const auto stats_path = output_dir(config.get()) / "stats.json";
    write_file(stats_path, take(stats));

    std::cout << "ingested " << rtfm_corpus_size(corpus.get()) << " reviews, " << rtfm_corpus_user_count(corpus.get())
              << " users, " << rtfm_store_product_count(store.get()) << " products\n"
              << "index: " << index_path.string() << "\nstats: " << stats_path.string() << "\n";
    return 0;
}

int cmd_stats(const Options& o)
{
    const auto config = load_config(o);
    const auto corpus = load_corpus(config.get());
    char* stats = nullptr;
    check(rtfm_corpus_stats_json(corpus.get(), config.get(), &stats), "stats");
    const auto text = take(stats);
    write_file(output_dir(config.get()) / "stats.json", text);
    std::cout << text << "\n";
    return 0;
}

int cmd_simulate(const Options& o)
{
    const auto config = load_config(o);
    const auto corpus = load_corpus(config.get());
    const auto store = load_store(o, config.get());

    std::vector<std::string> users = o.users;
    if (o.all_users || (o.sample && users.empty())) {
        users.clear();
        for (std::size_t i = 0; i < rtfm_corpus_user_count(corpus.get()); ++i) {
            const char* id = nullptr;
            check(rtfm_corpus_user_id(corpus.get(), i, &id), "corpus");
            users.emplace_back(id);
        }
    }
    std::sort(users.begin(), users.end());
    users.erase(std::unique(users.begin(), users.end()), users.end());
    if (o.sample)
        users = sample_ids(std::move(users), *o.sample, config.get());
    if (users.empty())
        usage_error("no users: pass --user, --all-users or --sample");
    for (const auto& user : users)
        if (!rtfm_corpus_has_user(corpus.get(), user.c_str()))
            data_error("unknown user: " + user);

    const auto out = output_dir(config.get());
    for (const auto& user : users) {
        char* events = nullptr;
        check(rtfm_simulate_events(corpus.get(), config.get(), user.c_str(), &events), user);
        const auto events_text = take(events);
        const auto events_path = out / "events" / (file_stem(user) + ".json");
        write_file(events_path, events_text);

        rtfm_profile* raw = nullptr;
        check(rtfm_profile_from_events(store.get(), config.get(), events_text.c_str(), &raw), user);
        const Profile profile(raw);
        char* profile_json = nullptr;
        check(rtfm_profile_to_json(profile.get(), config.get(), &profile_json), user);
        const auto profile_path = out / "profiles" / (file_stem(user) + ".json");
        write_file(profile_path, take(profile_json));
        std::cout << user << ": " << profile_path.string() << "\n";
    }
    return 0;
}

int cmd_profile(const Options& o)
{
    if (o.events.empty())
        usage_error("pass --events with one or more event logs");
    const auto config = load_config(o);
    const auto store = load_store(o, config.get());
    const auto out = output_dir(config.get());
    for (const auto& path : o.events) {
        rtfm_profile* raw = nullptr;
        check(rtfm_profile_from_events(store.get(), config.get(), read_file(path).c_str(), &raw), path);
        const Profile profile(raw);
        const auto user = user_of(profile.get());
        char* profile_json = nullptr;
        check(rtfm_profile_to_json(profile.get(), config.get(), &profile_json), user);
        const auto profile_path = out / "profiles" / (file_stem(user) + ".json");
        write_file(profile_path, take(profile_json));

        char* terms = nullptr;
        check(rtfm_profile_top_k(profile.get(), 10, &terms), user);
        std::cout << user << ": " << profile_path.string() << "\n  top terms: " << json::parse(take(terms)).dump()
                  << "\n";
    }
    return 0;
}

int cmd_rank(const Options& o)
{
    const auto config = load_config(o);
    const auto store = load_store(o, config.get());
    const auto profiles = load_profiles(o, config.get());
    if (o.asins.empty())
        usage_error("pass --asin");
    Corpus corpus;
    if (!config_value(config.get(), "dataset.path").empty())
        corpus = load_corpus(config.get());

    const auto out = output_dir(config.get()) / "rankings";
    for (const auto& profile : profiles) {
        const auto user = user_of(profile.get());
        for (const auto& asin : o.asins) {
            if (!rtfm_store_contains(store.get(), asin.c_str()))
                data_error("unknown product: " + asin);
            std::cout << asin << " for " << user << "\n";
            for (auto method : {RTFM_RANK_PERSONALIZED, RTFM_RANK_DEFAULT}) {
                char* raw = nullptr;
                int empty_query = 0;
                check(rtfm_rank_json(store.get(), profile.get(), config.get(), asin.c_str(), method, &raw, &empty_query),
                      asin);
                const auto text = take(raw);
                const char* name = method == RTFM_RANK_PERSONALIZED ? "personalized" : "default";
                const auto path = out / file_stem(asin) / (file_stem(user) + "." + name + ".json");
                write_file(path, text);
                if (empty_query && method == RTFM_RANK_PERSONALIZED)
                    std::cerr << "warning: profile of " << user
                              << " has no positive terms; personalized order falls back to the default rule\n";

                const auto ranking = json::parse(text);
                const auto& entries = ranking["entries"];
                std::cout << "  " << name << ": " << path.string() << "\n";
                if (corpus && !entries.empty()) {
                    const auto& top = entries.front();
                    const auto& bottom = entries.back();
                    std::cout << "    top    (score " << top["score"].get<double>() << ") "
                              << excerpt(corpus.get(), top["review_position"]) << "\n"
                              << "    bottom (score " << bottom["score"].get<double>() << ") "
                              << excerpt(corpus.get(), bottom["review_position"]) << "\n";
                }
            }
        }
    }
    return 0;
}

int cmd_eval(const Options& o)
{
    if (o.pairing != "fixed" && o.pairing != "cross")
        usage_error("--pairing must be fixed or cross");
    const auto config = load_config(o);
    const auto store = load_store(o, config.get());
    const auto profiles = load_profiles(o, config.get());
    const auto selection = product_selection(o, store.get(), config.get());

    std::vector<const rtfm_profile*> profile_ptrs;
    for (const auto& p : profiles)
        profile_ptrs.push_back(p.get());
    std::vector<const char*> asin_ptrs;
    for (const auto& a : selection)
        asin_ptrs.push_back(a.c_str());

    char* csv = nullptr;
    char* summary = nullptr;
    check(rtfm_evaluate_batch(store.get(), profile_ptrs.data(), profile_ptrs.size(), asin_ptrs.data(),
                              asin_ptrs.size(), config.get(),
                              o.pairing == "cross" ? RTFM_PAIR_CROSS : RTFM_PAIR_FIXED_USER, &csv, &summary),
          "eval");
    const auto csv_text = take(csv);
    const auto summary_text = take(summary);
    const auto out = output_dir(config.get());
    write_file(out / "eval.csv", csv_text);
    write_file(out / "eval_summary.json", summary_text);

    const auto s = json::parse(summary_text);
    std::cout << "rows: " << s["count"] << ", errors: " << s["errors"] << "\n";
    if (s["mean"].is_null()) {
        std::cout << "mean percent increase: n/a\n";
    } else {
        std::cout << "mean percent increase: " << s["mean"].get<double>() << "\n"
                  << "median percent increase: " << s["median"].get<double>() << "\n";
    }
    std::cout << "report: " << (out / "eval.csv").string() << "\n";
    return s["count"].get<std::size_t>() > 0 ? 0 : kDataError;
}

int cmd_recommend(const Options& o)
{
    const auto config = load_config(o);
    const auto store = load_store(o, config.get());
    const auto profiles = load_profiles(o, config.get());
    const auto selection = product_selection(o, store.get(), config.get());
    const auto hash = config_hash(config.get());

    for (const auto& profile : profiles) {
        const auto user = user_of(profile.get());
        const auto dir = output_dir(config.get()) / "recommend" / file_stem(user);
        std::vector<std::pair<std::string, double>> scored;
        std::vector<std::string> not_scorable;
        std::vector<std::string> missing;
        for (const auto& asin : selection) {
            if (!rtfm_store_contains(store.get(), asin.c_str())) {
                missing.push_back(asin);
                continue;
            }
            char* raw = nullptr;
            int scorable = 0;
            double score = 0;
            check(rtfm_recommend_json(store.get(), profile.get(), config.get(), asin.c_str(), &raw, &scorable, &score),
                  asin);
            write_file(dir / (file_stem(asin) + ".json"), take(raw));
            if (scorable)
                scored.emplace_back(asin, score);
            else
                not_scorable.push_back(asin);
        }
        std::stable_sort(scored.begin(), scored.end(),
                         [](const auto& a, const auto& b) { return a.second > b.second; });

        json summary;
        summary["user_id"] = user;
        summary["config_hash"] = hash;
        summary["ranked"] = json::array();
        for (const auto& [asin, score] : scored)
            summary["ranked"].push_back({{"asin", asin}, {"score", score}});
        summary["not_scorable"] = not_scorable;
        summary["unknown"] = missing;
        write_file(dir / "summary.json", summary.dump(2));

        std::cout << "recommendations for " << user << ":\n";
        for (const auto& [asin, score] : scored)
            std::cout << "  " << asin << "  " << score << "\n";
        if (!not_scorable.empty())
            std::cout << "  not scorable: " << not_scorable.size() << " product(s)\n";
        if (!missing.empty())
            std::cerr << "warning: " << missing.size() << " product(s) not in the store\n";
    }
    return 0;
}

void add_common(CLI::App* cmd, Options& o)
{
    cmd->add_option("--config", o.config_path, "INI run configuration")->check(CLI::ExistingFile);
    cmd->add_option("--out", o.out, "output directory (overrides output.dir)");
    cmd->add_option("--seed", o.seed, "simulation seed (overrides simulation.seed)");
    cmd->add_option("--k", o.k, "number of profile terms used as the query (overrides profile.k)");
    cmd->add_option("--threads", o.threads, "worker threads, 0 = all cores");
}

void add_dataset(CLI::App* cmd, Options& o)
{
    cmd->add_option("--dataset", o.dataset, "newline-delimited JSON reviews");
    auto* strict = cmd->add_flag("--strict", o.strict, "fail on the first malformed line");
    cmd->add_flag("--lenient", o.lenient, "skip malformed lines")->excludes(strict);
}

void add_store(CLI::App* cmd, Options& o)
{
    cmd->add_option("--store", o.store, "index file (default <out>/index.bin)");
}

void add_profiles(CLI::App* cmd, Options& o)
{
    cmd->add_option("--profile", o.profiles, "profile JSON file (repeatable)");
    cmd->add_option("--user", o.users, "user whose profile is under <out>/profiles (repeatable)");
}

void add_selection(CLI::App* cmd, Options& o)
{
    cmd->add_option("--asin", o.asins, "product id (repeatable)");
    cmd->add_option("--products-file", o.products_file, "file with one product id per line")
        ->check(CLI::ExistingFile);
    cmd->add_flag("--all-products", o.all_products, "every product in the store");
    cmd->add_option("--sample", o.sample, "seeded random subset of this many products");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Personalized review ranking with user term profiles"};
    app.set_version_flag("--version", std::string(rtfm_version()));
    app.require_subcommand(1);
    Options o;

    auto* ingest = app.add_subcommand("ingest", "index a dataset and write summary statistics");
    add_common(ingest, o);
    add_dataset(ingest, o);
    add_store(ingest, o);

    auto* stats = app.add_subcommand("stats", "print dataset statistics");
    add_common(stats, o);
    add_dataset(stats, o);

    auto* simulate = app.add_subcommand("simulate", "simulate activity and build user profiles");
    add_common(simulate, o);
    add_dataset(simulate, o);
    add_store(simulate, o);
    simulate->add_option("--user", o.users, "user id (repeatable)");
    simulate->add_flag("--all-users", o.all_users, "every reviewer in the dataset");
    simulate->add_option("--sample", o.sample, "seeded random subset of this many users");

    auto* profile = app.add_subcommand("profile", "rebuild profiles from event logs");
    add_common(profile, o);
    add_store(profile, o);
    profile->add_option("--events", o.events, "event log JSON (repeatable)")->check(CLI::ExistingFile);

    auto* rank = app.add_subcommand("rank", "rank a product's reviews for a user");
    add_common(rank, o);
    add_dataset(rank, o);
    add_store(rank, o);
    add_profiles(rank, o);
    rank->add_option("--asin", o.asins, "product id (repeatable)");

    auto* eval = app.add_subcommand("eval", "compare personalized and default rankings");
    add_common(eval, o);
    add_store(eval, o);
    add_profiles(eval, o);
    add_selection(eval, o);
    eval->add_option("--pairing", o.pairing, "fixed: first profile on every product; cross: all pairs");

    auto* recommend = app.add_subcommand("recommend", "score products by the user's top terms");
    add_common(recommend, o);
    add_store(recommend, o);
    add_profiles(recommend, o);
    add_selection(recommend, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsageError;
    }

    try {
        if (ingest->parsed())
            return cmd_ingest(o);
        if (stats->parsed())
            return cmd_stats(o);
        if (simulate->parsed())
            return cmd_simulate(o);
        if (profile->parsed())
            return cmd_profile(o);
        if (rank->parsed())
            return cmd_rank(o);
        if (eval->parsed())
            return cmd_eval(o);
        if (recommend->parsed())
            return cmd_recommend(o);
    } catch (const Failure& f) {
        std::cerr << "error: " << f.message << "\n";
        return f.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDataError;
    }
    return kUsageError;
}
