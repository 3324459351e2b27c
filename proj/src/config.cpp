#include "rtfm/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "hash.hpp"
#include "rtfm/error.hpp"

namespace rtfm {

namespace {

[[noreturn]] void bad_value(std::string_view key, std::string_view value)
{
    throw Error(ErrorCode::invalid_argument,
                "invalid value '" + std::string(value) + "' for " + std::string(key));
}

std::string_view trimmed(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

bool parse_bool(std::string_view key, std::string_view v)
{
    if (v == "true" || v == "1" || v == "yes" || v == "on")
        return true;
    if (v == "false" || v == "0" || v == "no" || v == "off")
        return false;
    bad_value(key, v);
}

template <typename T>
T parse_number(std::string_view key, std::string_view v)
{
    T out{};
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        bad_value(key, v);
    return out;
}

std::string format_double(double d)
{
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), d);
    return std::string(buf, ptr);
}

std::string format_bool(bool b) { return b ? "true" : "false"; }

struct Key {
    const char* name;
    bool affects_results;
    std::function<std::string(const RunConfig&)> get;
    std::function<void(RunConfig&, std::string_view)> set;
};

template <typename Member>
Key bool_key(const char* name, Member RunConfig::*member)
{
    return {name, true, [member](const RunConfig& c) { return format_bool(c.*member); },
            [member, name](RunConfig& c, std::string_view v) { c.*member = parse_bool(name, v); }};
}

template <typename Getter>
Key double_key(const char* name, Getter ref)
{
    return {name, true, [ref](const RunConfig& c) { return format_double(ref(c)); },
            [ref, name](RunConfig& c, std::string_view v) { ref(c) = parse_number<double>(name, v); }};
}

template <typename T, typename Getter>
Key int_key(const char* name, Getter ref, bool affects_results = true)
{
    return {name, affects_results,
            [ref](const RunConfig& c) { return std::to_string(ref(c)); },
            [ref, name](RunConfig& c, std::string_view v) { ref(c) = parse_number<T>(name, v); }};
}

const std::vector<Key>& key_table()
{
    static const std::vector<Key> table = [] {
        std::vector<Key> t;
        t.push_back({"dataset.path", false, [](const RunConfig& c) { return c.dataset_path; },
                     [](RunConfig& c, std::string_view v) { c.dataset_path = v; }});
        t.push_back(bool_key("dataset.strict", &RunConfig::strict));

        t.push_back(bool_key("text.lowercase", &RunConfig::lowercase));
        t.push_back(bool_key("text.stemming", &RunConfig::stemming));
        t.push_back(bool_key("text.pos_filter", &RunConfig::pos_filter));
        t.push_back(bool_key("text.include_summary", &RunConfig::include_summary));
        t.push_back({"text.stopwords", true, [](const RunConfig& c) { return c.stopwords_path; },
                     [](RunConfig& c, std::string_view v) { c.stopwords_path = v; }});

        t.push_back(double_key("profile.shopped_weight", [](auto& c) -> auto& { return c.profile.shopped_weight; }));
        t.push_back(double_key("profile.reviewed_weight", [](auto& c) -> auto& { return c.profile.reviewed_weight; }));
        t.push_back({"profile.dwell_schedule", true,
                     [](const RunConfig& c) {
                         return std::string(c.profile.dwell_schedule == DwellSchedule::two_segment
                                                ? "two_segment"
                                                : "single_line");
                     },
                     [](RunConfig& c, std::string_view v) {
                         if (v == "two_segment")
                             c.profile.dwell_schedule = DwellSchedule::two_segment;
                         else if (v == "single_line")
                             c.profile.dwell_schedule = DwellSchedule::single_line;
                         else
                             bad_value("profile.dwell_schedule", v);
                     }});
        t.push_back(double_key("profile.dwell_low_minutes", [](auto& c) -> auto& { return c.profile.dwell_low_minutes; }));
        t.push_back(double_key("profile.dwell_neutral_minutes", [](auto& c) -> auto& { return c.profile.dwell_neutral_minutes; }));
        t.push_back(double_key("profile.dwell_high_minutes", [](auto& c) -> auto& { return c.profile.dwell_high_minutes; }));
        t.push_back(double_key("profile.dwell_low_weight", [](auto& c) -> auto& { return c.profile.dwell_low_weight; }));
        t.push_back(double_key("profile.dwell_high_weight", [](auto& c) -> auto& { return c.profile.dwell_high_weight; }));
        t.push_back(int_key<std::size_t>("profile.k", [](auto& c) -> auto& { return c.profile.k; }));

        t.push_back(double_key("ranker.k1", [](auto& c) -> auto& { return c.ranker.k1; }));
        t.push_back(double_key("ranker.b", [](auto& c) -> auto& { return c.ranker.b; }));
        t.push_back({"ranker.idf", true,
                     [](const RunConfig& c) {
                         return std::string(c.ranker.idf == IdfVariant::smoothed ? "smoothed" : "classic");
                     },
                     [](RunConfig& c, std::string_view v) {
                         if (v == "smoothed")
                             c.ranker.idf = IdfVariant::smoothed;
                         else if (v == "classic")
                             c.ranker.idf = IdfVariant::classic;
                         else
                             bad_value("ranker.idf", v);
                     }});
        t.push_back({"ranker.idf_scope", true,
                     [](const RunConfig& c) {
                         return std::string(c.ranker.idf_scope == IdfScope::product ? "product" : "corpus");
                     },
                     [](RunConfig& c, std::string_view v) {
                         if (v == "product")
                             c.ranker.idf_scope = IdfScope::product;
                         else if (v == "corpus")
                             c.ranker.idf_scope = IdfScope::corpus;
                         else
                             bad_value("ranker.idf_scope", v);
                     }});

        t.push_back(int_key<std::uint64_t>("simulation.seed", [](auto& c) -> auto& { return c.simulation.seed; }));
        t.push_back(int_key<std::int64_t>("simulation.browse_min", [](auto& c) -> auto& { return c.simulation.browse_min; }));
        t.push_back(int_key<std::int64_t>("simulation.browse_max", [](auto& c) -> auto& { return c.simulation.browse_max; }));
        t.push_back(int_key<std::int64_t>("simulation.shop_min", [](auto& c) -> auto& { return c.simulation.shop_min; }));
        t.push_back(int_key<std::int64_t>("simulation.shop_max", [](auto& c) -> auto& { return c.simulation.shop_max; }));
        t.push_back(double_key("simulation.dwell_min", [](auto& c) -> auto& { return c.simulation.dwell_min; }));
        t.push_back(double_key("simulation.dwell_max", [](auto& c) -> auto& { return c.simulation.dwell_max; }));

        t.push_back({"output.dir", false, [](const RunConfig& c) { return c.output_dir; },
                     [](RunConfig& c, std::string_view v) { c.output_dir = v; }});
        t.push_back(int_key<unsigned>("output.threads", [](auto& c) -> auto& { return c.threads; }, false));
        return t;
    }();
    return table;
}

const Key& lookup(std::string_view key)
{
    for (const auto& k : key_table())
        if (key == k.name)
            return k;
    throw Error(ErrorCode::invalid_argument, "unknown config key: " + std::string(key));
}

}  // namespace

void RunConfig::set(std::string_view key, std::string_view value)
{
    lookup(key).set(*this, trimmed(value));
}

std::string RunConfig::get(std::string_view key) const
{
    return lookup(key).get(*this);
}

const std::vector<std::string>& RunConfig::keys()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& k : key_table())
            out.emplace_back(k.name);
        return out;
    }();
    return names;
}

void RunConfig::validate() const
{
    profile.validate();
    ranker.validate();
    simulation.validate();
}

std::string RunConfig::to_ini() const
{
    std::ostringstream out;
    std::string section;
    for (const auto& k : key_table()) {
        std::string_view name = k.name;
        const auto dot = name.find('.');
        const auto sec = name.substr(0, dot);
        if (sec != section) {
            if (!section.empty())
                out << '\n';
            section = sec;
            out << '[' << section << "]\n";
        }
        out << name.substr(dot + 1) << " = " << k.get(*this) << '\n';
    }
    return out.str();
}

std::string RunConfig::hash() const
{
    std::string canonical;
    for (const auto& k : key_table()) {
        if (!k.affects_results)
            continue;
        canonical.append(k.name).append("=").append(k.get(*this)).append("\n");
    }
    auto h = detail::fnv1a(canonical);
    if (!stopwords_path.empty()) {
        std::ifstream in(stopwords_path, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        h = detail::fnv1a(buf.str(), h);
    }
    return detail::hex64(h);
}

TextPipelineConfig RunConfig::text_pipeline() const
{
    TextPipelineConfig c;
    c.lowercase = lowercase;
    c.stemming = stemming;
    c.pos_filter = pos_filter;
    c.include_summary = include_summary;
    if (!stopwords_path.empty())
        c.stopwords = load_stopwords(stopwords_path);
    return c;
}

RunConfig parse_run_config(std::string_view ini_text)
{
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        std::istringstream in{std::string(ini_text)};
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw Error(ErrorCode::parse, std::string("malformed config: ") + e.message() + " (line " +
                                          std::to_string(e.line()) + ")");
    }

    RunConfig config;
    for (const auto& [section, entries] : tree) {
        if (entries.empty() && !entries.data().empty())
            throw Error(ErrorCode::invalid_argument, "config key outside a section: " + section);
        for (const auto& [name, value] : entries)
            config.set(section + "." + name, value.data());
    }
    config.validate();
    return config;
}

RunConfig load_run_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::io, "cannot read config: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_config(buf.str());
}

}  // namespace rtfm
