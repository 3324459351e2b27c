#include "rtfm/text.hpp"

#include <fstream>
#include <sstream>

#include "rtfm/error.hpp"

namespace rtfm {

// Generated from data/stopwords_en.txt at configure time.
extern const char* const embedded_stopwords_en;

namespace {

bool is_alnum(char c)
{
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

char to_lower(char c)
{
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

std::string lowered(std::string_view s)
{
    std::string out(s);
    for (auto& c : out)
        c = to_lower(c);
    return out;
}

void add_lines(std::unordered_set<std::string>& set, std::istream& in)
{
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
            line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos || line[start] == '#')
            continue;
        set.insert(lowered(std::string_view(line).substr(start)));
    }
}

}  // namespace

const std::unordered_set<std::string>& default_stopwords()
{
    static const std::unordered_set<std::string> words = [] {
        std::unordered_set<std::string> set;
        std::istringstream in(embedded_stopwords_en);
        add_lines(set, in);
        return set;
    }();
    return words;
}

std::shared_ptr<const std::unordered_set<std::string>> load_stopwords(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::io, "cannot read stopword file: " + path);
    auto set = std::make_shared<std::unordered_set<std::string>>();
    add_lines(*set, in);
    return set;
}

Terms tokenize(std::string_view text)
{
    Terms tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && !is_alnum(text[i]))
            ++i;
        const std::size_t start = i;
        while (i < text.size() && is_alnum(text[i]))
            ++i;
        if (i > start)
            tokens.emplace_back(text.substr(start, i - start));
    }
    return tokens;
}

Terms run_pipeline(std::string_view text, const TextPipelineConfig& config)
{
    Terms tokens = tokenize(text);
    if (config.lowercase) {
        for (auto& t : tokens)
            for (auto& c : t)
                c = to_lower(c);
    }
    if (config.pos_filter && config.pos_tagger)
        tokens = config.pos_tagger(tokens);

    const auto& stopwords = config.stopwords ? *config.stopwords : default_stopwords();
    Terms out;
    out.reserve(tokens.size());
    for (auto& t : tokens) {
        const bool stop = config.lowercase ? stopwords.contains(t) : stopwords.contains(lowered(t));
        if (stop)
            continue;
        out.push_back(config.stemming ? porter_stem(t) : std::move(t));
    }
    return out;
}

}  // namespace rtfm
