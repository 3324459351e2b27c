#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace rtfm {

using Terms = std::vector<std::string>;

/// Optional part-of-speech filter. Receives lowercased tokens in text order and
/// returns the tokens to keep. No tagger ships with the library; when
/// `pos_filter` is on and no tagger is installed the stage passes tokens through.
using PosTagger = std::function<Terms(const Terms&)>;

struct TextPipelineConfig {
    bool lowercase = true;
    bool stemming = true;
    bool pos_filter = false;
    /// Index `summary` alongside `reviewText`.
    bool include_summary = false;
    /// Null means the embedded English list.
    std::shared_ptr<const std::unordered_set<std::string>> stopwords;
    PosTagger pos_tagger;
};

/// The stopword list compiled into the library (one term per line in
/// data/stopwords_en.txt).
const std::unordered_set<std::string>& default_stopwords();

/// Reads a stopword override file: one term per line, blank lines and lines
/// starting with '#' ignored, entries lowercased.
std::shared_ptr<const std::unordered_set<std::string>> load_stopwords(const std::string& path);

/// Splits on every byte that is not an ASCII letter or digit.
Terms tokenize(std::string_view text);

/// Porter (1980) suffix stripping. Expects a lowercase ASCII word.
std::string porter_stem(std::string_view word);

/// tokenize → lowercase → POS hook → stopword removal → stemming. Order and
/// duplicates are preserved.
Terms run_pipeline(std::string_view text, const TextPipelineConfig& config);

}  // namespace rtfm
