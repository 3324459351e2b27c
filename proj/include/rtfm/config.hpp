#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rtfm/profile.hpp"
#include "rtfm/ranker.hpp"
#include "rtfm/text.hpp"

namespace rtfm {

/// Every tunable of a run, serializable as an INI file with sections
/// [dataset], [text], [profile], [ranker], [simulation] and [output].
/// Keys are addressed as "section.name"; see docs/config.md.
struct RunConfig {
    std::string dataset_path;
    bool strict = true;

    bool lowercase = true;
    bool stemming = true;
    bool pos_filter = false;
    bool include_summary = false;
    /// Empty selects the embedded list.
    std::string stopwords_path;

    ProfileConfig profile;
    RankerConfig ranker;
    ActivitySimulationConfig simulation;

    std::string output_dir = "out";
    /// 0 = hardware concurrency. Does not affect results.
    unsigned threads = 0;

    /// Throws Error(invalid_argument) for an unknown key or unparsable value.
    void set(std::string_view key, std::string_view value);
    std::string get(std::string_view key) const;
    static const std::vector<std::string>& keys();

    /// Throws Error(invalid_argument) on out-of-range parameters.
    void validate() const;

    /// Canonical INI text; parsing it yields an equal config.
    std::string to_ini() const;

    /// 16 hex digits over every result-affecting setting (not the dataset or
    /// output locations, nor the thread count), plus the stopword file bytes
    /// when an override is configured.
    std::string hash() const;

    /// Loads the stopword override if one is configured.
    TextPipelineConfig text_pipeline() const;
};

/// Starts from defaults; keys absent from the text keep their defaults.
/// Throws Error(parse) on malformed INI, Error(invalid_argument) on bad keys/values.
RunConfig parse_run_config(std::string_view ini_text);
RunConfig load_run_config(const std::string& path);

}  // namespace rtfm
