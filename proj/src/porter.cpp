#include "rtfm/text.hpp"

#include <array>

namespace rtfm {

namespace {

// Working state for one word. `end` is one past the last character of the
// current stem candidate; suffix tests operate on word[0, end).
class PorterWord {
public:
    explicit PorterWord(std::string_view w) : s_(w) {}

    std::string take() && { return std::move(s_); }

    void step1a()
    {
        if (ends("sses")) {
            s_.resize(s_.size() - 2);
        } else if (ends("ies")) {
            s_.resize(s_.size() - 2);
        } else if (ends("ss")) {
            // unchanged
        } else if (ends("s")) {
            s_.pop_back();
        }
    }

    void step1b()
    {
        if (ends("eed")) {
            if (measure(s_.size() - 3) > 0)
                s_.pop_back();
            return;
        }
        std::size_t stem = 0;
        if (ends("ed"))
            stem = s_.size() - 2;
        else if (ends("ing"))
            stem = s_.size() - 3;
        else
            return;
        if (!has_vowel(stem))
            return;
        s_.resize(stem);

        if (ends("at") || ends("bl") || ends("iz")) {
            s_.push_back('e');
        } else if (double_consonant(s_.size())) {
            const char last = s_.back();
            if (last != 'l' && last != 's' && last != 'z')
                s_.pop_back();
        } else if (measure(s_.size()) == 1 && cvc(s_.size())) {
            s_.push_back('e');
        }
    }

    void step1c()
    {
        if (ends("y") && has_vowel(s_.size() - 1))
            s_.back() = 'i';
    }

    void step2()
    {
        static constexpr std::array<Rule, 20> rules{{
            {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},  {"anci", "ance"},
            {"izer", "ize"},    {"abli", "able"},   {"alli", "al"},    {"entli", "ent"},
            {"eli", "e"},       {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
            {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"}, {"fulness", "ful"},
            {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},  {"biliti", "ble"},
        }};
        apply_first(rules, 0);
    }

    void step3()
    {
        static constexpr std::array<Rule, 7> rules{{
            {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
            {"ical", "ic"},  {"ful", ""},   {"ness", ""},
        }};
        apply_first(rules, 0);
    }

    void step4()
    {
        // Listed so that a longer suffix is tried before any suffix it ends with.
        static constexpr std::array<std::string_view, 19> suffixes{
            "al",   "ance", "ence", "er",  "ic",  "able", "ible", "ant", "ement", "ment",
            "ent",  "ion",  "ou",   "ism", "ate", "iti",  "ous",  "ive", "ize",
        };
        for (const auto suffix : suffixes) {
            if (!ends(suffix))
                continue;
            const std::size_t stem = s_.size() - suffix.size();
            if (measure(stem) <= 1)
                return;
            if (suffix == "ion" && (stem == 0 || (s_[stem - 1] != 's' && s_[stem - 1] != 't')))
                return;
            s_.resize(stem);
            return;
        }
    }

    void step5()
    {
        if (ends("e")) {
            const std::size_t stem = s_.size() - 1;
            const auto m = measure(stem);
            if (m > 1 || (m == 1 && !cvc(stem)))
                s_.pop_back();
        }
        if (measure(s_.size()) > 1 && double_consonant(s_.size()) && s_.back() == 'l')
            s_.pop_back();
    }

private:
    struct Rule {
        std::string_view suffix;
        std::string_view replacement;
    };

    template <std::size_t N>
    void apply_first(const std::array<Rule, N>& rules, int min_measure)
    {
        for (const auto& rule : rules) {
            if (!ends(rule.suffix))
                continue;
            const std::size_t stem = s_.size() - rule.suffix.size();
            if (measure(stem) > min_measure) {
                s_.resize(stem);
                s_.append(rule.replacement);
            }
            return;
        }
    }

    bool ends(std::string_view suffix) const
    {
        return s_.size() >= suffix.size() &&
               std::string_view(s_).substr(s_.size() - suffix.size()) == suffix;
    }

    bool consonant(std::size_t i) const
    {
        switch (s_[i]) {
        case 'a':
        case 'e':
        case 'i':
        case 'o':
        case 'u':
            return false;
        case 'y':
            return i == 0 || !consonant(i - 1);
        default:
            return true;
        }
    }

    // Number of VC sequences in word[0, end).
    int measure(std::size_t end) const
    {
        int m = 0;
        std::size_t i = 0;
        while (i < end && consonant(i))
            ++i;
        while (i < end) {
            while (i < end && !consonant(i))
                ++i;
            if (i == end)
                break;
            while (i < end && consonant(i))
                ++i;
            ++m;
        }
        return m;
    }

    bool has_vowel(std::size_t end) const
    {
        for (std::size_t i = 0; i < end; ++i)
            if (!consonant(i))
                return true;
        return false;
    }

    bool double_consonant(std::size_t end) const
    {
        return end >= 2 && s_[end - 1] == s_[end - 2] && consonant(end - 1);
    }

    // consonant-vowel-consonant ending, final consonant not w, x or y
    bool cvc(std::size_t end) const
    {
        if (end < 3 || !consonant(end - 1) || consonant(end - 2) || !consonant(end - 3))
            return false;
        const char c = s_[end - 1];
        return c != 'w' && c != 'x' && c != 'y';
    }

    std::string s_;
};

}  // namespace

std::string porter_stem(std::string_view word)
{
    if (word.size() <= 2)
        return std::string(word);
    PorterWord w(word);
    w.step1a();
    w.step1b();
    w.step1c();
    w.step2();
    w.step3();
    w.step4();
    w.step5();
    return std::move(w).take();
}

}  // namespace rtfm
