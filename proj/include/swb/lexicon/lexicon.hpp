#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "swb/error.hpp"
#include "swb/lexicon/utf8.hpp"

namespace swb::lex {

// LIWC-style category dictionary. Categories are dense 1..K; entries map a
// word (or a `prefix*` wildcard) to one or more categories.
class Lexicon {
public:
    struct Category {
        int id;
        std::string name;
    };

    const std::vector<Category>& categories() const { return categories_; }
    std::size_t category_count() const { return categories_.size(); }

    const std::string& category_name(int id) const { return categories_[id - 1].name; }

    bool has_exact(const std::string& word) const { return exact_.count(word) > 0; }

    // Categories for a token: exact entry wins; otherwise the longest
    // matching wildcard prefix. Empty result means no entry.
    const std::vector<int>* lookup(const std::string& token) const {
        auto it = exact_.find(token);
        if (it != exact_.end()) return &it->second;
        if (!wildcard_.empty() && token.size() >= min_wildcard_len_) {
            std::size_t top = std::min(token.size(), max_wildcard_len_);
            for (std::size_t len = top; len >= min_wildcard_len_; --len) {
                auto wit = wildcard_.find(token.substr(0, len));
                if (wit != wildcard_.end()) return &wit->second;
            }
        }
        return nullptr;
    }

    // Dictionary words (exact entries only) as codepoints, grouped by length,
    // for maximum matching over unspaced runs.
    bool vocab_contains(const std::string& word) const { return exact_.count(word) > 0; }
    std::size_t max_word_codepoints() const { return max_word_cps_; }

    // Exact (non-wildcard) words per category id; used by corpus synthesis.
    std::vector<std::string> exact_words_in_category(int id) const {
        std::vector<std::string> out;
        for (const auto& [word, cats] : exact_)
            if (std::find(cats.begin(), cats.end(), id) != cats.end()) out.push_back(word);
        std::sort(out.begin(), out.end());
        return out;
    }

    std::size_t entry_count() const { return exact_.size() + wildcard_.size(); }
    std::size_t wildcard_count() const { return wildcard_.size(); }

    void add_category(int id, const std::string& name) {
        for (const auto& c : categories_) {
            if (c.id == id) throw ParseError("duplicate category id " + std::to_string(id));
            if (c.name == name) throw ParseError("duplicate category name '" + name + "'");
        }
        categories_.push_back({id, name});
    }

    void add_entry(const std::string& raw_word, std::vector<int> cats) {
        for (int c : cats)
            if (c < 1 || static_cast<std::size_t>(c) > categories_.size())
                throw ParseError("entry '" + raw_word + "' references unknown category " +
                                 std::to_string(c));
        std::sort(cats.begin(), cats.end());
        cats.erase(std::unique(cats.begin(), cats.end()), cats.end());
        if (!raw_word.empty() && raw_word.back() == '*') {
            std::string prefix = raw_word.substr(0, raw_word.size() - 1);
            if (prefix.empty()) throw ParseError("bare '*' entry is not a word");
            wildcard_[prefix] = std::move(cats);
            min_wildcard_len_ = std::min(min_wildcard_len_, prefix.size());
            max_wildcard_len_ = std::max(max_wildcard_len_, prefix.size());
        } else {
            exact_[raw_word] = std::move(cats);
            max_word_cps_ = std::max(max_word_cps_, codepoint_count(raw_word));
        }
    }

    void finalize() {
        if (categories_.empty()) throw ParseError("lexicon has no categories");
        std::sort(categories_.begin(), categories_.end(),
                  [](const Category& a, const Category& b) { return a.id < b.id; });
        for (std::size_t i = 0; i < categories_.size(); ++i)
            if (categories_[i].id != static_cast<int>(i) + 1)
                throw ParseError("category ids must be dense 1..K; got id " +
                                 std::to_string(categories_[i].id) + " at position " +
                                 std::to_string(i + 1));
    }

private:
    std::vector<Category> categories_;
    std::unordered_map<std::string, std::vector<int>> exact_;
    std::unordered_map<std::string, std::vector<int>> wildcard_;
    std::size_t max_word_cps_ = 0;
    std::size_t min_wildcard_len_ = std::string::npos;
    std::size_t max_wildcard_len_ = 0;
};

// Parses the `.dic` format:
//
//   %
//   1<TAB>posemo
//   2<TAB>negemo
//   %
//   happy<TAB>1
//   happ*<TAB>1
//   upset<TAB>2
//
// Category header between two `%` lines, one `id<TAB>name` per line, then
// one entry per line: `word<TAB>id[<TAB>id...]`. Blank lines and lines
// starting with `#` are ignored.
inline Lexicon parse_lexicon_stream(std::istream& in) {
    Lexicon lx;
    std::string line;
    long line_no = 0;
    int percent_seen = 0;
    bool categories_done = false;

    auto split_tabs = [](const std::string& s) {
        std::vector<std::string> parts;
        std::size_t start = 0;
        while (true) {
            std::size_t tab = s.find('\t', start);
            if (tab == std::string::npos) {
                parts.push_back(s.substr(start));
                break;
            }
            parts.push_back(s.substr(start, tab - start));
            start = tab + 1;
        }
        return parts;
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (line == "%") {
            ++percent_seen;
            if (percent_seen == 2) {
                if (lx.categories().empty())
                    throw ParseError("empty category block", line_no);
                categories_done = true;
            }
            continue;
        }
        auto parts = split_tabs(line);
        if (!categories_done) {
            if (percent_seen != 1)
                throw ParseError("expected '%' to open the category block", line_no);
            if (parts.size() != 2)
                throw ParseError("category line must be id<TAB>name", line_no);
            int id = 0;
            try {
                id = std::stoi(parts[0]);
            } catch (...) {
                throw ParseError("category id is not an integer: '" + parts[0] + "'", line_no);
            }
            try {
                lx.add_category(id, parts[1]);
            } catch (const ParseError& e) {
                throw ParseError(std::string(e.what()), line_no);
            }
        } else {
            if (parts.size() < 2)
                throw ParseError("entry line must be word<TAB>id[<TAB>id...]", line_no);
            std::vector<int> cats;
            for (std::size_t i = 1; i < parts.size(); ++i) {
                try {
                    cats.push_back(std::stoi(parts[i]));
                } catch (...) {
                    throw ParseError("category id is not an integer: '" + parts[i] + "'",
                                     line_no);
                }
            }
            try {
                lx.add_entry(parts[0], std::move(cats));
            } catch (const ParseError& e) {
                throw ParseError(std::string(e.what()), line_no);
            }
        }
    }
    if (!categories_done) throw ParseError("missing category block ('%' header)");
    lx.finalize();
    return lx;
}

inline Lexicon parse_lexicon(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open lexicon file: " + path);
    return parse_lexicon_stream(in);
}

}  // namespace swb::lex
