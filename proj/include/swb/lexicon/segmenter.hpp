#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "swb/lexicon/lexicon.hpp"
#include "swb/lexicon/utf8.hpp"

namespace swb::lex {

struct TokenStream {
    std::vector<std::string> tokens;
    std::size_t total_count() const { return tokens.size(); }
};

namespace detail {

// Forward maximum matching over an unspaced run: longest dictionary word
// first, single codepoint as fallback.
inline void max_match(const std::vector<char32_t>& run, const Lexicon& lx,
                      std::vector<std::string>& out) {
    const std::size_t cap = lx.max_word_codepoints() == 0 ? 1 : lx.max_word_codepoints();
    std::size_t i = 0;
    while (i < run.size()) {
        std::size_t best_len = 1;
        std::size_t top = std::min(cap, run.size() - i);
        for (std::size_t len = top; len >= 2; --len) {
            if (lx.vocab_contains(encode_utf8(run, i, i + len))) {
                best_len = len;
                break;
            }
        }
        out.push_back(encode_utf8(run, i, i + best_len));
        i += best_len;
    }
}

}  // namespace detail

// Tokenize text: lowercase, split on whitespace/punctuation; contiguous CJK
// runs go through dictionary maximum matching. Total function, deterministic.
inline TokenStream segment(std::string_view text, const Lexicon& lexicon) {
    TokenStream ts;
    auto cps = decode_utf8(text);
    for (auto& cp : cps) cp = ascii_lower(cp);

    std::size_t i = 0;
    const std::size_t n = cps.size();
    while (i < n) {
        if (!is_word_char(cps[i])) {
            ++i;
            continue;
        }
        if (is_cjk(cps[i])) {
            std::size_t j = i;
            while (j < n && is_cjk(cps[j])) ++j;
            std::vector<char32_t> run(cps.begin() + static_cast<long>(i),
                                      cps.begin() + static_cast<long>(j));
            detail::max_match(run, lexicon, ts.tokens);
            i = j;
        } else {
            std::size_t j = i;
            while (j < n && is_word_char(cps[j]) && !is_cjk(cps[j])) ++j;
            ts.tokens.push_back(encode_utf8(cps, i, j));
            i = j;
        }
    }
    return ts;
}

struct CategoryCounts {
    std::vector<long> counts;      // per category, index = id - 1
    std::size_t total_tokens = 0;
};

// Count category hits per token. Multi-category entries increment every
// category they declare; exact entries shadow wildcard matches.
inline CategoryCounts count_categories(const TokenStream& tokens, const Lexicon& lexicon) {
    CategoryCounts cc;
    cc.counts.assign(lexicon.category_count(), 0);
    cc.total_tokens = tokens.tokens.size();
    for (const auto& tok : tokens.tokens) {
        const std::vector<int>* cats = lexicon.lookup(tok);
        if (!cats) continue;
        for (int c : *cats) ++cc.counts[static_cast<std::size_t>(c - 1)];
    }
    return cc;
}

}  // namespace swb::lex
