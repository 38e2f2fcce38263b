#pragma once

#include <string>
#include <string_view>

namespace swb::feat {

// Plain-text pattern counters used for post content features. Bit-stable on
// purpose: no locale, no regex.

// Bracketed emoticon tokens in the Weibo style: "[smile]".
inline long count_emoticons(std::string_view text) {
    long n = 0;
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] == '[') {
            std::size_t close = text.find(']', i + 1);
            if (close != std::string_view::npos && close > i + 1) {
                ++n;
                i = close + 1;
                continue;
            }
        }
        ++i;
    }
    return n;
}

// "@name" mentions: '@' followed by a non-space character.
inline long count_mentions(std::string_view text) {
    long n = 0;
    for (std::size_t i = 0; i + 1 < text.size(); ++i)
        if (text[i] == '@' && text[i + 1] != ' ' && text[i + 1] != '\t' &&
            text[i + 1] != '\n')
            ++n;
    return n;
}

// "#topic#" hashtags: paired '#' with at least one character between.
inline long count_hashtags(std::string_view text) {
    long n = 0;
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] == '#') {
            std::size_t close = text.find('#', i + 1);
            if (close != std::string_view::npos && close > i + 1) {
                ++n;
                i = close + 1;
                continue;
            }
        }
        ++i;
    }
    return n;
}

// Links: whitespace-delimited tokens with an "http" prefix.
inline long count_urls(std::string_view text) {
    long n = 0;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == '\n')) ++i;
        std::size_t j = i;
        while (j < text.size() && text[j] != ' ' && text[j] != '\t' && text[j] != '\n') ++j;
        if (j - i >= 4 && text.substr(i, 4) == "http") ++n;
        i = j;
    }
    return n;
}

}  // namespace swb::feat
