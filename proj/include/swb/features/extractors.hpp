#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "swb/data/records.hpp"
#include "swb/features/detectors.hpp"
#include "swb/features/registry.hpp"
#include "swb/lexicon/segmenter.hpp"
#include "swb/lexicon/utf8.hpp"

namespace swb::feat {

// Posts inside [survey_time - before, survey_time + after], both ends
// inclusive. Durations are seconds.
struct WindowSpec {
    std::int64_t before = 7 * 86400;
    std::int64_t after = 7 * 86400;

    bool contains(std::int64_t center, std::int64_t t) const {
        return t >= center - before && t <= center + after;
    }
    double span_days() const {
        return static_cast<double>(before + after) / 86400.0;
    }
};

inline WindowSpec window_from_days(double before_days, double after_days) {
    if (before_days < 0 || after_days < 0)
        throw ValidationError("window durations must be non-negative");
    WindowSpec w;
    w.before = static_cast<std::int64_t>(before_days * 86400.0);
    w.after = static_cast<std::int64_t>(after_days * 86400.0);
    return w;
}

// gender -> {0,1}, age in years, living place -> {3,2,1} by population density.
inline std::array<double, 3> extract_demographic(const data::Profile& p) {
    double gender = p.gender == data::Gender::male ? 1.0 : 0.0;
    double place = 1.0;
    switch (p.living_place) {
        case data::LivingPlace::first_tier: place = 3.0; break;
        case data::LivingPlace::other_city: place = 2.0; break;
        case data::LivingPlace::rural: place = 1.0; break;
    }
    return {gender, static_cast<double>(p.age), place};
}

namespace detail {

inline int utc_hour(std::int64_t t) {
    std::int64_t s = ((t % 86400) + 86400) % 86400;
    return static_cast<int>(s / 3600);
}

// 0=Sunday..6=Saturday; the epoch (1970-01-01) was a Thursday.
inline int utc_weekday(std::int64_t t) {
    std::int64_t days = t / 86400;
    if (t < 0 && t % 86400 != 0) --days;
    return static_cast<int>(((days + 4) % 7 + 7) % 7);
}

inline bool is_night(std::int64_t t) { return utc_hour(t) < 6; }  // 00:00-06:00
inline bool is_weekend(std::int64_t t) {
    int wd = utc_weekday(t);
    return wd == 0 || wd == 6;
}

}  // namespace detail

// The canonical 26 behavioral features, in registry order. Ratios with an
// empty denominator are 0, which keeps the matrix dense.
inline std::vector<double> extract_behavioral(const data::UserRecord& r,
                                              const WindowSpec& window) {
    const data::Profile& p = r.profile;
    std::vector<const data::Post*> in_window;
    for (const auto& post : r.posts)
        if (window.contains(r.survey_time, post.timestamp)) in_window.push_back(&post);

    const double n_win = static_cast<double>(in_window.size());
    auto ratio = [n_win](double num) { return n_win > 0 ? num / n_win : 0.0; };

    double reposts = 0, night = 0, weekend = 0;
    double with_mention = 0, with_link = 0, with_hashtag = 0, with_emoticon = 0;
    double total_len = 0, total_comments = 0, total_reposts_recv = 0;
    for (const auto* post : in_window) {
        if (post->is_repost) ++reposts;
        if (detail::is_night(post->timestamp)) ++night;
        if (detail::is_weekend(post->timestamp)) ++weekend;
        if (count_mentions(post->text) > 0) ++with_mention;
        if (count_urls(post->text) > 0) ++with_link;
        if (count_hashtags(post->text) > 0) ++with_hashtag;
        if (count_emoticons(post->text) > 0) ++with_emoticon;
        total_len += static_cast<double>(lex::codepoint_count(post->text));
        total_comments += static_cast<double>(post->comments_received);
        total_reposts_recv += static_cast<double>(post->reposts_received);
    }

    const double span_days = window.span_days();
    const double followees = static_cast<double>(p.followees_count);

    std::vector<double> v;
    v.reserve(26);
    v.push_back(static_cast<double>(p.followers_count));
    v.push_back(followees);
    v.push_back(static_cast<double>(p.bi_followers_count));
    v.push_back(followees > 0 ? static_cast<double>(p.followers_count) / followees : 0.0);
    v.push_back(followees > 0 ? static_cast<double>(p.bi_followers_count) / followees : 0.0);
    v.push_back(static_cast<double>(p.statuses_count));
    v.push_back(static_cast<double>(p.favourites_count));
    v.push_back(n_win);
    v.push_back(ratio(reposts));
    v.push_back(n_win - reposts);
    v.push_back(ratio(total_len));
    v.push_back(span_days > 0 ? n_win / span_days : 0.0);
    v.push_back(ratio(night));
    v.push_back(ratio(weekend));
    v.push_back(ratio(with_mention));
    v.push_back(ratio(with_link));
    v.push_back(ratio(with_hashtag));
    v.push_back(ratio(with_emoticon));
    v.push_back(ratio(total_comments));
    v.push_back(ratio(total_reposts_recv));
    v.push_back(p.geo_enabled ? 1.0 : 0.0);
    v.push_back(p.allow_all_comment ? 1.0 : 0.0);
    v.push_back(p.allow_all_act_msg ? 1.0 : 0.0);
    v.push_back(static_cast<double>(lex::codepoint_count(p.nickname)));
    v.push_back(static_cast<double>(lex::codepoint_count(p.description)));
    v.push_back(static_cast<double>(r.survey_time - p.account_created_at) / 86400.0);
    return v;
}

// Category proportions over all in-window tokens: concatenate in-window post
// texts, segment, count, divide by total tokens. All zero when the window is
// empty of tokens.
inline std::vector<double> extract_linguistic(const data::UserRecord& r,
                                              const WindowSpec& window,
                                              const lex::Lexicon& lexicon) {
    lex::CategoryCounts total;
    total.counts.assign(lexicon.category_count(), 0);
    for (const auto& post : r.posts) {
        if (!window.contains(r.survey_time, post.timestamp)) continue;
        auto tokens = lex::segment(post.text, lexicon);
        auto counts = lex::count_categories(tokens, lexicon);
        for (std::size_t c = 0; c < counts.counts.size(); ++c)
            total.counts[c] += counts.counts[c];
        total.total_tokens += counts.total_tokens;
    }
    std::vector<double> v(lexicon.category_count(), 0.0);
    if (total.total_tokens > 0) {
        const double denom = static_cast<double>(total.total_tokens);
        for (std::size_t c = 0; c < v.size(); ++c)
            v[c] = static_cast<double>(total.counts[c]) / denom;
    }
    return v;
}

}  // namespace swb::feat
