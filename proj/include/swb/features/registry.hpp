#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "swb/error.hpp"
#include "swb/lexicon/lexicon.hpp"

namespace swb::feat {

enum class Family : int { D = 0, B = 1, L = 2 };

inline char family_letter(Family f) {
    switch (f) {
        case Family::D: return 'D';
        case Family::B: return 'B';
        default: return 'L';
    }
}

inline Family family_from_letter(char c) {
    switch (c) {
        case 'D': case 'd': return Family::D;
        case 'B': case 'b': return Family::B;
        case 'L': case 'l': return Family::L;
        default: throw UsageError(std::string("unknown feature family: '") + c + "'");
    }
}

// Canonical per-post / per-profile behavioral feature names, fixed order.
inline const std::vector<std::string>& behavioral_feature_names() {
    static const std::vector<std::string> names = {
        "followers_count",
        "followees_count",
        "bi_followers_count",
        "followers_to_followees_ratio",
        "bi_follow_ratio",
        "statuses_count",
        "favourites_count",
        "posts_in_window",
        "repost_ratio",
        "original_posts_in_window",
        "mean_post_length",
        "mean_posts_per_day",
        "night_post_ratio",
        "weekend_post_ratio",
        "mention_ratio",
        "link_ratio",
        "hashtag_ratio",
        "emoticon_ratio",
        "mean_comments_received",
        "mean_reposts_received",
        "geo_enabled",
        "allow_all_comment",
        "allow_all_act_msg",
        "nickname_length",
        "description_length",
        "account_age_days",
    };
    return names;
}

inline const std::vector<std::string>& demographic_feature_names() {
    static const std::vector<std::string> names = {"gender", "age", "living_place"};
    return names;
}

struct RegistryEntry {
    std::string name;
    Family family;
};

// Ordered feature catalogue: 3 demographic, 26 behavioral, K linguistic
// (one per lexicon category, prefixed "L."). Families always concatenate in
// D, B, L order.
class FeatureRegistry {
public:
    static FeatureRegistry build(const lex::Lexicon* lexicon) {
        FeatureRegistry reg;
        for (const auto& n : demographic_feature_names()) reg.entries_.push_back({n, Family::D});
        for (const auto& n : behavioral_feature_names()) reg.entries_.push_back({n, Family::B});
        if (lexicon) {
            for (const auto& c : lexicon->categories())
                reg.entries_.push_back({"L." + c.name, Family::L});
            reg.linguistic_count_ = lexicon->category_count();
        }
        return reg;
    }

    const std::vector<RegistryEntry>& entries() const { return entries_; }

    std::size_t family_count(Family f) const {
        std::size_t n = 0;
        for (const auto& e : entries_)
            if (e.family == f) ++n;
        return n;
    }

    std::vector<std::string> names_for(const std::set<Family>& families) const {
        std::vector<std::string> out;
        for (const auto& e : entries_)
            if (families.count(e.family)) out.push_back(e.name);
        return out;
    }

    std::size_t linguistic_count() const { return linguistic_count_; }

private:
    std::vector<RegistryEntry> entries_;
    std::size_t linguistic_count_ = 0;
};

// Family-set helpers ("D+B+L" labels used in reports and flags).
inline std::string family_set_label(const std::set<Family>& fams) {
    std::string out;
    for (Family f : {Family::D, Family::B, Family::L}) {
        if (fams.count(f)) {
            if (!out.empty()) out += '+';
            out += family_letter(f);
        }
    }
    return out;
}

inline std::set<Family> parse_family_set(const std::string& s) {
    std::set<Family> out;
    for (char c : s) {
        if (c == '+' || c == ',' || c == ' ') continue;
        out.insert(family_from_letter(c));
    }
    if (out.empty()) throw UsageError("empty feature family set: '" + s + "'");
    return out;
}

}  // namespace swb::feat
