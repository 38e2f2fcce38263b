#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_set>
#include <vector>

#include "swb/error.hpp"

namespace swb::data {

// The eight well-being dimensions, fixed order and abbreviations.
constexpr std::size_t kDimensionCount = 8;

inline const std::array<std::string, kDimensionCount>& dimension_ids() {
    static const std::array<std::string, kDimensionCount> ids = {
        "P.A.", "N.A.", "S.A.", "P.L.", "E.M.", "P.R.", "P.G.", "A.I."};
    return ids;
}

inline const std::array<std::string, kDimensionCount>& dimension_names() {
    static const std::array<std::string, kDimensionCount> names = {
        "positive_affect",      "negative_affect",  "self_acceptance",
        "purpose_in_life",      "environmental_mastery", "positive_relations",
        "personal_growth",      "autonomy"};
    return names;
}

inline std::size_t dimension_index(const std::string& id) {
    const auto& ids = dimension_ids();
    for (std::size_t i = 0; i < ids.size(); ++i)
        if (ids[i] == id) return i;
    throw ValidationError("unknown SWB dimension id: '" + id + "'");
}

struct SwbLabels {
    std::array<int, kDimensionCount> scores{};

    int operator[](std::size_t i) const { return scores[i]; }
    int& operator[](std::size_t i) { return scores[i]; }
    bool operator==(const SwbLabels&) const = default;
};

enum class Gender { male, female };
enum class LivingPlace { first_tier, other_city, rural };

inline std::string to_string(Gender g) { return g == Gender::male ? "male" : "female"; }
inline std::string to_string(LivingPlace p) {
    switch (p) {
        case LivingPlace::first_tier: return "first_tier";
        case LivingPlace::other_city: return "other_city";
        default: return "rural";
    }
}

inline Gender gender_from_string(const std::string& s) {
    if (s == "male") return Gender::male;
    if (s == "female") return Gender::female;
    throw ValidationError("unknown gender: '" + s + "'");
}

inline LivingPlace living_place_from_string(const std::string& s) {
    if (s == "first_tier") return LivingPlace::first_tier;
    if (s == "other_city") return LivingPlace::other_city;
    if (s == "rural") return LivingPlace::rural;
    throw ValidationError("unknown living place: '" + s + "'");
}

struct Profile {
    std::string user_id;
    Gender gender = Gender::female;
    int age = 18;
    LivingPlace living_place = LivingPlace::other_city;
    std::string nickname;
    std::string description;
    std::int64_t followers_count = 0;
    std::int64_t followees_count = 0;
    std::int64_t bi_followers_count = 0;
    std::int64_t statuses_count = 0;
    std::int64_t favourites_count = 0;
    bool geo_enabled = false;
    bool allow_all_comment = false;
    bool allow_all_act_msg = false;
    std::int64_t account_created_at = 0;  // UTC seconds

    bool operator==(const Profile&) const = default;
};

struct Post {
    std::int64_t timestamp = 0;  // UTC seconds
    std::string text;
    bool is_repost = false;
    std::int64_t mentions_count = 0;
    std::int64_t urls_count = 0;
    std::int64_t hashtags_count = 0;
    std::int64_t comments_received = 0;
    std::int64_t reposts_received = 0;

    bool operator==(const Post&) const = default;
};

struct UserRecord {
    Profile profile;
    std::vector<Post> posts;  // sorted by timestamp ascending
    std::int64_t survey_time = 0;
    SwbLabels labels;

    bool operator==(const UserRecord&) const = default;
};

struct LabelRange {
    int min = 0;
    int max = 0;
    bool operator==(const LabelRange&) const = default;
};

struct DatasetMeta {
    std::string schema_version = "swb-dataset/1";
    std::array<LabelRange, kDimensionCount> label_ranges{};
    std::size_t n_records = 0;
    std::size_t n_female = 0;
    std::size_t n_male = 0;
    std::array<std::size_t, 3> living_place_counts{};  // first_tier, other_city, rural

    bool operator==(const DatasetMeta&) const = default;
};

struct Dataset {
    DatasetMeta meta;
    std::vector<UserRecord> records;

    bool operator==(const Dataset&) const = default;
};

// Validates a single record against the schema invariants. `where` names the
// record in error messages (e.g. "record 12" or a user id).
inline void validate_record(const UserRecord& r, const DatasetMeta& meta,
                            const std::string& where) {
    const Profile& p = r.profile;
    auto fail = [&](const std::string& rule) {
        throw ValidationError(where + ": " + rule);
    };
    if (p.user_id.empty()) fail("user_id must be non-empty");
    if (p.age < 18) fail("age must be >= 18");
    if (p.followers_count < 0 || p.followees_count < 0 || p.bi_followers_count < 0 ||
        p.statuses_count < 0 || p.favourites_count < 0)
        fail("profile counts must be non-negative");
    if (p.bi_followers_count > p.followees_count)
        fail("bi_followers_count must not exceed followees_count");
    std::int64_t prev = INT64_MIN;
    for (std::size_t i = 0; i < r.posts.size(); ++i) {
        const Post& post = r.posts[i];
        if (post.timestamp < prev)
            fail("posts must be sorted by timestamp ascending (post " + std::to_string(i) + ")");
        prev = post.timestamp;
        if (post.timestamp < p.account_created_at)
            fail("account_created_at must precede every post (post " + std::to_string(i) + ")");
        if (post.mentions_count < 0 || post.urls_count < 0 || post.hashtags_count < 0 ||
            post.comments_received < 0 || post.reposts_received < 0)
            fail("post counts must be non-negative (post " + std::to_string(i) + ")");
        if (post.text.empty() && !post.is_repost)
            fail("post text may be empty only for reposts (post " + std::to_string(i) + ")");
    }
    if (!r.posts.empty() && r.survey_time < r.posts.front().timestamp)
        fail("survey_time must fall within or after the posts' time span");
    for (std::size_t d = 0; d < kDimensionCount; ++d) {
        const LabelRange& lr = meta.label_ranges[d];
        if (lr.min > lr.max) fail("label range inverted for " + dimension_ids()[d]);
        if (r.labels[d] < lr.min || r.labels[d] > lr.max)
            fail("label " + dimension_ids()[d] + "=" + std::to_string(r.labels[d]) +
                 " outside declared range [" + std::to_string(lr.min) + "," +
                 std::to_string(lr.max) + "]");
    }
}

// Full dataset validation: per-record invariants, unique ids, metadata counts.
inline void validate_dataset(const Dataset& ds) {
    std::unordered_set<std::string> seen;
    std::size_t female = 0, male = 0;
    std::array<std::size_t, 3> places{};
    for (std::size_t i = 0; i < ds.records.size(); ++i) {
        const UserRecord& r = ds.records[i];
        validate_record(r, ds.meta, "record " + std::to_string(i));
        if (!seen.insert(r.profile.user_id).second)
            throw ValidationError("duplicate user_id: '" + r.profile.user_id + "'");
        if (r.profile.gender == Gender::female) ++female; else ++male;
        ++places[static_cast<std::size_t>(r.profile.living_place)];
    }
    if (ds.meta.n_records != ds.records.size())
        throw ValidationError("metadata n_records=" + std::to_string(ds.meta.n_records) +
                              " but body has " + std::to_string(ds.records.size()) +
                              " records");
    if (ds.meta.n_female != female || ds.meta.n_male != male)
        throw ValidationError("metadata gender counts do not match records");
    if (ds.meta.living_place_counts != places)
        throw ValidationError("metadata living-place counts do not match records");
}

// Users passing the activity bar (statuses_count > threshold).
inline Dataset filter_active(const Dataset& ds, std::int64_t threshold = 500) {
    Dataset out;
    out.meta = ds.meta;
    for (const auto& r : ds.records)
        if (r.profile.statuses_count > threshold) out.records.push_back(r);
    out.meta.n_records = out.records.size();
    out.meta.n_female = out.meta.n_male = 0;
    out.meta.living_place_counts = {0, 0, 0};
    for (const auto& r : out.records) {
        if (r.profile.gender == Gender::female) ++out.meta.n_female; else ++out.meta.n_male;
        ++out.meta.living_place_counts[static_cast<std::size_t>(r.profile.living_place)];
    }
    return out;
}

}  // namespace swb::data
