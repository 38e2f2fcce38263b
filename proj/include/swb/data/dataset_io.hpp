#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "swb/data/records.hpp"
#include "swb/error.hpp"

namespace swb::data {

namespace detail {

using nlohmann::json;

inline json labels_to_json(const SwbLabels& labels) {
    json j = json::object();
    for (std::size_t d = 0; d < kDimensionCount; ++d) j[dimension_ids()[d]] = labels[d];
    return j;
}

inline SwbLabels labels_from_json(const json& j) {
    SwbLabels out;
    for (std::size_t d = 0; d < kDimensionCount; ++d) {
        const auto& key = dimension_ids()[d];
        if (!j.contains(key)) throw ParseError("labels missing dimension '" + key + "'");
        out[d] = j.at(key).get<int>();
    }
    if (j.size() != kDimensionCount) throw ParseError("labels must have exactly 8 dimensions");
    return out;
}

inline json record_to_json(const UserRecord& r) {
    const Profile& p = r.profile;
    json posts = json::array();
    for (const Post& post : r.posts) {
        posts.push_back({{"timestamp", post.timestamp},
                         {"text", post.text},
                         {"is_repost", post.is_repost},
                         {"mentions_count", post.mentions_count},
                         {"urls_count", post.urls_count},
                         {"hashtags_count", post.hashtags_count},
                         {"comments_received", post.comments_received},
                         {"reposts_received", post.reposts_received}});
    }
    return json{{"user_id", p.user_id},
                {"profile",
                 {{"gender", to_string(p.gender)},
                  {"age", p.age},
                  {"living_place", to_string(p.living_place)},
                  {"nickname", p.nickname},
                  {"description", p.description},
                  {"followers_count", p.followers_count},
                  {"followees_count", p.followees_count},
                  {"bi_followers_count", p.bi_followers_count},
                  {"statuses_count", p.statuses_count},
                  {"favourites_count", p.favourites_count},
                  {"geo_enabled", p.geo_enabled},
                  {"allow_all_comment", p.allow_all_comment},
                  {"allow_all_act_msg", p.allow_all_act_msg},
                  {"account_created_at", p.account_created_at}}},
                {"survey_time", r.survey_time},
                {"posts", posts},
                {"labels", labels_to_json(r.labels)}};
}

inline UserRecord record_from_json(const json& j) {
    UserRecord r;
    const json& jp = j.at("profile");
    r.profile.user_id = j.at("user_id").get<std::string>();
    r.profile.gender = gender_from_string(jp.at("gender").get<std::string>());
    r.profile.age = jp.at("age").get<int>();
    r.profile.living_place = living_place_from_string(jp.at("living_place").get<std::string>());
    r.profile.nickname = jp.at("nickname").get<std::string>();
    r.profile.description = jp.at("description").get<std::string>();
    r.profile.followers_count = jp.at("followers_count").get<std::int64_t>();
    r.profile.followees_count = jp.at("followees_count").get<std::int64_t>();
    r.profile.bi_followers_count = jp.at("bi_followers_count").get<std::int64_t>();
    r.profile.statuses_count = jp.at("statuses_count").get<std::int64_t>();
    r.profile.favourites_count = jp.at("favourites_count").get<std::int64_t>();
    r.profile.geo_enabled = jp.at("geo_enabled").get<bool>();
    r.profile.allow_all_comment = jp.at("allow_all_comment").get<bool>();
    r.profile.allow_all_act_msg = jp.at("allow_all_act_msg").get<bool>();
    r.profile.account_created_at = jp.at("account_created_at").get<std::int64_t>();
    r.survey_time = j.at("survey_time").get<std::int64_t>();
    for (const json& jp2 : j.at("posts")) {
        Post post;
        post.timestamp = jp2.at("timestamp").get<std::int64_t>();
        post.text = jp2.at("text").get<std::string>();
        post.is_repost = jp2.at("is_repost").get<bool>();
        post.mentions_count = jp2.at("mentions_count").get<std::int64_t>();
        post.urls_count = jp2.at("urls_count").get<std::int64_t>();
        post.hashtags_count = jp2.at("hashtags_count").get<std::int64_t>();
        post.comments_received = jp2.at("comments_received").get<std::int64_t>();
        post.reposts_received = jp2.at("reposts_received").get<std::int64_t>();
        r.posts.push_back(std::move(post));
    }
    r.labels = labels_from_json(j.at("labels"));
    return r;
}

inline json meta_to_json(const DatasetMeta& m) {
    json ranges = json::object();
    for (std::size_t d = 0; d < kDimensionCount; ++d)
        ranges[dimension_ids()[d]] = {m.label_ranges[d].min, m.label_ranges[d].max};
    return json{{"schema", m.schema_version},
                {"n_records", m.n_records},
                {"label_ranges", ranges},
                {"counts",
                 {{"female", m.n_female},
                  {"male", m.n_male},
                  {"living_place",
                   {{"first_tier", m.living_place_counts[0]},
                    {"other_city", m.living_place_counts[1]},
                    {"rural", m.living_place_counts[2]}}}}}};
}

inline DatasetMeta meta_from_json(const json& j) {
    DatasetMeta m;
    m.schema_version = j.at("schema").get<std::string>();
    if (m.schema_version != "swb-dataset/1")
        throw ParseError("unsupported dataset schema: '" + m.schema_version + "'");
    m.n_records = j.at("n_records").get<std::size_t>();
    const json& ranges = j.at("label_ranges");
    for (std::size_t d = 0; d < kDimensionCount; ++d) {
        const auto& key = dimension_ids()[d];
        if (!ranges.contains(key))
            throw ParseError("label_ranges missing dimension '" + key + "'");
        m.label_ranges[d].min = ranges.at(key).at(0).get<int>();
        m.label_ranges[d].max = ranges.at(key).at(1).get<int>();
    }
    const json& counts = j.at("counts");
    m.n_female = counts.at("female").get<std::size_t>();
    m.n_male = counts.at("male").get<std::size_t>();
    const json& lp = counts.at("living_place");
    m.living_place_counts[0] = lp.at("first_tier").get<std::size_t>();
    m.living_place_counts[1] = lp.at("other_city").get<std::size_t>();
    m.living_place_counts[2] = lp.at("rural").get<std::size_t>();
    return m;
}

}  // namespace detail

// One metadata header line, then one JSON object per record. Loading
// validates every invariant and reports the offending line or record.
inline Dataset load_dataset_stream(std::istream& in) {
    using nlohmann::json;
    Dataset ds;
    std::string line;
    long line_no = 0;
    if (!std::getline(in, line)) throw ParseError("dataset file is empty");
    ++line_no;
    try {
        ds.meta = detail::meta_from_json(json::parse(line));
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad metadata header: ") + e.what(), line_no);
    }
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            ds.records.push_back(detail::record_from_json(json::parse(line)));
        } catch (const json::exception& e) {
            throw ParseError(std::string("bad record: ") + e.what(), line_no);
        }
    }
    validate_dataset(ds);
    return ds;
}

inline Dataset load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open dataset file: " + path);
    return load_dataset_stream(in);
}

inline void write_dataset_stream(const Dataset& ds, std::ostream& out) {
    out << detail::meta_to_json(ds.meta).dump() << '\n';
    for (const auto& r : ds.records) out << detail::record_to_json(r).dump() << '\n';
}

inline void write_dataset(const Dataset& ds, const std::string& path) {
    validate_dataset(ds);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open dataset file for writing: " + path);
    write_dataset_stream(ds, out);
    out.flush();
    if (!out) throw Error("I/O failure writing dataset: " + path);
}

}  // namespace swb::data
