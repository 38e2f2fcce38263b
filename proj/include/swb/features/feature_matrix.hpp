#pragma once

#include <charconv>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "swb/data/records.hpp"
#include "swb/features/extractors.hpp"
#include "swb/features/registry.hpp"
#include "swb/numerics/matrix.hpp"

namespace swb::feat {

struct FeatureMatrix {
    std::vector<std::string> user_ids;       // row order
    std::vector<std::string> column_names;   // registry order
    num::DenseMatrix values;                 // rows x columns
    WindowSpec window;

    std::size_t rows() const { return values.rows(); }
    std::size_t cols() const { return values.cols(); }

    std::size_t column_index(const std::string& name) const {
        for (std::size_t j = 0; j < column_names.size(); ++j)
            if (column_names[j] == name) return j;
        throw ValidationError("feature matrix has no column '" + name + "'");
    }
};

// Extract the selected families for every record, in dataset order.
inline FeatureMatrix build_matrix(const data::Dataset& dataset,
                                  const std::set<Family>& families,
                                  const WindowSpec& window,
                                  const lex::Lexicon* lexicon) {
    if (families.empty()) throw ValidationError("at least one feature family required");
    if (families.count(Family::L) && lexicon == nullptr)
        throw ValidationError("linguistic features requested but no lexicon given");

    FeatureRegistry registry = FeatureRegistry::build(lexicon);
    std::vector<std::string> names = registry.names_for(families);

    FeatureMatrix fm;
    fm.column_names = names;
    fm.window = window;
    fm.values = num::DenseMatrix(dataset.records.size(), names.size());
    fm.user_ids.reserve(dataset.records.size());

    for (std::size_t i = 0; i < dataset.records.size(); ++i) {
        const auto& rec = dataset.records[i];
        fm.user_ids.push_back(rec.profile.user_id);
        std::size_t j = 0;
        if (families.count(Family::D)) {
            auto d = extract_demographic(rec.profile);
            for (double x : d) fm.values(i, j++) = x;
        }
        if (families.count(Family::B)) {
            auto b = extract_behavioral(rec, window);
            for (double x : b) fm.values(i, j++) = x;
        }
        if (families.count(Family::L)) {
            auto l = extract_linguistic(rec, window, *lexicon);
            for (double x : l) fm.values(i, j++) = x;
        }
    }
    return fm;
}

namespace detail {

inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace detail

// CSV export: header "user_id,<names...>", shortest round-trip doubles.
inline void write_feature_csv(const FeatureMatrix& fm, std::ostream& out) {
    out << "user_id";
    for (const auto& n : fm.column_names) out << ',' << n;
    out << '\n';
    for (std::size_t i = 0; i < fm.rows(); ++i) {
        out << fm.user_ids[i];
        for (std::size_t j = 0; j < fm.cols(); ++j)
            out << ',' << detail::format_double(fm.values(i, j));
        out << '\n';
    }
}

inline void write_feature_csv(const FeatureMatrix& fm, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open feature CSV for writing: " + path);
    write_feature_csv(fm, out);
    out.flush();
    if (!out) throw Error("I/O failure writing feature CSV: " + path);
}

inline FeatureMatrix load_feature_csv(std::istream& in) {
    FeatureMatrix fm;
    std::string line;
    long line_no = 0;
    if (!std::getline(in, line)) throw ParseError("feature CSV is empty");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> header;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        header.push_back(line.substr(start, comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (header.empty() || header[0] != "user_id")
        throw ParseError("feature CSV header must start with user_id", 1);
    fm.column_names.assign(header.begin() + 1, header.end());

    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::size_t pos = 0, field = 0;
        while (true) {
            std::size_t comma = line.find(',', pos);
            std::string cell = line.substr(pos, comma - pos);
            if (field == 0) {
                fm.user_ids.push_back(cell);
            } else {
                double v = 0.0;
                auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
                if (res.ec != std::errc() || res.ptr != cell.data() + cell.size())
                    throw ParseError("bad number '" + cell + "'", line_no);
                row.push_back(v);
            }
            ++field;
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (row.size() != fm.column_names.size())
            throw ParseError("row has " + std::to_string(row.size()) + " values, expected " +
                                 std::to_string(fm.column_names.size()),
                             line_no);
        rows.push_back(std::move(row));
    }
    fm.values = num::DenseMatrix(rows.size(), fm.column_names.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < fm.column_names.size(); ++j) fm.values(i, j) = rows[i][j];
    return fm;
}

inline FeatureMatrix load_feature_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open feature CSV: " + path);
    return load_feature_csv(in);
}

}  // namespace swb::feat
