#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "conesob/acceptance.hpp"
#include "conesob/blowdown.hpp"
#include "conesob/catalog.hpp"

namespace conesob {

using Json = nlohmann::ordered_json;

inline constexpr const char* report_schema = "cone-sobolev/1";

enum class Format { json, csv, text };

[[nodiscard]] inline std::optional<Format> format_from_string(const std::string& s)
{
    if (s == "json") return Format::json;
    if (s == "csv") return Format::csv;
    if (s == "text") return Format::text;
    return std::nullopt;
}

// Every document: schema, kind, scalar fields, then an optional "rows" array
// of flat objects (one CSV line each).
[[nodiscard]] inline Json make_document(const std::string& kind)
{
    Json d;
    d["schema"] = report_schema;
    d["kind"] = kind;
    return d;
}

namespace detail {

inline Json number(double v)
{
    if (!std::isfinite(v)) return nullptr;
    return v;
}

inline Json numbers(const std::vector<double>& v)
{
    Json a = Json::array();
    for (double x : v) a.push_back(number(x));
    return a;
}

// Shortest round-trip representation.
inline std::string shortest(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

inline std::string six(double v)
{
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline std::string csv_cell(const Json& v)
{
    if (v.is_null()) return "";
    if (v.is_number_float()) return shortest(v.get<double>());
    if (v.is_number()) return v.dump();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    }
    return csv_cell(Json(v.dump()));
}

inline std::string text_cell(const Json& v)
{
    if (v.is_null()) return "-";
    if (v.is_number_float()) return six(v.get<double>());
    if (v.is_number()) return v.dump();
    if (v.is_boolean()) return v.get<bool>() ? "yes" : "no";
    if (v.is_string()) return v.get<std::string>();
    if (v.is_array()) {
        std::string s;
        for (const Json& x : v) s += (s.empty() ? "" : ", ") + text_cell(x);
        return "[" + s + "]";
    }
    std::string s;
    for (const auto& [k, x] : v.items()) s += (s.empty() ? "" : ", ") + k + "=" + text_cell(x);
    return "{" + s + "}";
}

inline std::vector<std::string> row_columns(const Json& rows)
{
    std::vector<std::string> cols;
    for (const Json& r : rows)
        for (const auto& [k, _] : r.items())
            if (std::find(cols.begin(), cols.end(), k) == cols.end()) cols.push_back(k);
    return cols;
}

} // namespace detail

// ---------------------------------------------------------------- builders

[[nodiscard]] inline Json to_json(const Criterion& c)
{
    Json j;
    j["id"] = c.id;
    j["section"] = c.section;
    j["title"] = c.title;
    j["measured"] = detail::number(c.measured);
    j["tolerance"] = detail::number(c.tolerance);
    j["comparison"] = c.comparison;
    j["pass"] = c.pass;
    Json d = Json::object();
    for (const auto& [k, v] : c.details) d[k] = detail::number(v);
    j["details"] = d;
    if (!c.note.empty()) j["note"] = c.note;
    return j;
}

[[nodiscard]] inline Json criteria_document(const std::vector<Criterion>& cs, std::uint64_t seed)
{
    Json d = make_document("acceptance");
    d["seed"] = seed;
    Json sections = Json::array();
    int passed = 0;
    for (const Criterion& c : cs) {
        if (std::find(sections.begin(), sections.end(), Json(c.section)) == sections.end()) sections.push_back(c.section);
        passed += c.pass ? 1 : 0;
    }
    d["sections"] = sections;
    d["passed"] = passed;
    d["total"] = static_cast<int>(cs.size());
    Json rows = Json::array();
    for (const Criterion& c : cs) rows.push_back(to_json(c));
    d["rows"] = rows;
    return d;
}

[[nodiscard]] inline Json to_json(const BlowdownReport& r)
{
    Json d = make_document("blowdown");
    d["family"] = r.family;
    d["space"] = r.space;
    d["radii"] = detail::numbers(r.radii);
    d["ratio_q"] = detail::numbers(r.ratio_q);
    d["ratio_r"] = detail::numbers(r.ratio_r);
    d["ratio_p"] = detail::numbers(r.ratio_p);
    if (!r.ratio_support.empty()) d["ratio_support"] = detail::numbers(r.ratio_support);
    if (!r.ratio_entropy.empty()) d["ratio_entropy"] = detail::numbers(r.ratio_entropy);
    d["q_exponent"] = detail::number(r.q_exponent);
    d["limit_q"] = detail::number(r.limit_q);
    d["limit_r"] = detail::number(r.limit_r);
    d["limit_p"] = detail::number(r.limit_p);
    d["limit_support"] = detail::number(r.limit_support);
    d["limit_entropy"] = detail::number(r.limit_entropy);
    d["cone_q"] = detail::number(r.cone_q);
    d["cone_r"] = detail::number(r.cone_r);
    d["cone_p"] = detail::number(r.cone_p);
    d["converged"] = r.converged;
    d["attained_avr"] = detail::number(r.attained_avr);
    d["limit_quotient"] = detail::number(r.limit_quotient);
    d["k_realized"] = detail::number(r.k_realized);
    d["constant"] = detail::number(r.constant);
    d["avr_bound"] = detail::number(r.avr_bound);
    d["declared_avr"] = detail::number(r.declared_avr);
    d["liminf_l"] = r.liminf_l ? detail::number(*r.liminf_l) : Json(nullptr);
    d["limsup_L"] = r.limsup_L ? detail::number(*r.limsup_L) : Json(nullptr);
    d["verdict"] = r.verdict;
    d["notes"] = r.notes;
    Json rows = Json::array();
    for (std::size_t i = 0; i < r.radii.size(); ++i) {
        Json row;
        row["radius"] = r.radii[i];
        row["ratio_q"] = detail::number(r.ratio_q[i]);
        if (!r.ratio_r.empty()) row["ratio_r"] = detail::number(r.ratio_r[i]);
        row["ratio_p"] = detail::number(r.ratio_p[i]);
        if (!r.ratio_support.empty()) row["ratio_support"] = detail::number(r.ratio_support[i]);
        if (!r.ratio_entropy.empty()) row["ratio_entropy"] = detail::number(r.ratio_entropy[i]);
        rows.push_back(row);
    }
    d["rows"] = rows;
    return d;
}

[[nodiscard]] inline Json to_json(const MtBlowdownReport& r)
{
    Json d = make_document("moser_trudinger_blowdown");
    d["space"] = r.space;
    d["n"] = r.n;
    d["constant"] = detail::number(r.constant);
    d["threshold"] = detail::number(r.threshold);
    d["eps"] = detail::number(r.eps);
    d["avr_bound"] = detail::number(r.avr_bound);
    d["normalized"] = r.normalized;
    d["last_over_first"] = detail::number(r.last_over_first);
    d["tail_spread"] = detail::number(r.tail_spread);
    d["tail_exponent"] = detail::number(r.tail_exponent);
    d["verdict"] = r.verdict;
    Json rows = Json::array();
    for (std::size_t i = 0; i < r.ks.size(); ++i) {
        Json row;
        row["k"] = r.ks[i];
        row["value"] = detail::number(r.values[i]);
        row["log_value"] = detail::number(r.log_values[i]);
        row["energy"] = detail::number(r.energies[i]);
        rows.push_back(row);
    }
    d["rows"] = rows;
    return d;
}

struct ConstantRow {
    std::string family;
    std::vector<std::pair<std::string, double>> parameters;
    ConstantResult result;
};

[[nodiscard]] inline Json constants_document(const std::vector<ConstantRow>& rows)
{
    Json d = make_document("constants");
    Json out = Json::array();
    for (const ConstantRow& c : rows) {
        Json row;
        row["family"] = c.family;
        for (const auto& [k, v] : c.parameters) row[k] = detail::number(v);
        row["value"] = detail::number(c.result.value);
        row["provenance"] = to_string(c.result.provenance);
        for (const auto& [k, v] : c.result.components) row[k] = detail::number(v);
        out.push_back(row);
    }
    d["rows"] = out;
    return d;
}

// ---------------------------------------------------------------- renderers

[[nodiscard]] inline std::string render_json(const Json& d) { return d.dump(2) + "\n"; }

// One line per row; documents without rows give a single line of scalars.
[[nodiscard]] inline std::string render_csv(const Json& d)
{
    Json rows = Json::array();
    if (d.contains("rows")) {
        rows = d["rows"];
    } else {
        Json row;
        for (const auto& [k, v] : d.items())
            if (k != "schema" && !v.is_structured()) row[k] = v;
        rows.push_back(row);
    }
    const std::vector<std::string> cols = detail::row_columns(rows);
    std::string out;
    for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cols[i];
    out += "\n";
    for (const Json& r : rows) {
        for (std::size_t i = 0; i < cols.size(); ++i) {
            if (i) out += ",";
            if (r.contains(cols[i])) out += detail::csv_cell(r[cols[i]]);
        }
        out += "\n";
    }
    return out;
}

[[nodiscard]] inline std::string render_text(const Json& d)
{
    std::string out;
    for (const auto& [k, v] : d.items()) {
        if (k == "schema" || k == "rows") continue;
        if (v.is_array() && v.size() > 4 && k != "notes" && k != "sections") continue;  // shown in the table
        out += k + ": " + detail::text_cell(v) + "\n";
    }
    if (!d.contains("rows") || d["rows"].empty()) return out;
    const Json& rows = d["rows"];
    std::vector<std::string> cols;
    for (const std::string& c : detail::row_columns(rows))
        if (c != "details") cols.push_back(c);
    std::vector<std::vector<std::string>> cells;
    std::vector<std::size_t> width(cols.size());
    for (std::size_t i = 0; i < cols.size(); ++i) width[i] = cols[i].size();
    for (const Json& r : rows) {
        std::vector<std::string> line;
        for (std::size_t i = 0; i < cols.size(); ++i) {
            line.push_back(r.contains(cols[i]) ? detail::text_cell(r[cols[i]]) : "");
            width[i] = std::max(width[i], line.back().size());
        }
        cells.push_back(std::move(line));
    }
    const auto emit = [&](const std::vector<std::string>& line) {
        for (std::size_t i = 0; i < line.size(); ++i) {
            out += line[i];
            if (i + 1 < line.size()) out += std::string(width[i] - line[i].size() + 2, ' ');
        }
        out.erase(out.find_last_not_of(' ') + 1);
        out += "\n";
    };
    out += "\n";
    emit(cols);
    for (const auto& line : cells) emit(line);
    return out;
}

[[nodiscard]] inline std::string render(const Json& d, Format f)
{
    switch (f) {
    case Format::json: return render_json(d);
    case Format::csv: return render_csv(d);
    case Format::text: return render_text(d);
    }
    return render_json(d);
}

} // namespace conesob
