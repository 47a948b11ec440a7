#include "table.hpp"

#include <mpfr.h>

#include <cmath>
#include <cstdio>

namespace esn::cli {

namespace {

std::string non_finite(bool nan, bool negative) {
    if (nan) return "nan";
    return negative ? "-inf" : "inf";
}

bool json_number_ok(const std::string& s) {
    return s != "nan" && s != "inf" && s != "-inf";
}

void json_string(std::ostream& os, const std::string& s) {
    os << '"';
    for (char c : s) {
        switch (c) {
        case '"': os << "\\\""; break;
        case '\\': os << "\\\\"; break;
        case '\n': os << "\\n"; break;
        case '\t': os << "\\t"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                os << buf;
            } else {
                os << c;
            }
        }
    }
    os << '"';
}

void json_cell(std::ostream& os, const Cell& c) {
    switch (c.kind) {
    case Cell::Kind::Number: os << (json_number_ok(c.text) ? c.text : "null"); break;
    case Cell::Kind::Bool: os << c.text; break;
    case Cell::Kind::Text: json_string(os, c.text); break;
    case Cell::Kind::Empty: os << "null"; break;
    }
}

} // namespace

std::string format_number(double v) {
    if (!std::isfinite(v)) return non_finite(std::isnan(v), v < 0);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_number(const mp_real& v) {
    mpfr_srcptr p = v.backend().data();
    if (!mpfr_number_p(p)) return non_finite(mpfr_nan_p(p), mpfr_sgn(p) < 0);
    char buf[128];
    mpfr_snprintf(buf, sizeof buf, "%.17Rg", p);
    return buf;
}

Cell Cell::number(double v) { return {Kind::Number, format_number(v)}; }
Cell Cell::number(const mp_real& v) { return {Kind::Number, format_number(v)}; }
Cell Cell::integer(long long v) { return {Kind::Number, std::to_string(v)}; }
Cell Cell::str(std::string s) { return {Kind::Text, std::move(s)}; }
Cell Cell::boolean(bool b) { return {Kind::Bool, b ? "true" : "false"}; }

void write_csv(std::ostream& os, const Table& t) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i].text;
        os << '\n';
    }
}

void write_json_object(std::ostream& os, const Summary& s) {
    os << '{';
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) os << ',';
        json_string(os, s[i].first);
        os << ':';
        json_cell(os, s[i].second);
    }
    os << '}';
}

void write_json(std::ostream& os, const Summary& header, const Table& t, const Summary* summary) {
    os << '{';
    for (const auto& [key, cell] : header) {
        json_string(os, key);
        os << ':';
        json_cell(os, cell);
        os << ',';
    }
    os << "\"columns\":[";
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (i) os << ',';
        json_string(os, t.columns[i]);
    }
    os << "],\"rows\":[";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        os << (r ? ",\n[" : "\n[");
        for (std::size_t i = 0; i < t.rows[r].size(); ++i) {
            if (i) os << ',';
            json_cell(os, t.rows[r][i]);
        }
        os << ']';
    }
    os << ']';
    if (summary) {
        os << ",\"summary\":";
        write_json_object(os, *summary);
    }
    os << "}\n";
}

} // namespace esn::cli
