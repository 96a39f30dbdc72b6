#pragma once

// Row-oriented output for the CLI: CSV with a header row, or JSON lines
// (one object per row).  Both modes carry the same data; reals are printed
// with 12 significant digits in both, so parsed values round-trip equal.
// Serialization is fully deterministic: no locale, no pointer ordering,
// no timestamps.

#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace floorprimes {

enum class OutputFormat { csv, jsonl };

inline std::optional<OutputFormat> output_format_from_string(std::string_view s) {
    if (s == "csv") return OutputFormat::csv;
    if (s == "jsonl" || s == "json") return OutputFormat::jsonl;
    return std::nullopt;
}

// null | bool | unsigned | signed | real | text
using OutputValue =
    std::variant<std::monostate, bool, std::uint64_t, std::int64_t, long double, std::string>;

struct OutputRow {
    std::vector<std::pair<std::string, OutputValue>> cols;
};

// 12 significant digits, shortest %g form; the single formatting rule for
// every real the CLI emits.
inline std::string format_real(long double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12Lg", v);
    return buf;
}

namespace detail {

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::string json_escape(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
    return out;
}

inline std::string value_text(const OutputValue& v, bool json) {
    struct Visitor {
        bool json;
        std::string operator()(std::monostate) const { return json ? "null" : ""; }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
        std::string operator()(std::uint64_t u) const { return std::to_string(u); }
        std::string operator()(std::int64_t i) const { return std::to_string(i); }
        std::string operator()(long double d) const { return format_real(d); }
        std::string operator()(const std::string& s) const {
            return json ? json_escape(s) : csv_escape(s);
        }
    };
    return std::visit(Visitor{json}, v);
}

}  // namespace detail

// Streams rows in one format.  In CSV mode the header is emitted with the
// first row and all rows must share the same column list; JSON-lines rows
// are independent objects.
class RowWriter {
  public:
    RowWriter(std::ostream& os, OutputFormat format) : os_(os), format_(format) {}

    void write(const OutputRow& row) {
        if (format_ == OutputFormat::csv) {
            if (!header_done_) {
                for (std::size_t i = 0; i < row.cols.size(); ++i) {
                    if (i) os_ << ',';
                    os_ << detail::csv_escape(row.cols[i].first);
                    header_.push_back(row.cols[i].first);
                }
                os_ << '\n';
                header_done_ = true;
            } else {
                if (header_.size() != row.cols.size())
                    throw std::logic_error("RowWriter: column list changed mid-stream");
                for (std::size_t i = 0; i < row.cols.size(); ++i)
                    if (header_[i] != row.cols[i].first)
                        throw std::logic_error("RowWriter: column list changed mid-stream");
            }
            for (std::size_t i = 0; i < row.cols.size(); ++i) {
                if (i) os_ << ',';
                os_ << detail::value_text(row.cols[i].second, false);
            }
            os_ << '\n';
        } else {
            os_ << '{';
            for (std::size_t i = 0; i < row.cols.size(); ++i) {
                if (i) os_ << ',';
                os_ << detail::json_escape(row.cols[i].first) << ':'
                    << detail::value_text(row.cols[i].second, true);
            }
            os_ << "}\n";
        }
    }

  private:
    std::ostream& os_;
    OutputFormat format_;
    bool header_done_ = false;
    std::vector<std::string> header_;
};

}  // namespace floorprimes
