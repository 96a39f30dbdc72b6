#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <sstream>
#include <string>

#include <json.hpp>

#include "floorprimes/output.hpp"

using namespace floorprimes;

namespace {

OutputRow sample_row() {
    OutputRow r;
    r.cols.emplace_back("x", std::uint64_t{10});
    r.cols.emplace_back("value", std::int64_t{-3});
    r.cols.emplace_back("ratio", 0.330229926264L);
    r.cols.emplace_back("method", std::string("fast"));
    r.cols.emplace_back("flag", true);
    r.cols.emplace_back("none", std::monostate{});
    return r;
}

}  // namespace

TEST_CASE("format parsing") {
    REQUIRE(output_format_from_string("csv") == OutputFormat::csv);
    REQUIRE(output_format_from_string("jsonl") == OutputFormat::jsonl);
    REQUIRE(output_format_from_string("json") == OutputFormat::jsonl);
    REQUIRE_FALSE(output_format_from_string("yaml").has_value());
    REQUIRE_FALSE(output_format_from_string("").has_value());
}

TEST_CASE("format_real prints 12 significant digits") {
    REQUIRE(format_real(0.330229926264203241L) == "0.330229926264");
    REQUIRE(format_real(1.0L) == "1");
    REQUIRE(format_real(-2.5L) == "-2.5");
    REQUIRE(format_real(0.0009936035744369802L) == "0.000993603574437");
    REQUIRE(format_real(1e20L) == "1e+20");
}

TEST_CASE("CSV: header once, then data rows") {
    std::ostringstream os;
    RowWriter w(os, OutputFormat::csv);
    w.write(sample_row());
    w.write(sample_row());
    REQUIRE(os.str() ==
            "x,value,ratio,method,flag,none\n"
            "10,-3,0.330229926264,fast,true,\n"
            "10,-3,0.330229926264,fast,true,\n");
}

TEST_CASE("CSV escaping") {
    OutputRow r;
    r.cols.emplace_back("a", std::string("plain"));
    r.cols.emplace_back("b", std::string("with,comma"));
    r.cols.emplace_back("c", std::string("with \"quote\""));
    std::ostringstream os;
    RowWriter w(os, OutputFormat::csv);
    w.write(r);
    REQUIRE(os.str() ==
            "a,b,c\n"
            "plain,\"with,comma\",\"with \"\"quote\"\"\"\n");
}

TEST_CASE("CSV refuses mid-stream column changes") {
    std::ostringstream os;
    RowWriter w(os, OutputFormat::csv);
    w.write(sample_row());
    OutputRow other;
    other.cols.emplace_back("different", std::uint64_t{1});
    REQUIRE_THROWS_AS(w.write(other), std::logic_error);
}

TEST_CASE("JSON lines are valid objects with typed values") {
    std::ostringstream os;
    RowWriter w(os, OutputFormat::jsonl);
    w.write(sample_row());
    const std::string line = os.str();
    REQUIRE(line.back() == '\n');

    const auto obj = nlohmann::json::parse(line);
    REQUIRE(obj["x"] == 10);
    REQUIRE(obj["value"] == -3);
    REQUIRE(obj["method"] == "fast");
    REQUIRE(obj["flag"] == true);
    REQUIRE(obj["none"].is_null());
    REQUIRE(obj["ratio"].is_number_float());
}

TEST_CASE("JSON string escaping") {
    OutputRow r;
    r.cols.emplace_back("s", std::string("a\"b\\c\nd\te\x01"));
    std::ostringstream os;
    RowWriter w(os, OutputFormat::jsonl);
    w.write(r);
    const auto obj = nlohmann::json::parse(os.str());
    REQUIRE(obj["s"] == "a\"b\\c\nd\te\x01");
}

TEST_CASE("reals round-trip equal across the two formats") {
    const long double values[] = {0.330229926264203241L, -4.180518L, 0.0009936035744369802L,
                                  2.0L, 1.0L / 3.0L};
    for (long double v : values) {
        OutputRow r;
        r.cols.emplace_back("v", v);

        std::ostringstream csv_os;
        RowWriter csv(csv_os, OutputFormat::csv);
        csv.write(r);
        std::string csv_text = csv_os.str();
        csv_text = csv_text.substr(csv_text.find('\n') + 1);
        csv_text.pop_back();

        std::ostringstream json_os;
        RowWriter json(json_os, OutputFormat::jsonl);
        json.write(r);
        const auto obj = nlohmann::json::parse(json_os.str());

        // identical digit strings, hence identical parsed values
        REQUIRE(csv_text == format_real(v));
        REQUIRE(std::stold(csv_text) == std::stold(format_real(v)));
        REQUIRE(obj["v"].get<double>() == std::stod(csv_text));
    }
}

TEST_CASE("deterministic output: identical rows serialize identically") {
    std::ostringstream a, b;
    RowWriter wa(a, OutputFormat::jsonl), wb(b, OutputFormat::jsonl);
    for (int i = 0; i < 100; ++i) {
        wa.write(sample_row());
        wb.write(sample_row());
    }
    REQUIRE(a.str() == b.str());
}
