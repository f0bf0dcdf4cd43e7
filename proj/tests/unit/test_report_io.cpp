#include <cmath>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "lancaster/error.hpp"
#include "lancaster/report_io.hpp"

using namespace lancaster;

namespace {

StudyReport sample_report() {
    StudyReport r;
    r.kind = StudyKind::Coverage;
    r.n = 200;
    r.replications = 2000;
    r.alpha = 0.05;
    r.seed = 18446744073709551615ull;
    r.permutations = 500;
    r.bootstrap = 300;
    r.elapsed_seconds = 1.25;
    StudyCell a{"BVN(0.5)", "plugin", true, 1998, 2, 0.1 + 0.2, 0.0123456789012345, 0.21, 1e-5};
    StudyCell b{"BVT1(0.2)", "plugin", false, 0, 0, std::nullopt, std::nullopt, std::nullopt, std::nullopt};
    StudyCell c{"BVT(3.5,0.1)", "boot_rank", true, 2000, 0, 0.951, 0.004, 0.3, 0.002};
    r.cells = {a, b, c};
    return r;
}

}  // namespace

TEST(Numbers, ShortestRoundTrip) {
    for (double v : {0.0, 1.0, 0.1, 0.1 + 0.2, 1e-300, 123456789.125, -2.5e17, 5e-324}) {
        EXPECT_EQ(parse_double(format_double(v)), v);
    }
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
    EXPECT_EQ(format_double(-std::numeric_limits<double>::infinity()), "-inf");
    EXPECT_EQ(format_double(std::nan("")), "nan");
    EXPECT_TRUE(std::isnan(parse_double("nan")));
    EXPECT_THROW(parse_double("1.2x"), ParseError);
    EXPECT_THROW(parse_double(""), ParseError);
}

TEST(Numbers, Fixed) {
    EXPECT_EQ(format_fixed(0.12345, 3), "0.123");
    EXPECT_EQ(format_fixed(-0.0001, 3), "0.000");
    EXPECT_EQ(format_fixed(1.0, 2), "1.00");
}

TEST(Csv, SplitAndQuote) {
    EXPECT_EQ(split_csv_line("a,\"b,c\",d"), (std::vector<std::string>{"a", "b,c", "d"}));
    EXPECT_EQ(split_csv_line("\"x\"\"y\",,"), (std::vector<std::string>{"x\"y", "", ""}));
    EXPECT_EQ(csv_field("BVT(5,0.2)"), "\"BVT(5,0.2)\"");
    EXPECT_EQ(csv_field("NM1"), "NM1");
    EXPECT_THROW(split_csv_line("\"open", 7), ParseError);
}

TEST(ReportCsv, RoundTrip) {
    const auto r = sample_report();
    std::stringstream ss;
    write_report_csv(ss, r);
    const auto back = read_report_csv(ss);
    EXPECT_TRUE(r.same_content(back));
    EXPECT_EQ(back.cells, r.cells);
}

TEST(ReportJson, RoundTrip) {
    const auto r = sample_report();
    const auto back = report_from_json(report_to_json(r));
    EXPECT_TRUE(r.same_content(back));
    EXPECT_NE(report_to_json(r).find("null"), std::string::npos);
}

TEST(ReportCsv, ErrorsCarryLineNumbers) {
    std::stringstream ss;
    write_report_csv(ss, sample_report());
    std::string text = ss.str();
    text.replace(text.find("1998"), 4, "abc");
    std::stringstream bad(text);
    try {
        read_report_csv(bad);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
    std::stringstream missing("distribution,method\n");
    EXPECT_THROW(read_report_csv(missing), ParseError);
    EXPECT_THROW(report_from_json("{\"kind\": 3"), ParseError);
}

TEST(ReportTable, Pivot) {
    const auto table = format_report_table(sample_report(), true);
    EXPECT_NE(table.find("BVN(0.5)"), std::string::npos);
    EXPECT_NE(table.find("0.300"), std::string::npos);
    EXPECT_NE(table.find("-"), std::string::npos);
    EXPECT_NE(table.find("0.210"), std::string::npos);
}
