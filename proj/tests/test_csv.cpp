#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "gridmix/csv.hpp"

using namespace gridmix;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name, const std::string& contents)
{
    const fs::path path = fs::temp_directory_path() / name;
    std::ofstream out(path);
    out << contents;
    out.close();
    return path;
}

std::string message_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const InputError& e) {
        return e.what();
    }
    ADD_FAILURE() << "expected InputError";
    return {};
}

} // namespace

TEST(Csv, ReadsHeaderAndRows)
{
    const auto path = temp_file("gridmix_csv_basic.csv",
                                "a,b,c\n1,2.5,x\n4,-1e3,y\n");
    CsvReader r(path);
    EXPECT_EQ(r.header().size(), 3u);
    EXPECT_EQ(r.column("b"), 1u);
    ASSERT_TRUE(r.next());
    EXPECT_DOUBLE_EQ(r.number(0), 1.0);
    EXPECT_DOUBLE_EQ(r.number(1), 2.5);
    EXPECT_EQ(r.cell(2), "x");
    ASSERT_TRUE(r.next());
    EXPECT_DOUBLE_EQ(r.number(1), -1000.0);
    EXPECT_FALSE(r.next());
}

TEST(Csv, MissingFileNamesPath)
{
    const std::string msg = message_of(
        [] { CsvReader r("/nonexistent/gridmix_nope.csv"); });
    EXPECT_NE(msg.find("/nonexistent/gridmix_nope.csv"), std::string::npos);
}

TEST(Csv, MissingColumnNamesPathAndColumn)
{
    const auto path = temp_file("gridmix_csv_cols.csv", "a,b\n1,2\n");
    CsvReader r(path);
    const std::string msg = message_of([&] { r.column("zz"); });
    EXPECT_NE(msg.find("zz"), std::string::npos);
    EXPECT_NE(msg.find(path.string()), std::string::npos);
}

TEST(Csv, BadNumberReportsLineNumber)
{
    const auto path =
        temp_file("gridmix_csv_badnum.csv", "a,b\n1,2\n3,oops\n");
    CsvReader r(path);
    ASSERT_TRUE(r.next());
    ASSERT_TRUE(r.next());
    const std::string msg = message_of([&] { r.number(1); });
    EXPECT_NE(msg.find(":3:"), std::string::npos) << msg;
    EXPECT_NE(msg.find("oops"), std::string::npos);
}

TEST(Csv, RaggedRowRejected)
{
    const auto path = temp_file("gridmix_csv_ragged.csv", "a,b\n1\n");
    CsvReader r(path);
    EXPECT_THROW(r.next(), InputError);
}

TEST(Csv, EmptyFileRejected)
{
    const auto path = temp_file("gridmix_csv_empty.csv", "");
    EXPECT_THROW(CsvReader r(path), InputError);
}

TEST(Csv, BlankLinesSkipped)
{
    const auto path =
        temp_file("gridmix_csv_blank.csv", "a,b\n\n1,2\n\n\n3,4\n");
    CsvReader r(path);
    ASSERT_TRUE(r.next());
    ASSERT_TRUE(r.next());
    EXPECT_DOUBLE_EQ(r.number(0), 3.0);
    EXPECT_FALSE(r.next());
}

TEST(Csv, DoubleRoundTripIsExact)
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<double> values;
    for (int i = 0; i < 200; ++i) {
        values.push_back(uni(rng) * std::pow(10.0, (i % 17) - 8));
    }
    const fs::path path = fs::temp_directory_path() / "gridmix_csv_rt.csv";
    {
        CsvWriter w(path);
        w.row("v");
        for (const double v : values) {
            w.row(v);
        }
        w.close();
    }
    CsvReader r(path);
    for (const double v : values) {
        ASSERT_TRUE(r.next());
        EXPECT_EQ(r.number(0), v); // bit-exact round trip
    }
    EXPECT_FALSE(r.next());
}
