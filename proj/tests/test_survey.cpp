#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "oracles.hpp"
#include "ptower/survey.hpp"

using namespace ptower;

namespace {

SurveySummary run(std::uint64_t lo, std::uint64_t hi, unsigned jobs = 1, std::uint64_t chunk = 1u << 16)
{
    SurveyOptions opt;
    opt.jobs = jobs;
    opt.chunk = chunk;
    return survey(lo, hi, opt);
}

std::string temp_path(std::string const & name)
{
    return (std::filesystem::temp_directory_path() / name).string();
}

} // namespace

TEST(Survey, SmallRanges)
{
    EXPECT_EQ(run(0, 100).count, 0u);
    const auto s = run(0, 1000);
    ASSERT_EQ(s.count, 3u);
    EXPECT_EQ(s.records[0].d, 255u);
    EXPECT_EQ(s.records[1].d, 595u);
    EXPECT_EQ(s.records[2].d, 935u);
    EXPECT_EQ(s.table.size(), 2u);
    EXPECT_EQ(s.table.at(1, 1), 255u);
    EXPECT_EQ(s.table.at(1, 2), 935u);
    EXPECT_FALSE(s.table.at(2, 2).has_value());
    EXPECT_TRUE(s.errors.empty());
    EXPECT_THROW(run(10, 10), precondition_error);
}

TEST(Survey, OpenInterval)
{
    EXPECT_EQ(run(255, 595).count, 0u);
    EXPECT_EQ(run(254, 596).count, 2u);
}

TEST(Survey, RecordsAgreeWithDefinition)
{
    const auto s = run(0, 30000);
    std::size_t expected = 0;
    for (std::int64_t d = 1; d < 30000; ++d) {
        oracle::Radicand r;
        if (d % 2 == 1 && oracle::admissible(d, &r))
            ++expected;
    }
    EXPECT_EQ(s.count, expected);
    for (auto const & rec : s.records) {
        oracle::Radicand r;
        ASSERT_TRUE(oracle::admissible(static_cast<std::int64_t>(rec.d), &r)) << rec.d;
        EXPECT_EQ(rec.p1, static_cast<std::uint64_t>(r.p1));
        EXPECT_EQ(rec.p2, static_cast<std::uint64_t>(r.p2));
        EXPECT_EQ(rec.q, static_cast<std::uint64_t>(r.q));
        EXPECT_EQ(rec.legendre_p2_q, oracle::legendre(r.p2, r.q));
        EXPECT_EQ(survey_record(rec.d), rec);
        EXPECT_EQ(rec.position, tree_position({rec.m, rec.n}).label);
    }
}

TEST(Survey, ParallelMatchesSerial)
{
    const auto a = run(0, 200000, 1);
    const auto b = run(0, 200000, 3, 4096);
    EXPECT_EQ(a.records, b.records);
    EXPECT_EQ(a.table, b.table);
    EXPECT_EQ(run(0, 200000, 3, 4096).records, b.records);
}

TEST(Survey, PrefixAndMonotoneTable)
{
    const auto small = run(0, 100000);
    const auto big = run(0, 400000, 2);
    ASSERT_LE(small.records.size(), big.records.size());
    for (std::size_t i = 0; i < small.records.size(); ++i)
        ASSERT_EQ(small.records[i], big.records[i]);
    for (auto const & [cell, d] : small.table.cells()) {
        ASSERT_TRUE(big.table.at(cell.first, cell.second).has_value());
        EXPECT_LE(*big.table.at(cell.first, cell.second), d);
    }
    EXPECT_GE(big.table.size(), small.table.size());
}

TEST(Export, Csv)
{
    const auto s = run(0, 1000);
    EXPECT_EQ(csv_line(s.records[0]), "255,17,5,3,1,1,-1,<32,35>");
    EXPECT_EQ(csv_line(s.records[2]), "935,17,5,11,1,2,1,<32,34>-#1;2");
    std::ostringstream os;
    write_csv(os, {});
    EXPECT_EQ(os.str(), std::string(csv_header) + "\n");
    for (auto const & r : s.records)
        EXPECT_EQ(parse_csv_line(csv_line(r)), r);
    EXPECT_THROW(parse_csv_line("1,2,3"), precondition_error);
    EXPECT_THROW(parse_csv_line("x,2,3,4,5,6,7,<32,35>"), precondition_error);
}

TEST(Export, Json)
{
    const auto s = run(0, 1000);
    std::ostringstream os;
    write_json(os, s.records);
    const auto j = nlohmann::json::parse(os.str());
    ASSERT_TRUE(j.is_array());
    ASSERT_EQ(j.size(), 3u);
    EXPECT_EQ(j[0]["d"], 255);
    EXPECT_EQ(j[0]["position"], "<32,35>");
    EXPECT_EQ(j[2]["n"], 2);
    std::vector<std::string> keys;
    for (auto it = j[0].begin(); it != j[0].end(); ++it)
        keys.push_back(it.key());
    std::sort(keys.begin(), keys.end());
    EXPECT_EQ(keys, (std::vector<std::string>{"d", "legendre_p2_q", "m", "n", "p1", "p2", "position", "q"}));
}

TEST(Cache, RoundTripAndKeyMismatch)
{
    const auto path = temp_path("ptower_test_cache.csv");
    const auto s = run(0, 20000);
    save_cache(path, s);
    const auto back = load_cache(path, 0, 20000);
    ASSERT_TRUE(back.has_value());
    EXPECT_EQ(*back, s.records);
    EXPECT_FALSE(load_cache(path, 0, 20001).has_value());
    EXPECT_FALSE(load_cache(temp_path("ptower_no_such_cache.csv"), 0, 20000).has_value());
    std::remove(path.c_str());
    EXPECT_NE(cache_key(0, 1), cache_key(0, 2));
}

TEST(Verify, SmallBoxAndGuard)
{
    const auto rep = verify(1, 2);
    ASSERT_EQ(rep.cells.size(), 2u);
    EXPECT_TRUE(rep.all_ok());
    EXPECT_THROW(verify(12, 12), size_guard_error);
    EXPECT_THROW(verify(0, 1), precondition_error);
}
