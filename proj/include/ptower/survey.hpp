#ifndef PTOWER_SURVEY_HPP
#define PTOWER_SURVEY_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"

#include "ptower/arith.hpp"
#include "ptower/artin.hpp"
#include "ptower/errors.hpp"
#include "ptower/quadclass.hpp"
#include "ptower/towers.hpp"

namespace ptower {

inline constexpr std::string_view library_version = "0.1.0";

struct SurveyRecord {
    std::uint64_t d = 0;
    std::uint64_t p1 = 0;
    std::uint64_t p2 = 0;
    std::uint64_t q = 0;
    int m = 0;
    int n = 0;
    int legendre_p2_q = 0;
    std::string position;

    friend bool operator==(SurveyRecord const &, SurveyRecord const &) = default;
};

inline SurveyRecord make_record(RadicandProfile const & prof, TowerParams const & t)
{
    return {prof.d, prof.p1, prof.p2, prof.q, t.m, t.n, prof.legendre_p2_q, tree_position(t).label};
}

/* The record of d, or nothing when d is not an admissible radicand. */
inline std::optional<SurveyRecord> survey_record(std::uint64_t d)
{
    const auto chk = profile_radicand(d);
    if (!chk.accepted())
        return std::nullopt;
    return make_record(*chk.profile, params_from_radicand(*chk.profile));
}

/* (m,n) -> smallest radicand seen with these parameters. */
class MinimalRadicandTable
{
  public:
    void add(SurveyRecord const & r)
    {
        auto [it, fresh] = cells_.try_emplace({r.m, r.n}, r.d);
        if (!fresh && r.d < it->second)
            it->second = r.d;
    }

    std::optional<std::uint64_t> at(int m, int n) const
    {
        const auto it = cells_.find({m, n});
        if (it == cells_.end())
            return std::nullopt;
        return it->second;
    }

    std::map<std::pair<int, int>, std::uint64_t> const & cells() const { return cells_; }
    std::size_t size() const { return cells_.size(); }

    friend bool operator==(MinimalRadicandTable const &, MinimalRadicandTable const &) = default;

  private:
    std::map<std::pair<int, int>, std::uint64_t> cells_;
};

struct SurveyError {
    std::uint64_t d = 0;
    std::string what;
};

struct SurveySummary {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
    std::size_t count = 0;
    MinimalRadicandTable table;
    std::vector<SurveyRecord> records; // ascending d
    std::vector<SurveyError> errors;
};

inline SurveySummary summarize(std::uint64_t lo, std::uint64_t hi, std::vector<SurveyRecord> records)
{
    SurveySummary s;
    s.lo = lo;
    s.hi = hi;
    s.count = records.size();
    for (auto const & r : records)
        s.table.add(r);
    s.records = std::move(records);
    return s;
}

struct SurveyOptions {
    unsigned jobs = 0;                 // 0: hardware concurrency
    std::uint64_t chunk = 1u << 16;
    std::ostream * diagnostics = nullptr; // per-d failures and progress
    bool progress = false;
};

namespace detail {

/* Worker-local: 2-class numbers keyed by radicand. */
class TwoClassMemo
{
  public:
    std::int64_t operator()(std::int64_t r)
    {
        auto it = memo_.find(r);
        if (it != memo_.end())
            return it->second;
        const auto h = two_class_number(r);
        memo_.emplace(r, h);
        return h;
    }

  private:
    std::unordered_map<std::int64_t, std::int64_t> memo_;
};

struct ChunkResult {
    std::vector<SurveyRecord> records;
    std::vector<SurveyError> errors;
};

inline void scan_chunk(std::uint64_t a, std::uint64_t b, TwoClassMemo & memo, ChunkResult & out)
{
    for (std::uint64_t d = a; d < b; ++d) {
        // p1 p2 q is odd
        if (d % 2 == 0)
            continue;
        try {
            const auto chk = profile_radicand(d);
            if (!chk.accepted())
                continue;
            auto const & p = *chk.profile;
            const auto h1 = memo(-static_cast<std::int64_t>(p.p1));
            const auto h2 = memo(-static_cast<std::int64_t>(p.p2 * p.q));
            const TowerParams t{log2_exact(h1) - 1, log2_exact(h2)};
            if (t.m < 1 || t.n < 1)
                throw internal_error("m or n below 1");
            out.records.push_back(make_record(p, t));
        } catch (std::exception const & e) {
            out.errors.push_back({d, e.what()});
        }
    }
}

} // namespace detail

/* Scan the open interval (lo, hi).  Chunks go to worker threads; results
 * are merged in chunk order, so the output is independent of jobs. */
inline SurveySummary survey(std::uint64_t lo, std::uint64_t hi, SurveyOptions const & opt = {})
{
    if (lo >= hi)
        throw precondition_error("survey: need lo < hi");
    if (hi > max_factorable)
        throw precondition_error("survey: hi exceeds the factoring range");
    const std::uint64_t first = lo + 1;
    const std::uint64_t chunk = std::max<std::uint64_t>(opt.chunk, 1);
    const std::size_t nchunks = first >= hi ? 0 : static_cast<std::size_t>((hi - first + chunk - 1) / chunk);
    std::vector<detail::ChunkResult> results(nchunks);

    unsigned jobs = opt.jobs ? opt.jobs : std::max(1u, std::thread::hardware_concurrency());
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(nchunks, 1)));

    (void)PrimeSieve::instance(); // build the shared sieve before workers start
    std::atomic<std::size_t> next{0};
    std::mutex diag_mutex;
    auto worker = [&] {
        detail::TwoClassMemo memo;
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= nchunks)
                return;
            const std::uint64_t a = first + c * chunk;
            const std::uint64_t b = std::min(hi, a + chunk);
            detail::scan_chunk(a, b, memo, results[c]);
            if (opt.progress && opt.diagnostics) {
                std::lock_guard lock(diag_mutex);
                *opt.diagnostics << "survey: chunk " << (c + 1) << "/" << nchunks << " done\n";
            }
        }
    };
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < jobs; ++i)
            pool.emplace_back(worker);
        for (auto & t : pool)
            t.join();
    }

    std::vector<SurveyRecord> records;
    std::vector<SurveyError> errors;
    for (auto & r : results) {
        records.insert(records.end(), std::make_move_iterator(r.records.begin()),
                       std::make_move_iterator(r.records.end()));
        errors.insert(errors.end(), r.errors.begin(), r.errors.end());
    }
    auto s = summarize(lo, hi, std::move(records));
    s.errors = std::move(errors);
    if (opt.diagnostics)
        for (auto const & e : s.errors)
            *opt.diagnostics << "survey: d = " << e.d << " failed: " << e.what << "\n";
    return s;
}

/* ---- export ---- */

inline constexpr std::string_view csv_header = "d,p1,p2,q,m,n,legendre_p2_q,position";

/* The label is written unquoted; it is always the last field. */
inline std::string csv_line(SurveyRecord const & r)
{
    std::ostringstream os;
    os << r.d << ',' << r.p1 << ',' << r.p2 << ',' << r.q << ',' << r.m << ',' << r.n << ','
       << r.legendre_p2_q << ',' << r.position;
    return os.str();
}

inline void write_csv(std::ostream & os, std::vector<SurveyRecord> const & records)
{
    os << csv_header << '\n';
    for (auto const & r : records)
        os << csv_line(r) << '\n';
}

/* Parse one data line written by csv_line. */
inline SurveyRecord parse_csv_line(std::string_view line)
{
    std::vector<std::string_view> f;
    std::size_t pos = 0;
    for (int i = 0; i < 7; ++i) {
        const auto c = line.find(',', pos);
        if (c == std::string_view::npos)
            throw precondition_error("csv: too few fields in '" + std::string(line) + "'");
        f.push_back(line.substr(pos, c - pos));
        pos = c + 1;
    }
    SurveyRecord r;
    try {
        r.d = std::stoull(std::string(f[0]));
        r.p1 = std::stoull(std::string(f[1]));
        r.p2 = std::stoull(std::string(f[2]));
        r.q = std::stoull(std::string(f[3]));
        r.m = std::stoi(std::string(f[4]));
        r.n = std::stoi(std::string(f[5]));
        r.legendre_p2_q = std::stoi(std::string(f[6]));
    } catch (std::logic_error const &) {
        throw precondition_error("csv: bad number in '" + std::string(line) + "'");
    }
    r.position = std::string(line.substr(pos));
    return r;
}

inline nlohmann::ordered_json to_json(SurveyRecord const & r)
{
    nlohmann::ordered_json j;
    j["d"] = r.d;
    j["p1"] = r.p1;
    j["p2"] = r.p2;
    j["q"] = r.q;
    j["m"] = r.m;
    j["n"] = r.n;
    j["legendre_p2_q"] = r.legendre_p2_q;
    j["position"] = r.position;
    return j;
}

inline void write_json(std::ostream & os, std::vector<SurveyRecord> const & records)
{
    auto arr = nlohmann::ordered_json::array();
    for (auto const & r : records)
        arr.push_back(to_json(r));
    os << arr.dump(2) << '\n';
}

/* ---- on-disk cache keyed by (lo, hi, code version) ---- */

inline std::uint64_t fnv1a(std::string_view s)
{
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::uint64_t survey_version_hash()
{
    return fnv1a(std::string("ptower-survey|") + std::string(library_version) + "|"
                 + std::string(csv_header));
}

inline std::string cache_key(std::uint64_t lo, std::uint64_t hi)
{
    std::ostringstream os;
    os << "# ptower-survey lo=" << lo << " hi=" << hi << " version=" << std::hex
       << survey_version_hash();
    return os.str();
}

inline void save_cache(std::string const & path, SurveySummary const & s)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot write cache file " + path);
    f << cache_key(s.lo, s.hi) << '\n';
    write_csv(f, s.records);
    if (!f)
        throw std::runtime_error("write failed on cache file " + path);
}

/* Records from a cache file, or nothing when it is missing or was written
 * for another range or version. */
inline std::optional<std::vector<SurveyRecord>>
load_cache(std::string const & path, std::uint64_t lo, std::uint64_t hi)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        return std::nullopt;
    std::string line;
    if (!std::getline(f, line) || line != cache_key(lo, hi))
        return std::nullopt;
    if (!std::getline(f, line) || line != csv_header)
        return std::nullopt;
    std::vector<SurveyRecord> out;
    while (std::getline(f, line))
        if (!line.empty())
            out.push_back(parse_csv_line(line));
    return out;
}

/* ---- verification box ---- */

struct VerifyCell {
    TowerParams params;
    bool ok = false;
    std::vector<std::string> diffs;
};

struct VerifyReport {
    std::vector<VerifyCell> cells;

    bool all_ok() const
    {
        return std::all_of(cells.begin(), cells.end(), [](VerifyCell const & c) { return c.ok; });
    }
};

inline VerifyCell verify_cell(TowerParams const & t)
{
    const EnumeratedGroup G(build_G(t.m, t.n));
    const auto cmp = compare_pattern2(artin_pattern(G), predicted_pattern2(t));
    return {t, cmp.ok(), cmp.diffs};
}

inline VerifyReport verify(int m_max, int n_max)
{
    if (m_max < 1 || n_max < 1)
        throw precondition_error("verify: bounds must be >= 1");
    if (m_max + n_max + 3 > max_log2_order())
        throw size_guard_error("verify: largest group has order 2^" + std::to_string(m_max + n_max + 3)
                               + ", above the guard 2^" + std::to_string(max_log2_order()));
    VerifyReport rep;
    for (int m = 1; m <= m_max; ++m)
        for (int n = 1; n <= n_max; ++n)
            rep.cells.push_back(verify_cell({m, n}));
    return rep;
}

} // namespace ptower

#endif
