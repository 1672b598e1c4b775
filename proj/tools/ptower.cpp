// ptower: command-line front end.
//
// Exit status: 0 ok, 1 usage, 2 precondition / size guard / file I/O,
// 3 internal error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "ptower/arith.hpp"
#include "ptower/artin.hpp"
#include "ptower/pcgroup.hpp"
#include "ptower/quadclass.hpp"
#include "ptower/survey.hpp"
#include "ptower/towers.hpp"

using namespace ptower;

namespace {

enum Exit { ok = 0, usage = 1, precondition = 2, internal = 3 };

void print_classgroup(std::int64_t D)
{
    const auto cg = class_group(D);
    auto forms = reduced_forms(D);
    std::sort(forms.begin(), forms.end());
    std::cout << "discriminant: " << D << "\n";
    std::cout << "class number: " << cg.order << "\n";
    std::cout << "structure: ";
    if (cg.invariants.empty())
        std::cout << "trivial";
    for (std::size_t i = 0; i < cg.invariants.size(); ++i)
        std::cout << (i ? " x " : "") << "C" << cg.invariants[i];
    std::cout << "\nreduced forms:";
    for (auto const & f : forms)
        std::cout << ' ' << f;
    std::cout << "\n";
}

void print_group(int m, int n)
{
    const auto P = build_G(m, n);
    const EnumeratedGroup G(P);
    const auto W = Subgroup::whole(G);
    const auto cs = lower_central_series(G);
    const auto pos = tree_position({m, n});
    std::cout << "# G_{" << m << "," << n << "}: generators rho sigma tau\n";
    std::cout << P.to_text();
    std::cout << "order: 2^" << G.log_order() << " = " << G.order() << "\n";
    std::cout << "abelianization: " << abelian_invariants(W) << "\n";
    std::cout << "derived subgroup: " << abelian_invariants(derived_subgroup(W)) << "\n";
    std::cout << "class: " << cs.nilpotency_class << "\n";
    std::cout << "coclass: " << cs.coclass << "\n";
    std::cout << "position: " << to_string(pos.family) << " j=" << pos.j << " k=" << pos.k << " "
              << pos.label << "\n";
}

int print_pattern(int m, int n, bool predicted_only)
{
    const auto predicted = predicted_pattern2({m, n});
    if (predicted_only) {
        std::cout << predicted.str();
        return ok;
    }
    const EnumeratedGroup G(build_G(m, n));
    const auto ap = artin_pattern(G);
    std::cout << ap.str();
    const auto ct = cycle_type(ap.tkt[1]);
    std::cout << "kappa1 cycle type: " << ct.fixed_points << " fixed, " << ct.two_cycles << " 2-cycles\n";
    const auto cmp = compare_pattern2(ap, predicted);
    std::cout << "prediction: " << (cmp.ok() ? "match" : "MISMATCH") << "\n";
    for (auto const & d : cmp.diffs)
        std::cout << "  " << d << "\n";
    return cmp.ok() ? ok : internal;
}

int classify(std::uint64_t d)
{
    const auto chk = profile_radicand(d);
    if (!chk.accepted()) {
        std::cerr << "d = " << d << " rejected: " << to_string(chk.reason) << "\n";
        return precondition;
    }
    auto const & p = *chk.profile;
    const auto h1 = two_class_number(-static_cast<std::int64_t>(p.p1));
    const auto h2 = two_class_number(-static_cast<std::int64_t>(p.p2 * p.q));
    const auto t = params_from_radicand(p);
    const auto pos = tree_position(t);
    std::cout << "d = " << d << " = " << p.p1 << " * " << p.p2 << " * " << p.q << "\n";
    std::cout << "(p1/p2) = " << p.legendre_p1_p2 << ", (p1/q) = " << p.legendre_p1_q
              << ", (p2/q) = " << p.legendre_p2_q << "\n";
    std::cout << "h2(-" << p.p1 << ") = " << h1 << ", h2(-" << p.p2 * p.q << ") = " << h2 << "\n";
    std::cout << "(m,n) = (" << t.m << "," << t.n << ")\n";
    std::cout << "order: 2^" << t.m + t.n + 3 << "\n";
    std::cout << "family: " << to_string(pos.family) << " j=" << pos.j << " k=" << pos.k << "\n";
    std::cout << "label: " << pos.label << "\n";
    std::cout << "predicted pattern:\n" << predicted_pattern2(t).str();
    return ok;
}

/* E6, E14, E6-E14 and E8, E9, E8-E9.  A single TKT name also pins the
 * variant digits it admits. */
ThreeStageParams parse_three_stage(int u, std::string const & fam, int variant)
{
    ThreeStageParams p{u, TktFamily::E6_E14, variant};
    std::vector<int> allowed;
    if (fam == "E6-E14") {
        allowed = {4, 5, 6};
    } else if (fam == "E6") {
        allowed = {4};
    } else if (fam == "E14") {
        allowed = {5, 6};
    } else if (fam == "E8-E9") {
        p.family = TktFamily::E8_E9;
        allowed = {2, 4, 6};
    } else if (fam == "E8") {
        p.family = TktFamily::E8_E9;
        allowed = {2};
    } else if (fam == "E9") {
        p.family = TktFamily::E8_E9;
        allowed = {4, 6};
    } else {
        throw CLI::ValidationError("family", "unknown family '" + fam + "'");
    }
    if (std::find(allowed.begin(), allowed.end(), variant) == allowed.end())
        throw precondition_error("variant " + std::to_string(variant) + " does not belong to " + fam);
    return p;
}

void classify3(ThreeStageParams const & p)
{
    const auto labels = three_stage_identifiers(p);
    std::cout << "u = " << p.u << ", TKT " << tkt_name(p) << "\n";
    std::cout << "G: " << labels.group << "\n";
    std::cout << "G/G'': " << labels.metabelian << "\n";
    std::cout << "predicted pattern:\n" << predicted_pattern3(p).str();
}

void print_summary(std::ostream & os, SurveySummary const & s)
{
    os << "range: (" << s.lo << ", " << s.hi << ")\n";
    os << "accepted: " << s.count << "\n";
    os << "errors: " << s.errors.size() << "\n";
    os << "minimal radicands:\n";
    for (auto const & [mn, d] : s.table.cells())
        os << "  (" << mn.first << "," << mn.second << ") " << d << "\n";
}

struct SurveyArgs {
    std::uint64_t lo = 0, hi = 0;
    std::string out;
    std::string format = "csv";
    unsigned jobs = 0;
    std::string cache;
    bool progress = false;
};

int run_survey(SurveyArgs const & a)
{
    std::optional<SurveySummary> s;
    if (!a.cache.empty()) {
        if (auto recs = load_cache(a.cache, a.lo, a.hi)) {
            std::cerr << "survey: using cache " << a.cache << "\n";
            s = summarize(a.lo, a.hi, std::move(*recs));
        }
    }
    if (!s) {
        SurveyOptions opt;
        opt.jobs = a.jobs;
        opt.diagnostics = &std::cerr;
        opt.progress = a.progress;
        s = survey(a.lo, a.hi, opt);
        if (!a.cache.empty() && s->errors.empty())
            save_cache(a.cache, *s);
    }

    auto emit = [&](std::ostream & os) {
        if (a.format == "json")
            write_json(os, s->records);
        else
            write_csv(os, s->records);
    };
    if (a.out.empty()) {
        emit(std::cout);
        print_summary(std::cerr, *s);
    } else {
        std::ofstream f(a.out, std::ios::binary);
        if (!f)
            throw std::runtime_error("cannot open " + a.out);
        emit(f);
        if (!f)
            throw std::runtime_error("write failed on " + a.out);
        print_summary(std::cout, *s);
    }
    return s->errors.empty() ? ok : internal;
}

int run_verify(int mmax, int nmax)
{
    const auto rep = verify(mmax, nmax);
    std::size_t passed = 0;
    for (auto const & c : rep.cells) {
        std::cout << "(" << c.params.m << "," << c.params.n << ") " << (c.ok ? "pass" : "FAIL") << "\n";
        for (auto const & d : c.diffs)
            std::cout << "    " << d << "\n";
        passed += c.ok;
    }
    std::cout << passed << "/" << rep.cells.size() << " cells pass\n";
    return rep.all_ok() ? ok : internal;
}

} // namespace

int main(int argc, char ** argv)
{
    CLI::App app{"p-class tower groups G_{m,n}: patterns, classification and radicand surveys"};
    app.require_subcommand(1);

    std::int64_t D = 0;
    auto * c_cg = app.add_subcommand("classgroup", "class group of a negative discriminant");
    c_cg->add_option("D", D, "discriminant, D < 0 and D = 0,1 mod 4")->required();

    int m = 0, n = 0;
    auto * c_group = app.add_subcommand("group", "presentation and invariants of G_{m,n}");
    c_group->add_option("m", m)->required();
    c_group->add_option("n", n)->required();

    bool predicted_only = false;
    auto * c_pat = app.add_subcommand("pattern", "Artin pattern of G_{m,n}");
    c_pat->add_option("m", m)->required();
    c_pat->add_option("n", n)->required();
    c_pat->add_flag("--predicted", predicted_only, "print the predicted pattern only");

    std::uint64_t d = 0;
    auto * c_cls = app.add_subcommand("classify", "parameters and tree position of a radicand");
    c_cls->add_option("d", d)->required();

    int u = 0, variant = 0;
    std::string family;
    auto * c_cls3 = app.add_subcommand("classify3", "three-stage identifiers and predicted pattern");
    c_cls3->add_option("u", u)->required();
    c_cls3->add_option("family", family, "E6, E14, E6-E14, E8, E9 or E8-E9")->required();
    c_cls3->add_option("variant", variant, "4|5|6 resp. 2|4|6")->required();

    SurveyArgs sa;
    auto * c_sur = app.add_subcommand("survey", "scan radicands in the open interval (lo, hi)");
    c_sur->add_option("lo", sa.lo)->required();
    c_sur->add_option("hi", sa.hi)->required();
    c_sur->add_option("--out,-o", sa.out, "write records here instead of stdout");
    c_sur->add_option("--format,-f", sa.format)->check(CLI::IsMember({"csv", "json"}));
    c_sur->add_option("--jobs,-j", sa.jobs, "worker threads (0: all cores)");
    c_sur->add_option("--cache", sa.cache, "records cache file");
    c_sur->add_flag("--progress", sa.progress, "report chunks on stderr");

    int mmax = 0, nmax = 0;
    auto * c_ver = app.add_subcommand("verify", "compare computed and predicted patterns on a box");
    c_ver->add_option("mmax", mmax)->required();
    c_ver->add_option("nmax", nmax)->required();

    try {
        app.parse(argc, argv);
    } catch (CLI::ParseError const & e) {
        const int rc = app.exit(e);
        return rc == 0 ? ok : usage;
    }

    try {
        if (c_cg->parsed()) {
            print_classgroup(D);
            return ok;
        }
        if (c_group->parsed()) {
            print_group(m, n);
            return ok;
        }
        if (c_pat->parsed())
            return print_pattern(m, n, predicted_only);
        if (c_cls->parsed())
            return classify(d);
        if (c_cls3->parsed()) {
            classify3(parse_three_stage(u, family, variant));
            return ok;
        }
        if (c_sur->parsed())
            return run_survey(sa);
        if (c_ver->parsed())
            return run_verify(mmax, nmax);
    } catch (CLI::ValidationError const & e) {
        std::cerr << "ptower: " << e.what() << "\n";
        return usage;
    } catch (precondition_error const & e) {
        std::cerr << "ptower: " << e.what() << "\n";
        return precondition;
    } catch (internal_error const & e) {
        std::cerr << "ptower: internal error: " << e.what() << "\n";
        return internal;
    } catch (std::runtime_error const & e) {
        // file I/O
        std::cerr << "ptower: " << e.what() << "\n";
        return precondition;
    } catch (std::exception const & e) {
        std::cerr << "ptower: " << e.what() << "\n";
        return internal;
    }
    return usage;
}
