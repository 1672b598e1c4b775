#ifndef PTOWER_TOWERS_HPP
#define PTOWER_TOWERS_HPP

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ptower/abelian.hpp"
#include "ptower/arith.hpp"
#include "ptower/artin.hpp"
#include "ptower/errors.hpp"
#include "ptower/pcgroup.hpp"
#include "ptower/quadclass.hpp"

namespace ptower {

struct TowerParams {
    int m = 1;
    int n = 1;

    friend auto operator<=>(TowerParams const &, TowerParams const &) = default;
};

inline void check_params(TowerParams const & t)
{
    if (t.m < 1 || t.n < 1)
        throw precondition_error("tower parameters must satisfy m, n >= 1");
}

/* G_{m,n} on (rho, sigma, tau) with relative orders 2, 2^(n+1), 2^(m+1):
 *   rho^2 = sigma^(2^n),  sigma^rho = sigma^-1,  tau^rho = tau^-1,  tau^sigma = tau. */
inline PcPresentation build_G(int m, int n)
{
    check_params({m, n});
    if (m + n + 3 > max_log2_order())
        throw size_guard_error("G_{" + std::to_string(m) + "," + std::to_string(n)
                               + "} has order 2^" + std::to_string(m + n + 3)
                               + ", above the guard 2^" + std::to_string(max_log2_order()));
    const int s = 1 << (n + 1);
    const int t = 1 << (m + 1);
    PcPresentation P(2, {2, s, t});
    P.set_power(0, Element({0, s / 2, 0}));
    P.set_conjugate(0, 1, Element({0, s - 1, 0}));
    P.set_conjugate(0, 2, Element({0, 0, t - 1}));
    if (!consistency_check(P))
        throw internal_error("build_G: presentation is inconsistent");
    return P;
}

inline int log2_exact(std::int64_t x)
{
    int k = 0;
    while (x > 1) {
        if (x % 2 != 0)
            throw internal_error("log2_exact: not a power of two");
        x /= 2;
        ++k;
    }
    return k;
}

/* m from h_2(Q(sqrt(-p1))) = 2^(m+1), n from h_2(Q(sqrt(-p2 q))) = 2^n. */
inline TowerParams params_from_radicand(RadicandProfile const & prof)
{
    if (prof.p1 == 0 || prof.p2 == 0 || prof.q == 0)
        throw precondition_error("params_from_radicand: profile not accepted");
    const auto h1 = two_class_number(-static_cast<std::int64_t>(prof.p1));
    const auto h2 = two_class_number(-static_cast<std::int64_t>(prof.p2 * prof.q));
    TowerParams t{log2_exact(h1) - 1, log2_exact(h2)};
    if (t.m < 1 || t.n < 1)
        throw internal_error("params_from_radicand: d = " + std::to_string(prof.d)
                             + " gives m or n below 1");
    return t;
}

enum class TreeFamily { mainline_35, mainline_34, sequence_V };

inline std::string_view to_string(TreeFamily f)
{
    switch (f) {
    case TreeFamily::mainline_35: return "mainline-35";
    case TreeFamily::mainline_34: return "mainline-34";
    case TreeFamily::sequence_V: return "sequence-V";
    }
    return "?";
}

/* "(s)^e", empty for e = 0. */
inline std::string repeat_block(std::string_view steps, int e)
{
    if (e == 0)
        return {};
    return "(" + std::string(steps) + ")^" + std::to_string(e);
}

struct TreePosition {
    TreeFamily family = TreeFamily::mainline_35;
    int j = 0;
    int k = 0;
    std::string label;
};

inline TreePosition tree_position(TowerParams const & t)
{
    check_params(t);
    TreePosition pos;
    if (t.n == 1) {
        pos.family = TreeFamily::mainline_35;
        pos.k = t.m - 1;
        pos.label = "<32,35>" + repeat_block("-#1;1", pos.k);
    } else if (t.m >= t.n) {
        pos.family = TreeFamily::mainline_34;
        pos.j = t.n - 2;
        pos.k = t.m - t.n;
        pos.label = "<32,34>" + repeat_block("-#2;1", pos.j) + "-#2;2" + repeat_block("-#1;1", pos.k);
    } else {
        pos.family = TreeFamily::sequence_V;
        pos.j = t.m - 1;
        pos.k = t.n - t.m - 1;
        pos.label = "<32,34>" + repeat_block("-#2;1", pos.j) + repeat_block("-#1;1", pos.k) + "-#1;2";
    }
    return pos;
}

namespace detail {

inline std::vector<KernelCode> codes(std::vector<int> const & v)
{
    std::vector<KernelCode> out;
    for (int c : v)
        out.push_back(c == 0 ? KernelCode::total_kernel() : KernelCode::layer_one_member(c));
    return out;
}

inline std::vector<AbelianInvariants> repeated(AbelianInvariants const & a, int times)
{
    return std::vector<AbelianInvariants>(static_cast<std::size_t>(times), a);
}

inline void append(std::vector<AbelianInvariants> & v, std::vector<AbelianInvariants> const & w)
{
    v.insert(v.end(), w.begin(), w.end());
}

} // namespace detail

/* Predicted two-stage pattern of G_{m,n}.  Entries are listed in the
 * order of the published formulas, not in canonical subgroup order. */
inline ArtinPattern predicted_pattern2(TowerParams const & t)
{
    check_params(t);
    const int m = t.m, n = t.n;
    const AbelianInvariants e3{1, 1, 1};
    const AbelianInvariants c21{2, 1};
    ArtinPattern ap;
    ap.ttt.push_back({e3});
    ap.tkt.push_back({KernelCode::explicit_kernel({0})});

    std::vector<AbelianInvariants> tau1, tau2;
    std::vector<int> kappa1;
    if (n == 1) {
        tau1 = {AbelianInvariants{m + 1, 2}, c21, c21, e3, e3, c21, c21};
        tau2 = {AbelianInvariants{m + 1, 1}, AbelianInvariants{m, 2}, AbelianInvariants{m + 1, 1}};
        detail::append(tau2, detail::repeated(c21, 4));
        kappa1 = {1, 2, 3, 5, 4, 6, 7};
    } else {
        tau1 = {AbelianInvariants{m + 1, n + 1}};
        detail::append(tau1, detail::repeated(e3, 6));
        tau2 = {AbelianInvariants{m + 1, n}, AbelianInvariants{m, n + 1},
                AbelianInvariants{std::max(m + 1, n + 1), std::min(m, n)}};
        detail::append(tau2, detail::repeated(e3, 4));
        kappa1 = {1, 3, 2, 5, 4, 7, 6};
    }
    ap.ttt.push_back(tau1);
    ap.tkt.push_back(detail::codes(kappa1));
    ap.ttt.push_back(tau2);
    ap.tkt.push_back(detail::codes(std::vector<int>(7, 0)));
    ap.ttt.push_back({AbelianInvariants{m, n}});
    ap.tkt.push_back(detail::codes({0}));
    return ap;
}

/* Number of leading entries of tau_1 resp. tau_2 that depend on (m,n). */
inline std::size_t polarized_count(int layer)
{
    return layer == 1 ? 1 : layer == 2 ? 3 : 0;
}

/* Layerwise comparison of a computed pattern with a prediction: TTT as
 * multisets, polarized components by containment, kappa_1 by cycle type,
 * the remaining kernel layers exactly.  Differences are collected as text. */
struct PatternComparison {
    std::vector<std::string> diffs;

    bool ok() const { return diffs.empty(); }
};

namespace detail {

inline std::string join(std::vector<AbelianInvariants> const & v)
{
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + v[i].str();
    return s + "]";
}

inline std::string join(std::vector<KernelCode> const & v)
{
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? " " : "") + v[i].str();
    return s + ")";
}

/* a contained in b as multisets */
inline bool sub_multiset(std::vector<AbelianInvariants> a, std::vector<AbelianInvariants> b)
{
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

} // namespace detail

inline PatternComparison compare_pattern2(ArtinPattern const & computed, ArtinPattern const & predicted)
{
    PatternComparison cmp;
    auto & d = cmp.diffs;
    if (computed.ttt.size() != predicted.ttt.size()) {
        d.push_back("layer count " + std::to_string(computed.ttt.size()) + " != predicted "
                    + std::to_string(predicted.ttt.size()));
        return cmp;
    }
    for (std::size_t n = 0; n < predicted.ttt.size(); ++n) {
        const auto tag = std::to_string(n);
        if (as_multiset(computed.ttt[n]) != as_multiset(predicted.ttt[n]))
            d.push_back("tau" + tag + ": computed " + detail::join(computed.ttt[n]) + ", predicted "
                        + detail::join(predicted.ttt[n]));
        const std::size_t pc = polarized_count(static_cast<int>(n));
        if (pc > 0) {
            const std::vector<AbelianInvariants> pol(predicted.ttt[n].begin(),
                                                     predicted.ttt[n].begin() + static_cast<long>(pc));
            if (!detail::sub_multiset(pol, computed.ttt[n]))
                d.push_back("tau" + tag + ": polarized " + detail::join(pol) + " missing");
        }
        if (n == 1) {
            const auto got = cycle_type(computed.tkt[1]);
            const auto want = cycle_type(predicted.tkt[1]);
            if (!got.is_permutation || got != want)
                d.push_back("kappa1: computed " + detail::join(computed.tkt[1]) + " has "
                            + std::to_string(got.fixed_points) + " fixed points, "
                            + std::to_string(got.two_cycles) + " 2-cycles; predicted "
                            + std::to_string(want.fixed_points) + " and "
                            + std::to_string(want.two_cycles));
        } else if (computed.tkt[n] != predicted.tkt[n]) {
            d.push_back("kappa" + tag + ": computed " + detail::join(computed.tkt[n]) + ", predicted "
                        + detail::join(predicted.tkt[n]));
        }
    }
    return cmp;
}

/* ---- three-stage classifiers ---- */

enum class TktFamily { E6_E14, E8_E9 };

struct ThreeStageParams {
    int u = 2;
    TktFamily family = TktFamily::E6_E14;
    int variant = 4; // 4|5|6 resp. 2|4|6
};

inline std::vector<int> allowed_variants(TktFamily f)
{
    return f == TktFamily::E6_E14 ? std::vector<int>{4, 5, 6} : std::vector<int>{2, 4, 6};
}

inline void check_three_stage(ThreeStageParams const & p)
{
    if (p.u < 2)
        throw precondition_error("three-stage parameter u must be >= 2, got " + std::to_string(p.u));
    const auto ok = allowed_variants(p.family);
    if (std::find(ok.begin(), ok.end(), p.variant) == ok.end())
        throw precondition_error("variant " + std::to_string(p.variant) + " not allowed for this family");
}

inline std::string_view root_label(TktFamily f)
{
    return f == TktFamily::E6_E14 ? "<729,49>" : "<729,54>";
}

/* The single TKT named by a variant: the first variant digit of each
 * family gives E.6 resp. E.8, the other two E.14 resp. E.9. */
inline std::string_view tkt_name(ThreeStageParams const & p)
{
    check_three_stage(p);
    if (p.family == TktFamily::E6_E14)
        return p.variant == 4 ? "E.6" : "E.14";
    return p.variant == 2 ? "E.8" : "E.9";
}

struct ThreeStageLabels {
    std::string group;      // G
    std::string metabelian; // G/G''
};

inline ThreeStageLabels three_stage_identifiers(ThreeStageParams const & p)
{
    check_three_stage(p);
    const std::string root(root_label(p.family));
    const std::string v = std::to_string(p.variant);
    const int j = p.u - 2;
    return {root + repeat_block("-#2;1-#1;1", j) + "-#2;" + v,
            root + repeat_block("-#1;1-#1;1", j) + "-#1;" + v};
}

inline ArtinPattern predicted_pattern3(ThreeStageParams const & p)
{
    check_three_stage(p);
    const int u = p.u;
    const AbelianInvariants pol{u + 1, u};
    const AbelianInvariants c21{2, 1};
    ArtinPattern ap;
    ap.ttt.push_back({AbelianInvariants{1, 1}});
    ap.tkt.push_back({KernelCode::explicit_kernel({0})});
    std::vector<int> kappa1;
    if (p.family == TktFamily::E6_E14) {
        ap.ttt.push_back({pol, AbelianInvariants{1, 1, 1}, c21, c21});
        kappa1 = p.variant == 4 ? std::vector<int>{1, 1, 2, 2} : std::vector<int>{3, 1, 2, 2};
    } else {
        ap.ttt.push_back({c21, pol, c21, c21});
        kappa1 = p.variant == 2 ? std::vector<int>{2, 2, 3, 4} : std::vector<int>{2, 3, 3, 4};
    }
    ap.tkt.push_back(detail::codes(kappa1));
    ap.ttt.push_back({AbelianInvariants{u, u, 1}});
    ap.tkt.push_back(detail::codes({0}));
    return ap;
}

} // namespace ptower

#endif
