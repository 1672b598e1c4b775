#include <gtest/gtest.h>

#include <regex>
#include <set>

#include "ptower/towers.hpp"

using namespace ptower;

TEST(BuildG, Examples)
{
    const EnumeratedGroup G11(build_G(1, 1));
    EXPECT_EQ(G11.order(), 32u);
    EXPECT_EQ(abelian_invariants(Subgroup::whole(G11)), (AbelianInvariants{1, 1, 1}));
    EXPECT_EQ(EnumeratedGroup(build_G(2, 1)).order(), 64u);
    const EnumeratedGroup G22(build_G(2, 2));
    EXPECT_EQ(G22.order(), 128u);
    const auto cs = lower_central_series(G22);
    EXPECT_EQ(cs.nilpotency_class, 3);
    EXPECT_EQ(cs.coclass, 4);
    EXPECT_THROW(build_G(0, 1), precondition_error);
    EXPECT_THROW(build_G(1, 0), precondition_error);
    EXPECT_THROW(build_G(10, 10), size_guard_error);
}

TEST(Params, FromRadicand)
{
    auto params = [](std::uint64_t d) { return params_from_radicand(*profile_radicand(d).profile); };
    EXPECT_EQ(params(255), (TowerParams{1, 1}));
    EXPECT_EQ(params(935), (TowerParams{1, 2}));
    EXPECT_EQ(params(1599), (TowerParams{2, 2}));
    EXPECT_THROW(params_from_radicand(RadicandProfile{}), precondition_error);
}

TEST(TreePositionTest, Examples)
{
    const auto a = tree_position({1, 1});
    EXPECT_EQ(a.family, TreeFamily::mainline_35);
    EXPECT_EQ(a.k, 0);
    EXPECT_EQ(a.label, "<32,35>");

    const auto b = tree_position({1, 2});
    EXPECT_EQ(b.family, TreeFamily::sequence_V);
    EXPECT_EQ(b.j, 0);
    EXPECT_EQ(b.k, 0);
    EXPECT_EQ(b.label, "<32,34>-#1;2");

    const auto c = tree_position({2, 2});
    EXPECT_EQ(c.family, TreeFamily::mainline_34);
    EXPECT_EQ(c.label, "<32,34>-#2;2");

    EXPECT_EQ(tree_position({3, 1}).label, "<32,35>(-#1;1)^2");
    EXPECT_EQ(tree_position({5, 3}).label, "<32,34>(-#2;1)^1-#2;2(-#1;1)^2");
    EXPECT_EQ(tree_position({2, 5}).label, "<32,34>(-#2;1)^1(-#1;1)^2-#1;2");
    EXPECT_EQ(to_string(TreeFamily::sequence_V), "sequence-V");
    EXPECT_THROW(tree_position({0, 3}), precondition_error);
}

TEST(TreePositionTest, InjectiveAndParametersRecoverable)
{
    const std::regex grammar(R"(<32,3[45]>(\(-#2;1\)\^[1-9][0-9]*)?(-#2;2)?(\(-#1;1\)\^[1-9][0-9]*)?(-#1;2)?)");
    std::set<std::string> labels;
    for (int m = 1; m <= 30; ++m)
        for (int n = 1; n <= 30; ++n) {
            const auto pos = tree_position({m, n});
            EXPECT_TRUE(std::regex_match(pos.label, grammar)) << pos.label;
            EXPECT_TRUE(labels.insert(pos.label).second) << pos.label;
            EXPECT_GE(pos.j, 0);
            EXPECT_GE(pos.k, 0);
        }
}

TEST(Predicted2, Examples)
{
    const AbelianInvariants e3{1, 1, 1}, c21{2, 1};
    const auto a = predicted_pattern2({1, 1});
    EXPECT_EQ(as_multiset(a.ttt[1]), as_multiset({{2, 2}, c21, c21, c21, c21, e3, e3}));
    const auto b = predicted_pattern2({1, 2});
    EXPECT_NE(std::find(b.ttt[2].begin(), b.ttt[2].end(), AbelianInvariants{3, 1}), b.ttt[2].end());
    for (int m = 1; m <= 6; ++m)
        for (int n = 1; n <= 6; ++n) {
            const auto p = predicted_pattern2({m, n});
            EXPECT_EQ(p.ttt[3], (std::vector<AbelianInvariants>{AbelianInvariants{m, n}}));
            EXPECT_EQ(p.ttt[0], (std::vector<AbelianInvariants>{e3}));
            EXPECT_EQ(p.tkt[2], std::vector<KernelCode>(7, KernelCode::total_kernel()));
            const auto ct = cycle_type(p.tkt[1]);
            EXPECT_EQ(ct.fixed_points, n == 1 ? 5 : 1);
            EXPECT_EQ(ct.two_cycles, n == 1 ? 1 : 3);
        }
}

TEST(Predicted2, RoundTripOnVerificationBox)
{
    for (int m = 1; m <= 4; ++m)
        for (int n = 1; n <= 4; ++n) {
            const auto cmp = compare_pattern2(artin_pattern(EnumeratedGroup(build_G(m, n))), predicted_pattern2({m, n}));
            EXPECT_TRUE(cmp.ok()) << m << "," << n << ": " << (cmp.diffs.empty() ? "" : cmp.diffs[0]);
        }
}

TEST(Predicted2, ComparisonReportsDifferences)
{
    auto computed = artin_pattern(EnumeratedGroup(build_G(2, 1)));
    EXPECT_TRUE(compare_pattern2(computed, predicted_pattern2({2, 1})).ok());
    // a different parameter pair must not pass
    const auto bad = compare_pattern2(computed, predicted_pattern2({2, 2}));
    EXPECT_FALSE(bad.ok());
    EXPECT_GE(bad.diffs.size(), 3u);
    // a swapped kernel code breaks the cycle type
    std::swap(computed.tkt[1][0], computed.tkt[1][1]);
    EXPECT_FALSE(compare_pattern2(computed, predicted_pattern2({2, 1})).ok());
}

TEST(ThreeStage, Identifiers)
{
    const auto a = three_stage_identifiers({2, TktFamily::E8_E9, 2});
    EXPECT_EQ(a.group, "<729,54>-#2;2");
    EXPECT_EQ(a.metabelian, "<729,54>-#1;2");
    const auto b = three_stage_identifiers({3, TktFamily::E6_E14, 4});
    EXPECT_EQ(b.group, "<729,49>(-#2;1-#1;1)^1-#2;4");
    EXPECT_EQ(b.metabelian, "<729,49>(-#1;1-#1;1)^1-#1;4");
    EXPECT_THROW(three_stage_identifiers({1, TktFamily::E6_E14, 4}), precondition_error);
    EXPECT_THROW(three_stage_identifiers({2, TktFamily::E6_E14, 2}), precondition_error);
    EXPECT_THROW(three_stage_identifiers({2, TktFamily::E8_E9, 5}), precondition_error);
}

TEST(ThreeStage, MetabelianizationSubstitution)
{
    for (int u = 2; u <= 12; ++u)
        for (auto f : {TktFamily::E6_E14, TktFamily::E8_E9})
            for (int v : allowed_variants(f)) {
                const auto l = three_stage_identifiers({u, f, v});
                std::string g = l.group;
                for (std::size_t p; (p = g.find("(-#2;1-#1;1)")) != std::string::npos;)
                    g.replace(p, 12, "(-#1;1-#1;1)");
                const auto last = g.rfind("-#2;");
                ASSERT_NE(last, std::string::npos);
                g.replace(last, 4, "-#1;");
                EXPECT_EQ(g, l.metabelian);
            }
}

TEST(ThreeStage, PredictedPattern)
{
    const auto a = predicted_pattern3({2, TktFamily::E6_E14, 4});
    EXPECT_EQ(a.ttt[1], (std::vector<AbelianInvariants>{{3, 2}, {1, 1, 1}, {2, 1}, {2, 1}}));
    const auto b = predicted_pattern3({2, TktFamily::E8_E9, 2});
    EXPECT_EQ(b.ttt[1], (std::vector<AbelianInvariants>{{2, 1}, {3, 2}, {2, 1}, {2, 1}}));
    for (int u = 2; u <= 9; ++u) {
        const auto p = predicted_pattern3({u, TktFamily::E8_E9, 4});
        EXPECT_EQ(p.ttt[2], (std::vector<AbelianInvariants>{{u, u, 1}}));
        EXPECT_EQ(p.ttt[0], (std::vector<AbelianInvariants>{{1, 1}}));
        EXPECT_EQ(p.tkt[2], (std::vector<KernelCode>{KernelCode::total_kernel()}));
    }
}

TEST(ThreeStage, KernelTypes)
{
    // none of these is a permutation; fixed points separate E.6 from E.14 and E.8 from E.9
    const std::pair<ThreeStageParams, int> cases[] = {
        {{2, TktFamily::E6_E14, 4}, 1}, {{2, TktFamily::E6_E14, 5}, 0}, {{2, TktFamily::E6_E14, 6}, 0},
        {{2, TktFamily::E8_E9, 2}, 3},  {{2, TktFamily::E8_E9, 4}, 2},  {{2, TktFamily::E8_E9, 6}, 2},
    };
    for (auto const & [p, fixed] : cases) {
        const auto ct = cycle_type(predicted_pattern3(p).tkt[1]);
        EXPECT_EQ(ct.fixed_points, fixed);
        EXPECT_EQ(ct.two_cycles, 0);
        EXPECT_FALSE(ct.is_permutation);
    }
    EXPECT_EQ(tkt_name({2, TktFamily::E6_E14, 4}), "E.6");
    EXPECT_EQ(tkt_name({2, TktFamily::E6_E14, 6}), "E.14");
    EXPECT_EQ(tkt_name({2, TktFamily::E8_E9, 2}), "E.8");
    EXPECT_EQ(tkt_name({2, TktFamily::E8_E9, 4}), "E.9");
}
