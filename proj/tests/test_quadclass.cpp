#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "ptower/quadclass.hpp"

using namespace ptower;

namespace {

bool valid(std::int64_t D)
{
    return is_valid_negative_discriminant(D);
}

/* All forms reachable from f by the basic moves (a,b,c) -> (a, b+2a, ...)
 * and (a,b,c) -> (c,-b,a), restricted to a bounded box. */
std::set<BinaryForm> orbit_box(BinaryForm f, std::int64_t bound)
{
    std::set<BinaryForm> seen{f};
    std::vector<BinaryForm> todo{f};
    while (!todo.empty()) {
        const auto g = todo.back();
        todo.pop_back();
        const BinaryForm next[] = {
            {g.a, g.b + 2 * g.a, g.a + g.b + g.c},
            {g.a, g.b - 2 * g.a, g.a - g.b + g.c},
            {g.c, -g.b, g.a},
        };
        for (auto const & h : next)
            if (std::abs(h.a) <= bound && std::abs(h.b) <= bound && std::abs(h.c) <= bound
                && seen.insert(h).second)
                todo.push_back(h);
    }
    return seen;
}

} // namespace

TEST(Reduce, Examples)
{
    EXPECT_EQ(reduce({1, 0, 17}), (BinaryForm{1, 0, 17}));
    EXPECT_EQ(reduce({17, 0, 1}), (BinaryForm{1, 0, 17}));
    EXPECT_EQ(reduce({3, 2, 6}), (BinaryForm{3, 2, 6}));
    EXPECT_TRUE((BinaryForm{3, 2, 6}).is_reduced());
    EXPECT_THROW(reduce({-1, 0, -17}), precondition_error);
    EXPECT_THROW(reduce({1, 3, 1}), precondition_error);
}

TEST(Reduce, StaysInOrbit)
{
    // (3,2,6) and (3,-2,6) are distinct reduced classes of D = -68
    const auto orb = orbit_box({3, 2, 6}, 60);
    EXPECT_TRUE(orb.count({3, 2, 6}));
    EXPECT_FALSE(orb.count({1, 0, 17}));
    EXPECT_FALSE(orb.count({2, 2, 9}));
    for (auto const & g : orb)
        if (g.a > 0 && g.discriminant() == -68) {
            ASSERT_EQ(reduce(g), (BinaryForm{3, 2, 6})) << g;
        }
}

TEST(Reduce, IdempotentAndPreservesDiscriminant)
{
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::int64_t> A(1, 500), B(-2000, 2000);
    int done = 0;
    while (done < 10000) {
        const std::int64_t a = A(rng), b = B(rng);
        // pick c so that the form is positive definite
        const std::int64_t c = (b * b) / (4 * a) + A(rng);
        const BinaryForm f{a, b, c};
        if (!f.is_positive_definite())
            continue;
        const auto r = reduce(f);
        ASSERT_TRUE(r.is_reduced()) << f;
        ASSERT_EQ(r.discriminant(), f.discriminant());
        ASSERT_EQ(reduce(r), r);
        ++done;
    }
}

TEST(ReducedForms, Examples)
{
    EXPECT_EQ(reduced_forms(-3), (std::vector<BinaryForm>{{1, 1, 1}}));
    EXPECT_EQ(reduced_forms(-68).size(), 4u);
    EXPECT_EQ(reduced_forms(-15).size(), 2u);
    EXPECT_THROW(reduced_forms(-5), precondition_error);
    EXPECT_THROW(reduced_forms(4), precondition_error);
}

TEST(ReducedForms, CountMatchesLooseSearch)
{
    for (std::int64_t D = -3; D > -10000; --D) {
        if (!valid(D))
            continue;
        const auto forms = reduced_forms(D);
        ASSERT_EQ(static_cast<int>(forms.size()), oracle::reduced_form_count(D)) << D;
        ASSERT_EQ(class_number(D), static_cast<std::int64_t>(forms.size())) << D;
        std::set<BinaryForm> uniq(forms.begin(), forms.end());
        ASSERT_EQ(uniq.size(), forms.size());
    }
}

TEST(ReducedForms, AnalyticClassNumberFormula)
{
    for (std::int64_t D = -3; D > -3000; --D)
        if (oracle::is_fundamental(D)) {
            ASSERT_EQ(class_number(D), oracle::analytic_class_number(D)) << D;
        }
}

TEST(Compose, Laws)
{
    const auto forms = reduced_forms(-68);
    const auto one = principal_form(-68);
    for (auto const & f : forms) {
        EXPECT_EQ(compose(one, f), f);
        EXPECT_EQ(compose(f, {f.a, -f.b, f.c}), one);
        EXPECT_EQ(compose(f, inverse(f)), one);
    }
    EXPECT_THROW(compose({1, 0, 17}, {1, 1, 1}), precondition_error);
}

TEST(Compose, OrderOfThreeTwoSix)
{
    const BinaryForm f{3, 2, 6};
    const auto one = principal_form(-68);
    BinaryForm x = f;
    int order = 1;
    while (x != one) {
        x = compose(x, f);
        ++order;
    }
    EXPECT_EQ(order, 4);
}

TEST(Compose, GroupAxiomsExhaustive)
{
    int checked = 0;
    for (std::int64_t D = -3; D > -10000; --D) {
        if (!valid(D))
            continue;
        auto forms = reduced_forms(D);
        if (forms.size() > 50)
            continue;
        std::sort(forms.begin(), forms.end());
        const auto T = composition_table(forms);
        const std::size_t h = forms.size();
        const auto one = static_cast<std::size_t>(
            std::lower_bound(forms.begin(), forms.end(), principal_form(D)) - forms.begin());
        for (std::size_t x = 0; x < h; ++x) {
            ASSERT_EQ(T[one][x], x) << D;
            ASSERT_EQ(T[x][one], x) << D;
            bool has_inverse = false;
            for (std::size_t y = 0; y < h; ++y) {
                ASSERT_EQ(T[x][y], T[y][x]) << D;
                has_inverse |= T[x][y] == one;
                for (std::size_t z = 0; z < h; ++z)
                    ASSERT_EQ(T[T[x][y]][z], T[x][T[y][z]]) << D;
            }
            ASSERT_TRUE(has_inverse) << D;
        }
        ++checked;
    }
    EXPECT_GT(checked, 4000);
}

TEST(ClassGroup, Examples)
{
    EXPECT_EQ(class_group(-68).order, 4);
    EXPECT_EQ(class_group(-68).invariants, (std::vector<std::int64_t>{4}));
    EXPECT_EQ(class_group(-15).order, 2);
    EXPECT_EQ(class_group(-15).invariants, (std::vector<std::int64_t>{2}));
    EXPECT_EQ(class_group(-55).order, 4);
    EXPECT_TRUE(class_group(-3).invariants.empty());
    // -420 = -4*3*5*7: four genus characters, (2,2,2)
    EXPECT_EQ(class_group(-420).invariants, (std::vector<std::int64_t>{2, 2, 2}));
}

TEST(ClassGroup, InvariantsMultiplyAndDivide)
{
    for (std::int64_t D = -3; D > -5000; --D) {
        if (!valid(D))
            continue;
        const auto cg = class_group(D);
        std::int64_t prod = 1;
        for (std::size_t i = 0; i < cg.invariants.size(); ++i) {
            prod *= cg.invariants[i];
            if (i) {
                ASSERT_EQ(cg.invariants[i - 1] % cg.invariants[i], 0) << D;
            }
        }
        ASSERT_EQ(prod, cg.order) << D;
    }
}

TEST(TwoClassNumber, Examples)
{
    EXPECT_EQ(field_discriminant(-17), -68);
    EXPECT_EQ(field_discriminant(-15), -15);
    EXPECT_EQ(two_class_number(-17), 4);
    EXPECT_EQ(two_class_number(-15), 2);
    EXPECT_EQ(two_class_number(-55), 4);
    EXPECT_THROW(two_class_number(-12), precondition_error);
    EXPECT_THROW(two_class_number(5), precondition_error);
    EXPECT_THROW(two_class_number(-1), precondition_error);
}

TEST(TwoClassNumber, ParityLaw)
{
    for (std::int64_t p = 3; p < 20000; ++p)
        if (p % 8 == 1 && oracle::is_prime(p)) {
            ASSERT_GE(two_class_number(-p), 4) << p;
        }
}
