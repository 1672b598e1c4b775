#ifndef PTOWER_QUADCLASS_HPP
#define PTOWER_QUADCLASS_HPP

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <ostream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ptower/abelian.hpp"
#include "ptower/errors.hpp"

namespace ptower {

/* Integral binary quadratic form a x^2 + b x y + c y^2.  All forms handled
 * here are positive definite: b^2 - 4ac < 0 and a > 0. */
struct BinaryForm {
    std::int64_t a = 1;
    std::int64_t b = 0;
    std::int64_t c = 1;

    std::int64_t discriminant() const { return b * b - 4 * a * c; }

    bool is_positive_definite() const { return a > 0 && discriminant() < 0; }

    bool is_primitive() const
    {
        return std::gcd(std::gcd(a, b), c) == 1;
    }

    /* |b| <= a <= c, and b >= 0 when |b| = a or a = c. */
    bool is_reduced() const
    {
        if (!is_positive_definite())
            return false;
        if (std::llabs(b) > a || a > c)
            return false;
        if ((std::llabs(b) == a || a == c) && b < 0)
            return false;
        return true;
    }

    friend auto operator<=>(BinaryForm const &, BinaryForm const &) = default;

    friend std::ostream & operator<<(std::ostream & os, BinaryForm const & f)
    {
        return os << '(' << f.a << ", " << f.b << ", " << f.c << ')';
    }
};

inline bool is_valid_negative_discriminant(std::int64_t D)
{
    const std::int64_t r = ((D % 4) + 4) % 4;
    return D < 0 && (r == 0 || r == 1);
}

/* The principal form of discriminant D: (1, 0, -D/4) or (1, 1, (1-D)/4). */
inline BinaryForm principal_form(std::int64_t D)
{
    if (!is_valid_negative_discriminant(D))
        throw precondition_error("principal_form: invalid discriminant " + std::to_string(D));
    const std::int64_t b = (D % 2 == 0) ? 0 : 1;
    return {1, b, (b * b - D) / 4};
}

inline BinaryForm reduce(BinaryForm f)
{
    if (!f.is_positive_definite())
        throw precondition_error("reduce: form is not positive definite");
    for (;;) {
        // normalize b into (-a, a]
        if (f.b > f.a || f.b <= -f.a) {
            const std::int64_t two_a = 2 * f.a;
            std::int64_t k = (f.a - f.b) / two_a;
            if ((f.a - f.b) % two_a < 0)
                --k; // floor division
            // b' = b + 2ak lies in (-a, a]
            const std::int64_t nb = f.b + two_a * k;
            f.c = f.a * k * k + f.b * k + f.c;
            f.b = nb;
        }
        if (f.a > f.c) {
            std::swap(f.a, f.c);
            f.b = -f.b;
            continue;
        }
        if (f.a == f.c && f.b < 0)
            f.b = -f.b;
        return f;
    }
}

/* All primitive reduced forms of discriminant D; the count is h(D). */
inline std::vector<BinaryForm> reduced_forms(std::int64_t D)
{
    if (!is_valid_negative_discriminant(D))
        throw precondition_error("reduced_forms: invalid discriminant " + std::to_string(D));
    std::vector<BinaryForm> out;
    const std::int64_t N = -D;
    // reduced implies 3a^2 <= |D|
    for (std::int64_t a = 1; 3 * a * a <= N; ++a) {
        for (std::int64_t b = -a + 1; b <= a; ++b) {
            if (((b - D) & 1) != 0)
                continue;
            const std::int64_t num = b * b - D;
            if (num % (4 * a) != 0)
                continue;
            const BinaryForm f{a, b, num / (4 * a)};
            if (f.is_reduced() && f.is_primitive())
                out.push_back(f);
        }
    }
    return out;
}

/* h(D), counting reduced forms without materializing them. */
inline std::int64_t class_number(std::int64_t D)
{
    if (!is_valid_negative_discriminant(D))
        throw precondition_error("class_number: invalid discriminant " + std::to_string(D));
    const std::int64_t N = -D;
    std::int64_t h = 0;
    const std::int64_t b0 = N & 1;
    for (std::int64_t a = 1; 3 * a * a <= N; ++a) {
        const std::int64_t four_a = 4 * a;
        for (std::int64_t b = b0; b <= a; b += 2) {
            const std::int64_t num = b * b + N;
            if (num % four_a != 0)
                continue;
            const std::int64_t c = num / four_a;
            if (c < a || std::gcd(std::gcd(a, b), c) != 1)
                continue;
            // (a, -b, c) is reduced as well unless b = 0, b = a or a = c
            h += (b == 0 || b == a || a == c) ? 1 : 2;
        }
    }
    return h;
}

namespace detail {

/* Returns g = gcd(a, b) with u a + v b = g. */
inline std::int64_t ext_gcd(std::int64_t a, std::int64_t b, std::int64_t & u, std::int64_t & v)
{
    std::int64_t u0 = 1, v0 = 0, u1 = 0, v1 = 1;
    while (b != 0) {
        const std::int64_t q = a / b;
        std::tie(a, b) = std::make_pair(b, a - q * b);
        std::tie(u0, u1) = std::make_pair(u1, u0 - q * u1);
        std::tie(v0, v1) = std::make_pair(v1, v0 - q * v1);
    }
    if (a < 0) {
        a = -a;
        u0 = -u0;
        v0 = -v0;
    }
    u = u0;
    v = v0;
    return a;
}

inline std::int64_t mod_floor(std::int64_t x, std::int64_t m)
{
    std::int64_t r = x % m;
    return r < 0 ? r + m : r;
}

} // namespace detail

/* Gauss composition via Dirichlet's united forms.  With
 * d1 = gcd(a1, a2, (b1+b2)/2) the composite is (a1 a2 / d1^2, B, *), where B
 * is the common middle coefficient of the united forms:
 * B = b1 (mod 2a1/d1), B = b2 (mod 2a2/d1), B^2 = D (mod 4 a1 a2 / d1^2).
 * The two Bezout steps below solve that system. */
inline BinaryForm compose(BinaryForm f, BinaryForm g)
{
    const std::int64_t D = f.discriminant();
    if (g.discriminant() != D)
        throw precondition_error("compose: discriminants differ");
    if (!f.is_positive_definite() || !g.is_positive_definite())
        throw precondition_error("compose: forms must be positive definite");

    if (f.a > g.a)
        std::swap(f, g);
    const std::int64_t s = (f.b + g.b) / 2;
    const std::int64_t n = g.b - s;

    std::int64_t y1 = 0, d = f.a;
    if (g.a % f.a != 0) {
        std::int64_t u, v;
        d = detail::ext_gcd(g.a, f.a, u, v); // u a2 + v a1 = d
        y1 = u;
    }
    std::int64_t x2 = 0, y2 = -1, d1 = d;
    if (s % d != 0) {
        std::int64_t yy;
        d1 = detail::ext_gcd(s, d, x2, yy); // x2 s + yy d = d1
        y2 = -yy;
    }
    const std::int64_t v1 = f.a / d1;
    const std::int64_t v2 = g.a / d1;
    const std::int64_t r = detail::mod_floor(y1 * y2 * n - x2 * g.c, v1);
    const std::int64_t a3 = v1 * v2;
    const std::int64_t b3 = g.b + 2 * v2 * r;
    const std::int64_t num = b3 * b3 - D;
    if (num % (4 * a3) != 0)
        throw internal_error("compose: united form construction failed");
    return reduce({a3, b3, num / (4 * a3)});
}

inline BinaryForm inverse(BinaryForm const & f)
{
    return reduce({f.a, -f.b, f.c});
}

/* Class group of discriminant D as a finite abelian group. */
struct ClassGroupStructure {
    std::int64_t discriminant = 0;
    std::int64_t order = 0;
    std::vector<std::int64_t> invariants; // descending, each divides its predecessor
};

/* Multiplication table of the form class group: table[i][j] is the index of
 * forms[i] * forms[j] in forms. */
inline std::vector<std::vector<std::size_t>>
composition_table(std::vector<BinaryForm> const & forms)
{
    std::vector<std::vector<std::size_t>> table(forms.size(), std::vector<std::size_t>(forms.size()));
    for (std::size_t i = 0; i < forms.size(); ++i)
        for (std::size_t j = 0; j < forms.size(); ++j) {
            const BinaryForm h = compose(forms[i], forms[j]);
            const auto it = std::lower_bound(forms.begin(), forms.end(), h);
            if (it == forms.end() || *it != h)
                throw internal_error("composition_table: product is not a listed reduced form");
            table[i][j] = static_cast<std::size_t>(it - forms.begin());
        }
    return table;
}

inline ClassGroupStructure class_group(std::int64_t D)
{
    auto forms = reduced_forms(D);
    std::sort(forms.begin(), forms.end());
    const auto table = composition_table(forms);
    const BinaryForm one = principal_form(D);
    const auto id = static_cast<std::size_t>(
        std::lower_bound(forms.begin(), forms.end(), one) - forms.begin());

    std::vector<std::int64_t> orders(forms.size());
    for (std::size_t i = 0; i < forms.size(); ++i) {
        std::size_t x = i;
        std::int64_t o = 1;
        while (x != id) {
            x = table[x][i];
            ++o;
        }
        orders[i] = o;
    }
    ClassGroupStructure out;
    out.discriminant = D;
    out.order = static_cast<std::int64_t>(forms.size());
    out.invariants = invariant_factors_from_orders(orders);
    std::erase(out.invariants, 1);
    return out;
}

/* Discriminant of Q(sqrt(r)) for a squarefree r < 0. */
inline std::int64_t field_discriminant(std::int64_t r)
{
    if (r >= 0)
        throw precondition_error("field_discriminant: radicand must be negative");
    return (((r % 4) + 4) % 4 == 1) ? r : 4 * r;
}

/* 2-part of the class number of Q(sqrt(r)), r < 0 squarefree. */
inline std::int64_t two_class_number(std::int64_t r)
{
    if (r >= 0 || r == -1 || (((r % 4) + 4) % 4) == 0)
        throw precondition_error("two_class_number: invalid radicand " + std::to_string(r));
    for (std::int64_t p = 2; p * p <= -r; ++p)
        if ((-r) % (p * p) == 0)
            throw precondition_error("two_class_number: radicand not squarefree");
    std::int64_t h = class_number(field_discriminant(r));
    std::int64_t two = 1;
    while (h % 2 == 0) {
        h /= 2;
        two *= 2;
    }
    return two;
}

} // namespace ptower

#endif
