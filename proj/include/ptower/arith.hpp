#ifndef PTOWER_ARITH_HPP
#define PTOWER_ARITH_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ptower/errors.hpp"

namespace ptower {

/* Kronecker symbol (a/n), n != 0. */
inline int kronecker(std::int64_t a, std::int64_t n)
{
    if (n == 0)
        throw precondition_error("kronecker: n must be nonzero");

    int sign = 1;
    std::uint64_t m;
    if (n < 0) {
        m = static_cast<std::uint64_t>(-(n + 1)) + 1;
        if (a < 0)
            sign = -sign;
    } else {
        m = static_cast<std::uint64_t>(n);
    }

    // strip factors of two from the modulus: (a/2) = 0 for even a,
    // otherwise +1 for a = +-1 mod 8 and -1 for a = +-3 mod 8
    int twos = 0;
    while ((m & 1u) == 0) {
        m >>= 1;
        ++twos;
    }
    if (twos > 0) {
        if ((a & 1) == 0)
            return 0;
        const std::int64_t r = ((a % 8) + 8) % 8;
        if ((twos & 1) && (r == 3 || r == 5))
            sign = -sign;
    }
    if (m == 1)
        return sign;

    // Jacobi symbol (a/m), m odd > 1
    std::int64_t ma = a % static_cast<std::int64_t>(m);
    if (ma < 0)
        ma += static_cast<std::int64_t>(m);
    std::uint64_t x = static_cast<std::uint64_t>(ma);
    while (x != 0) {
        while ((x & 1u) == 0) {
            x >>= 1;
            const std::uint64_t r = m % 8;
            if (r == 3 || r == 5)
                sign = -sign;
        }
        std::swap(x, m);
        if (x % 4 == 3 && m % 4 == 3)
            sign = -sign;
        x %= m;
    }
    return m == 1 ? sign : 0;
}

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m)
{
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m)
{
    std::uint64_t r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1u)
            r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

} // namespace detail

/* Deterministic Miller-Rabin; the first twelve prime bases are a
 * witness set for every n < 3.3e24, which covers 64 bits. */
inline bool is_prime(std::uint64_t n)
{
    if (n < 2)
        return false;
    static constexpr std::uint64_t bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (std::uint64_t p : bases) {
        if (n % p == 0)
            return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1u) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : bases) {
        std::uint64_t x = detail::powmod(a, d, n);
        if (x == 1 || x == n - 1)
            continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = detail::mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite)
            return false;
    }
    return true;
}

/* Primes up to a fixed bound, built once and shared read-only. */
class PrimeSieve
{
  public:
    static constexpr std::uint32_t bound = 1u << 20;

    static PrimeSieve const & instance()
    {
        static const PrimeSieve sieve;
        return sieve;
    }

    std::vector<std::uint32_t> const & primes() const { return primes_; }

  private:
    PrimeSieve()
    {
        std::vector<bool> composite(bound + 1, false);
        for (std::uint32_t i = 2; i <= bound; ++i) {
            if (composite[i])
                continue;
            primes_.push_back(i);
            for (std::uint64_t j = std::uint64_t(i) * i; j <= bound; j += i)
                composite[j] = true;
        }
    }

    std::vector<std::uint32_t> primes_;
};

/* Largest d accepted by factor(): trial division by the shared sieve is
 * exhaustive below its square. */
inline constexpr std::uint64_t max_factorable =
    std::uint64_t(PrimeSieve::bound) * PrimeSieve::bound;

/* Prime factorization as (prime, exponent) pairs in ascending order. */
inline std::vector<std::pair<std::uint64_t, int>> factor(std::uint64_t n)
{
    if (n == 0)
        throw precondition_error("factor: n must be positive");
    if (n > max_factorable)
        throw precondition_error("factor: n exceeds the trial-division range");
    std::vector<std::pair<std::uint64_t, int>> out;
    for (std::uint32_t p : PrimeSieve::instance().primes()) {
        if (std::uint64_t(p) * p > n)
            break;
        if (n % p)
            continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
    if (n > 1)
        out.emplace_back(n, 1);
    return out;
}

struct RadicandProfile {
    std::uint64_t d = 0;
    std::uint64_t p1 = 0; // = 1 mod 8
    std::uint64_t p2 = 0; // = 5 mod 8
    std::uint64_t q = 0;  // = 3 mod 4
    int legendre_p1_p2 = 0;
    int legendre_p1_q = 0;
    int legendre_p2_q = 0;

    friend bool operator==(RadicandProfile const &, RadicandProfile const &) = default;
};

enum class RejectReason {
    none,
    not_squarefree,
    wrong_factor_count,
    no_congruence_assignment,
    legendre_p1_p2,
    legendre_p1_q,
};

inline std::string_view to_string(RejectReason r)
{
    switch (r) {
    case RejectReason::none: return "none";
    case RejectReason::not_squarefree: return "not-squarefree";
    case RejectReason::wrong_factor_count: return "wrong-factor-count";
    case RejectReason::no_congruence_assignment: return "no-congruence-assignment";
    case RejectReason::legendre_p1_p2: return "legendre-p1-p2";
    case RejectReason::legendre_p1_q: return "legendre-p1-q";
    }
    return "unknown";
}

/* Either an accepted profile or the first condition that failed. */
struct RadicandCheck {
    std::optional<RadicandProfile> profile;
    RejectReason reason = RejectReason::none;

    bool accepted() const { return profile.has_value(); }
};

inline RadicandCheck profile_radicand(std::uint64_t d)
{
    if (d == 0)
        throw precondition_error("profile_radicand: d must be positive");

    const auto fac = factor(d);
    for (auto const & [p, e] : fac) {
        if (e > 1)
            return {std::nullopt, RejectReason::not_squarefree};
    }
    if (fac.size() != 3)
        return {std::nullopt, RejectReason::wrong_factor_count};

    RadicandProfile prof;
    prof.d = d;
    int assigned = 0;
    for (auto const & [p, e] : fac) {
        // the three residue classes are pairwise disjoint, so each prime
        // lands in at most one slot
        if (p % 8 == 1 && prof.p1 == 0) {
            prof.p1 = p;
            ++assigned;
        } else if (p % 8 == 5 && prof.p2 == 0) {
            prof.p2 = p;
            ++assigned;
        } else if (p % 4 == 3 && prof.q == 0) {
            prof.q = p;
            ++assigned;
        }
    }
    if (assigned != 3)
        return {std::nullopt, RejectReason::no_congruence_assignment};

    const auto sp1 = static_cast<std::int64_t>(prof.p1);
    const auto sp2 = static_cast<std::int64_t>(prof.p2);
    const auto sq = static_cast<std::int64_t>(prof.q);
    prof.legendre_p1_p2 = kronecker(sp1, sp2);
    prof.legendre_p1_q = kronecker(sp1, sq);
    prof.legendre_p2_q = kronecker(sp2, sq);
    if (prof.legendre_p1_p2 != -1)
        return {std::nullopt, RejectReason::legendre_p1_p2};
    if (prof.legendre_p1_q != -1)
        return {std::nullopt, RejectReason::legendre_p1_q};
    return {prof, RejectReason::none};
}

} // namespace ptower

#endif
