#ifndef PTOWER_ABELIAN_HPP
#define PTOWER_ABELIAN_HPP

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include "ptower/errors.hpp"

namespace ptower {

/* Abelian p-group type in logarithmic notation: (2,1) is Z/p^2 x Z/p.
 * Entries are kept weakly descending and positive; the trivial group is (). */
class AbelianInvariants
{
  public:
    AbelianInvariants() = default;

    explicit AbelianInvariants(std::vector<int> exps) : exps_(std::move(exps))
    {
        std::erase_if(exps_, [](int e) { return e == 0; });
        for (int e : exps_)
            if (e < 0)
                throw precondition_error("AbelianInvariants: negative exponent");
        std::sort(exps_.begin(), exps_.end(), std::greater<>());
    }

    AbelianInvariants(std::initializer_list<int> exps)
        : AbelianInvariants(std::vector<int>(exps))
    {
    }

    std::vector<int> const & exponents() const { return exps_; }
    std::size_t rank() const { return exps_.size(); }
    int log_order() const { return std::accumulate(exps_.begin(), exps_.end(), 0); }

    std::string str() const
    {
        std::string s = "(";
        for (std::size_t i = 0; i < exps_.size(); ++i) {
            if (i)
                s += ',';
            s += std::to_string(exps_[i]);
        }
        return s + ")";
    }

    friend auto operator<=>(AbelianInvariants const &, AbelianInvariants const &) = default;

    friend std::ostream & operator<<(std::ostream & os, AbelianInvariants const & a)
    {
        return os << a.str();
    }

  private:
    std::vector<int> exps_;
};

/* Recover the type of an abelian p-group from the sizes of its
 * Omega-layers: omega_log[k] = log_p |{x : x^(p^k) = 1}|, k = 0,1,...
 * until it stabilizes.  The number of cyclic factors of exponent >= k is
 * omega_log[k] - omega_log[k-1]. */
inline AbelianInvariants invariants_from_omega(std::vector<int> const & omega_log)
{
    std::vector<int> at_least; // at_least[k-1] = #factors with exponent >= k
    for (std::size_t k = 1; k < omega_log.size(); ++k) {
        const int c = omega_log[k] - omega_log[k - 1];
        if (c < 0)
            throw internal_error("invariants_from_omega: omega sizes not monotone");
        if (c == 0)
            break;
        at_least.push_back(c);
    }
    std::vector<int> exps;
    for (std::size_t k = 0; k < at_least.size(); ++k) {
        const int next = k + 1 < at_least.size() ? at_least[k + 1] : 0;
        if (next > at_least[k])
            throw internal_error("invariants_from_omega: inconsistent layer counts");
        for (int i = 0; i < at_least[k] - next; ++i)
            exps.push_back(static_cast<int>(k + 1));
    }
    return AbelianInvariants(std::move(exps));
}

/* Diagonal of the Smith normal form of an integer matrix (nonzero entries
 * only, each dividing the next).  Rows are relations, columns generators. */
inline std::vector<std::int64_t> smith_diagonal(std::vector<std::vector<std::int64_t>> a)
{
    std::vector<std::int64_t> diag;
    if (a.empty())
        return diag;
    const std::size_t rows = a.size();
    const std::size_t cols = a[0].size();
    std::size_t t = 0;
    while (t < rows && t < cols) {
        // pivot: smallest nonzero absolute value in the remaining block
        std::size_t pr = rows, pc = cols;
        std::int64_t best = 0;
        for (std::size_t i = t; i < rows; ++i)
            for (std::size_t j = t; j < cols; ++j)
                if (a[i][j] != 0 && (best == 0 || std::llabs(a[i][j]) < best)) {
                    best = std::llabs(a[i][j]);
                    pr = i;
                    pc = j;
                }
        if (best == 0)
            break;
        std::swap(a[t], a[pr]);
        for (auto & row : a)
            std::swap(row[t], row[pc]);

        bool clean = false;
        while (!clean) {
            clean = true;
            for (std::size_t i = t + 1; i < rows; ++i) {
                const std::int64_t f = a[i][t] / a[t][t];
                if (f != 0)
                    for (std::size_t j = t; j < cols; ++j)
                        a[i][j] -= f * a[t][j];
                if (a[i][t] != 0) {
                    std::swap(a[t], a[i]);
                    clean = false;
                }
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                const std::int64_t f = a[t][j] / a[t][t];
                if (f != 0)
                    for (std::size_t i = t; i < rows; ++i)
                        a[i][j] -= f * a[i][t];
                if (a[t][j] != 0) {
                    for (auto & row : a)
                        std::swap(row[t], row[j]);
                    clean = false;
                }
            }
            if (clean) {
                // divisibility: fold any entry not divisible by the pivot
                for (std::size_t i = t + 1; i < rows && clean; ++i)
                    for (std::size_t j = t + 1; j < cols; ++j)
                        if (a[i][j] % a[t][t] != 0) {
                            for (std::size_t k = t; k < cols; ++k)
                                a[t][k] += a[i][k];
                            clean = false;
                            break;
                        }
            }
        }
        diag.push_back(std::llabs(a[t][t]));
        ++t;
    }
    return diag;
}

/* Invariant factors (descending, each dividing its predecessor) of a
 * finite abelian group given by its element orders. */
inline std::vector<std::int64_t>
invariant_factors_from_orders(std::vector<std::int64_t> const & element_orders)
{
    const auto n = static_cast<std::int64_t>(element_orders.size());
    if (n == 0)
        throw precondition_error("invariant_factors_from_orders: empty group");
    // prime factors of the group order
    std::vector<std::int64_t> primes;
    {
        std::int64_t m = n;
        for (std::int64_t p = 2; p * p <= m; ++p)
            if (m % p == 0) {
                primes.push_back(p);
                while (m % p == 0)
                    m /= p;
            }
        if (m > 1)
            primes.push_back(m);
    }
    // per prime: type of the Sylow subgroup via Omega counts
    std::vector<std::vector<std::int64_t>> sylow_cyclic; // prime powers, descending
    for (std::int64_t p : primes) {
        std::vector<int> omega_log;
        std::int64_t pk = 1;
        std::int64_t base = 0; // elements of order prime to p
        int prev = -1;
        for (;;) {
            std::int64_t cnt = 0;
            for (std::int64_t o : element_orders) {
                // p-part of o divides p^k
                std::int64_t pp = 1, oo = o;
                while (oo % p == 0) {
                    oo /= p;
                    pp *= p;
                }
                if (pk % pp == 0)
                    ++cnt;
            }
            if (base == 0)
                base = cnt;
            if (cnt % base != 0)
                throw internal_error("invariant_factors_from_orders: not a group");
            cnt /= base;
            int lg = 0;
            while (cnt > 1) {
                if (cnt % p != 0)
                    throw internal_error("invariant_factors_from_orders: not a group");
                cnt /= p;
                ++lg;
            }
            omega_log.push_back(lg);
            if (lg == prev)
                break;
            prev = lg;
            pk *= p;
        }
        const auto inv = invariants_from_omega(omega_log);
        std::vector<std::int64_t> powers;
        for (int e : inv.exponents()) {
            std::int64_t q = 1;
            for (int i = 0; i < e; ++i)
                q *= p;
            powers.push_back(q);
        }
        sylow_cyclic.push_back(std::move(powers));
    }
    std::size_t len = 0;
    for (auto const & v : sylow_cyclic)
        len = std::max(len, v.size());
    std::vector<std::int64_t> out(len, 1);
    for (auto const & v : sylow_cyclic)
        for (std::size_t i = 0; i < v.size(); ++i)
            out[i] *= v[i];
    return out;
}

} // namespace ptower

#endif
