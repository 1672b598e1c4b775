#ifndef PTOWER_PCGROUP_HPP
#define PTOWER_PCGROUP_HPP

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <deque>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ptower/abelian.hpp"
#include "ptower/errors.hpp"

namespace ptower {

/* g_gen^exp; gen is 0-based, exp may be negative. */
struct Syllable {
    int gen = 0;
    std::int64_t exp = 1;
};

using Word = std::vector<Syllable>;

/* Normal form g_1^e_1 ... g_k^e_k with 0 <= e_i < r_i. */
struct Element {
    std::vector<int> exps;

    Element() = default;
    explicit Element(std::vector<int> e) : exps(std::move(e)) {}

    std::size_t size() const { return exps.size(); }
    int operator[](std::size_t i) const { return exps[i]; }
    bool is_identity() const
    {
        return std::all_of(exps.begin(), exps.end(), [](int e) { return e == 0; });
    }

    friend auto operator<=>(Element const &, Element const &) = default;
};

/* Element budget for anything that enumerates a group.  The default of
 * 2^20 may be overridden through PTOWER_MAX_LOG2_ORDER. */
inline int max_log2_order()
{
    if (const char * env = std::getenv("PTOWER_MAX_LOG2_ORDER")) {
        char * end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 0 && v <= 31)
            return static_cast<int>(v);
    }
    return 20;
}

/* Polycyclic presentation of a finite p-group.  Relative orders are powers
 * of p.  power(i) is the normal form of g_i^(r_i); conjugate(i, j) is the
 * normal form of g_j^(g_i) = g_i^-1 g_j g_i for i < j.  Both are supported
 * on generators of index > i. */
class PcPresentation
{
  public:
    PcPresentation() = default;

    PcPresentation(int p, std::vector<int> relative_orders)
        : p_(p), orders_(std::move(relative_orders))
    {
        if (p < 2)
            throw precondition_error("PcPresentation: p must be prime");
        for (int d = 2; d * d <= p; ++d)
            if (p % d == 0)
                throw precondition_error("PcPresentation: p must be prime");
        for (int r : orders_) {
            int x = r;
            while (x > 1 && x % p == 0)
                x /= p;
            if (r < p || x != 1)
                throw precondition_error("PcPresentation: relative order "
                                         + std::to_string(r) + " is not a power of p");
        }
        const auto g = orders_.size();
        powers_.assign(g, Element(std::vector<int>(g, 0)));
        conjugates_.assign(g, std::vector<Element>(g));
        for (std::size_t i = 0; i < g; ++i)
            for (std::size_t j = i + 1; j < g; ++j) {
                std::vector<int> e(g, 0);
                e[j] = 1;
                conjugates_[i][j] = Element(std::move(e));
            }
    }

    int prime() const { return p_; }
    int generator_count() const { return static_cast<int>(orders_.size()); }
    int relative_order(int i) const { return orders_.at(static_cast<std::size_t>(i)); }
    std::vector<int> const & relative_orders() const { return orders_; }

    Element const & power(int i) const { return powers_.at(static_cast<std::size_t>(i)); }

    Element const & conjugate(int i, int j) const
    {
        if (!(0 <= i && i < j && j < generator_count()))
            throw precondition_error("conjugate: need 0 <= i < j < g");
        return conjugates_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }

    void set_power(int i, Element w)
    {
        check_index(i);
        check_tail(w, i);
        powers_[static_cast<std::size_t>(i)] = std::move(w);
    }

    void set_conjugate(int i, int j, Element w)
    {
        if (!(0 <= i && i < j && j < generator_count()))
            throw precondition_error("set_conjugate: need 0 <= i < j < g");
        check_tail(w, i);
        conjugates_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = std::move(w);
    }

    /* log_p of the product of relative orders. */
    int log_order() const
    {
        int s = 0;
        for (int r : orders_)
            for (int x = r; x > 1; x /= p_)
                ++s;
        return s;
    }

    /* Product of relative orders; saturates at UINT64_MAX. */
    std::uint64_t order_bound() const
    {
        std::uint64_t n = 1;
        for (int r : orders_) {
            if (n > UINT64_MAX / static_cast<std::uint64_t>(r))
                return UINT64_MAX;
            n *= static_cast<std::uint64_t>(r);
        }
        return n;
    }

    /* Plain-text form: "p g", the relative orders one per line, then every
     * power relation "P i : w" and every conjugate relation "C i j : w",
     * indices 1-based, words as "g<k>^<e>" tokens. */
    std::string to_text() const
    {
        std::ostringstream os;
        os << p_ << ' ' << orders_.size() << '\n';
        for (int r : orders_)
            os << r << '\n';
        const int g = generator_count();
        for (int i = 0; i < g; ++i) {
            os << "P " << i + 1 << " :";
            write_word(os, power(i));
            os << '\n';
        }
        for (int i = 0; i < g; ++i)
            for (int j = i + 1; j < g; ++j) {
                os << "C " << i + 1 << ' ' << j + 1 << " :";
                write_word(os, conjugate(i, j));
                os << '\n';
            }
        return os.str();
    }

    /* Inverse of to_text().  Relation lines may be omitted (trivial power,
     * commuting generators); words must be given in normal form. */
    static PcPresentation parse(std::string_view text)
    {
        std::istringstream is{std::string(text)};
        std::string line;
        auto next_line = [&](std::string & out) {
            while (std::getline(is, out)) {
                if (!out.empty() && out.back() == '\r')
                    out.pop_back();
                if (out.find_first_not_of(" \t") != std::string::npos)
                    return true;
            }
            return false;
        };
        if (!next_line(line))
            throw precondition_error("presentation: missing header line");
        int p = 0, g = -1;
        {
            std::istringstream hs(line);
            if (!(hs >> p >> g) || g < 0)
                throw precondition_error("presentation: bad header '" + line + "'");
        }
        std::vector<int> orders;
        for (int i = 0; i < g; ++i) {
            if (!next_line(line))
                throw precondition_error("presentation: missing relative order");
            std::istringstream rs(line);
            int r = 0;
            if (!(rs >> r))
                throw precondition_error("presentation: bad relative order '" + line + "'");
            orders.push_back(r);
        }
        PcPresentation pres(p, std::move(orders));
        while (next_line(line)) {
            const auto colon = line.find(':');
            if (colon == std::string::npos)
                throw precondition_error("presentation: relation without ':' '" + line + "'");
            std::istringstream hs(line.substr(0, colon));
            char kind = 0;
            hs >> kind;
            const Element w = pres.parse_normal_word(line.substr(colon + 1));
            if (kind == 'P') {
                int i = 0;
                if (!(hs >> i))
                    throw precondition_error("presentation: bad power relation '" + line + "'");
                pres.set_power(i - 1, w);
            } else if (kind == 'C') {
                int i = 0, j = 0;
                if (!(hs >> i >> j))
                    throw precondition_error("presentation: bad conjugate relation '" + line + "'");
                pres.set_conjugate(i - 1, j - 1, w);
            } else {
                throw precondition_error("presentation: unknown relation kind '" + line + "'");
            }
        }
        return pres;
    }

    /* Parse "g2^3 g3^1" style tokens (1-based generator numbers). */
    static Word parse_word(std::string_view text)
    {
        Word w;
        std::istringstream ts{std::string(text)};
        std::string tok;
        while (ts >> tok) {
            if (tok.size() < 2 || tok[0] != 'g')
                throw precondition_error("word: bad token '" + tok + "'");
            const auto caret = tok.find('^');
            try {
                const int gen = std::stoi(tok.substr(1, caret == std::string::npos ? std::string::npos : caret - 1));
                const std::int64_t e = caret == std::string::npos ? 1 : std::stoll(tok.substr(caret + 1));
                w.push_back({gen - 1, e});
            } catch (std::logic_error const &) {
                throw precondition_error("word: bad token '" + tok + "'");
            }
        }
        return w;
    }

    friend bool operator==(PcPresentation const &, PcPresentation const &) = default;

  private:
    void check_index(int i) const
    {
        if (i < 0 || i >= generator_count())
            throw precondition_error("generator index out of range");
    }

    void check_tail(Element const & w, int i) const
    {
        if (static_cast<int>(w.size()) != generator_count())
            throw precondition_error("relation word has wrong length");
        for (int k = 0; k < generator_count(); ++k) {
            const int e = w[static_cast<std::size_t>(k)];
            if (e < 0 || e >= orders_[static_cast<std::size_t>(k)])
                throw precondition_error("relation word is not in normal form");
            if (k <= i && e != 0)
                throw precondition_error("relation word must involve only later generators");
        }
    }

    Element parse_normal_word(std::string_view text) const
    {
        std::vector<int> e(orders_.size(), 0);
        int last = -1;
        for (auto const & s : parse_word(text)) {
            if (s.gen < 0 || s.gen >= generator_count())
                throw precondition_error("word: generator index out of range");
            if (s.gen <= last || s.exp <= 0 || s.exp >= orders_[static_cast<std::size_t>(s.gen)])
                throw precondition_error("word: not in normal form");
            e[static_cast<std::size_t>(s.gen)] = static_cast<int>(s.exp);
            last = s.gen;
        }
        return Element(std::move(e));
    }

    static void write_word(std::ostream & os, Element const & w)
    {
        for (std::size_t k = 0; k < w.size(); ++k)
            if (w[k] != 0)
                os << " g" << k + 1 << '^' << w[k];
    }

    int p_ = 2;
    std::vector<int> orders_;
    std::vector<Element> powers_;
    std::vector<std::vector<Element>> conjugates_;
};

/* Symbolic group arithmetic on a pc presentation by collection from the
 * left.  An element g_1^e_1 ... g_n^e_n times g_k^e is rewritten as
 *   head * g_k^(e_k + e) * tail^(g_k^e),
 * where the overflow of g_k^(e_k+e) is replaced by the power relation and
 * the conjugated tail is expanded through the conjugate relations.  Every
 * recursive step only involves generators of larger index, so the process
 * terminates. */
class PcGroup
{
  public:
    explicit PcGroup(PcPresentation pres) : pres_(std::move(pres))
    {
        const int g = pres_.generator_count();
        conj_powers_.resize(static_cast<std::size_t>(g));
        inv_powers_.resize(static_cast<std::size_t>(g));
        for (int i = g - 1; i >= 0; --i) {
            // (g_j^t)^(g_i) for t < r_j, built with generators > i only
            auto & row = conj_powers_[static_cast<std::size_t>(i)];
            row.resize(static_cast<std::size_t>(g));
            for (int j = i + 1; j < g; ++j) {
                auto & col = row[static_cast<std::size_t>(j)];
                const int r = pres_.relative_order(j);
                col.reserve(static_cast<std::size_t>(r));
                col.push_back(identity());
                for (int t = 1; t < r; ++t)
                    col.push_back(multiply(col.back(), pres_.conjugate(i, j)));
            }
            inv_powers_[static_cast<std::size_t>(i)] = inverse(pres_.power(i));
        }
    }

    PcPresentation const & presentation() const { return pres_; }
    int generator_count() const { return pres_.generator_count(); }

    Element identity() const
    {
        return Element(std::vector<int>(static_cast<std::size_t>(generator_count()), 0));
    }

    Element generator(int i) const
    {
        if (i < 0 || i >= generator_count())
            throw precondition_error("generator index out of range");
        Element e = identity();
        e.exps[static_cast<std::size_t>(i)] = 1;
        return e;
    }

    /* v * g_k^e for e >= 0. */
    Element multiply_generator_power(Element v, int k, std::int64_t e) const
    {
        if (k < 0 || k >= generator_count())
            throw precondition_error("generator index out of range");
        if (e < 0)
            throw precondition_error("multiply_generator_power: negative exponent");
        if (e == 0)
            return v;
        const auto ks = static_cast<std::size_t>(k);
        const int g = generator_count();
        Element tail = identity();
        bool has_tail = false;
        for (int j = k + 1; j < g; ++j) {
            const auto js = static_cast<std::size_t>(j);
            tail.exps[js] = v.exps[js];
            has_tail = has_tail || v.exps[js] != 0;
            v.exps[js] = 0;
        }
        const std::int64_t r = pres_.relative_order(k);
        const std::int64_t s = v.exps[ks] + e;
        v.exps[ks] = static_cast<int>(s % r);
        for (std::int64_t q = s / r; q > 0; --q)
            v = multiply(std::move(v), pres_.power(k));
        if (has_tail) {
            for (std::int64_t t = 0; t < e; ++t)
                tail = conjugate_by_generator(tail, k);
            v = multiply(std::move(v), tail);
        }
        return v;
    }

    Element multiply(Element v, Element const & w) const
    {
        for (int j = 0; j < generator_count(); ++j)
            if (w.exps[static_cast<std::size_t>(j)] != 0)
                v = multiply_generator_power(std::move(v), j, w.exps[static_cast<std::size_t>(j)]);
        return v;
    }

    /* x = g_k^e y with y supported beyond k, so
     * x^-1 = y^-1 g_k^(r_k - e) (g_k^(r_k))^-1. */
    Element inverse(Element const & x) const
    {
        const int g = generator_count();
        int k = 0;
        while (k < g && x.exps[static_cast<std::size_t>(k)] == 0)
            ++k;
        if (k == g)
            return x;
        const auto ks = static_cast<std::size_t>(k);
        Element y = x;
        const int e = y.exps[ks];
        y.exps[ks] = 0;
        Element out = inverse(y);
        out = multiply_generator_power(std::move(out), k, pres_.relative_order(k) - e);
        return multiply(std::move(out), inv_powers_[ks]);
    }

    Element power(Element const & x, std::int64_t n) const
    {
        Element base = n < 0 ? inverse(x) : x;
        std::uint64_t m = n < 0 ? static_cast<std::uint64_t>(-(n + 1)) + 1 : static_cast<std::uint64_t>(n);
        Element acc = identity();
        while (m) {
            if (m & 1u)
                acc = multiply(std::move(acc), base);
            base = multiply(base, base);
            m >>= 1;
        }
        return acc;
    }

    /* [x, y] = x^-1 y^-1 x y */
    Element commutator(Element const & x, Element const & y) const
    {
        return multiply(multiply(multiply(inverse(x), inverse(y)), x), y);
    }

    /* Normal form of a word in the generators and their inverses. */
    Element collect(Word const & w) const
    {
        Element v = identity();
        for (auto const & s : w) {
            if (s.gen < 0 || s.gen >= generator_count())
                throw precondition_error("collect: generator index out of range");
            if (s.exp >= 0)
                v = multiply_generator_power(std::move(v), s.gen, s.exp);
            else
                v = multiply(std::move(v), power(generator(s.gen), s.exp));
        }
        return v;
    }

  private:
    /* t^(g_k) for t supported beyond k. */
    Element conjugate_by_generator(Element const & t, int k) const
    {
        auto const & row = conj_powers_[static_cast<std::size_t>(k)];
        Element out = identity();
        for (int j = k + 1; j < generator_count(); ++j) {
            const int e = t.exps[static_cast<std::size_t>(j)];
            if (e != 0)
                out = multiply(std::move(out), row[static_cast<std::size_t>(j)][static_cast<std::size_t>(e)]);
        }
        return out;
    }

    PcPresentation pres_;
    std::vector<std::vector<std::vector<Element>>> conj_powers_;
    std::vector<Element> inv_powers_;
};

using ElemId = std::uint32_t;

/* A pc group whose elements are enumerated and indexed by their normal form
 * (mixed radix, first generator most significant, so index order equals
 * lexicographic order of exponent vectors).  Right multiplication by
 * g_k^(p^b) is tabulated, which turns a product into a handful of lookups. */
class EnumeratedGroup
{
  public:
    explicit EnumeratedGroup(PcPresentation pres) : EnumeratedGroup(PcGroup(std::move(pres))) {}

    explicit EnumeratedGroup(PcGroup pc) : pc_(std::move(pc))
    {
        auto const & pres = pc_.presentation();
        if (pres.order_bound() > (std::uint64_t(1) << max_log2_order()))
            throw size_guard_error("group order exceeds the enumeration guard of 2^"
                                   + std::to_string(max_log2_order()));
        p_ = pres.prime();
        order_ = static_cast<std::size_t>(pres.order_bound());
        const int g = pres.generator_count();
        strides_.assign(static_cast<std::size_t>(g), 1);
        for (int k = g - 2; k >= 0; --k)
            strides_[static_cast<std::size_t>(k)] =
                strides_[static_cast<std::size_t>(k + 1)]
                * static_cast<std::size_t>(pres.relative_order(k + 1));

        tables_.resize(static_cast<std::size_t>(g));
        for (int k = 0; k < g; ++k) {
            auto & levels = tables_[static_cast<std::size_t>(k)];
            std::vector<ElemId> base(order_);
            for (std::size_t x = 0; x < order_; ++x)
                base[x] = index(pc_.multiply_generator_power(element(static_cast<ElemId>(x)), k, 1));
            levels.push_back(std::move(base));
            for (int pp = p_; pp < pres.relative_order(k); pp *= p_) {
                auto const & prev = levels.back();
                std::vector<ElemId> next(order_);
                for (std::size_t x = 0; x < order_; ++x) {
                    ElemId y = static_cast<ElemId>(x);
                    for (int i = 0; i < p_; ++i)
                        y = prev[y];
                    next[x] = y;
                }
                levels.push_back(std::move(next));
            }
        }
        inverses_.resize(order_);
        for (std::size_t x = 0; x < order_; ++x)
            inverses_[x] = index(pc_.inverse(element(static_cast<ElemId>(x))));
    }

    PcGroup const & pc() const { return pc_; }
    PcPresentation const & presentation() const { return pc_.presentation(); }
    int prime() const { return p_; }
    std::size_t order() const { return order_; }
    int log_order() const { return presentation().log_order(); }
    int generator_count() const { return pc_.generator_count(); }

    ElemId identity() const { return 0; }

    ElemId generator(int k) const
    {
        if (k < 0 || k >= generator_count())
            throw precondition_error("generator index out of range");
        return static_cast<ElemId>(strides_[static_cast<std::size_t>(k)]);
    }

    ElemId index(Element const & e) const
    {
        std::size_t x = 0;
        for (std::size_t k = 0; k < strides_.size(); ++k)
            x += static_cast<std::size_t>(e.exps[k]) * strides_[k];
        return static_cast<ElemId>(x);
    }

    Element element(ElemId x) const
    {
        Element e(std::vector<int>(strides_.size(), 0));
        std::size_t r = x;
        for (std::size_t k = 0; k < strides_.size(); ++k) {
            e.exps[k] = static_cast<int>(r / strides_[k]);
            r %= strides_[k];
        }
        return e;
    }

    /* Right multiplication by g_k alone, as a permutation of the elements. */
    std::vector<ElemId> const & generator_action(int k) const
    {
        return tables_.at(static_cast<std::size_t>(k)).front();
    }

    ElemId mul(ElemId x, ElemId y) const
    {
        std::size_t r = y;
        for (std::size_t k = 0; k < strides_.size(); ++k) {
            std::size_t e = r / strides_[k];
            r %= strides_[k];
            auto const & levels = tables_[k];
            for (std::size_t b = 0; e != 0; ++b) {
                const std::size_t digit = e % static_cast<std::size_t>(p_);
                e /= static_cast<std::size_t>(p_);
                for (std::size_t i = 0; i < digit; ++i)
                    x = levels[b][x];
            }
        }
        return x;
    }

    ElemId inv(ElemId x) const { return inverses_[x]; }

    ElemId pow(ElemId x, std::int64_t n) const
    {
        if (n < 0) {
            x = inv(x);
            n = -n;
        }
        ElemId acc = identity();
        while (n) {
            if (n & 1)
                acc = mul(acc, x);
            x = mul(x, x);
            n >>= 1;
        }
        return acc;
    }

    ElemId comm(ElemId x, ElemId y) const { return mul(mul(inv(x), inv(y)), mul(x, y)); }

    ElemId conj(ElemId x, ElemId g) const { return mul(mul(inv(g), x), g); }

    std::int64_t element_order(ElemId x) const
    {
        std::int64_t o = 1;
        for (ElemId y = x; y != identity(); y = mul(y, x))
            ++o;
        return o;
    }

  private:
    PcGroup pc_;
    int p_ = 2;
    std::size_t order_ = 1;
    std::vector<std::size_t> strides_;
    std::vector<std::vector<std::vector<ElemId>>> tables_; // [gen][level][x]
    std::vector<ElemId> inverses_;
};

/* All normal forms in lexicographic order. */
inline std::vector<Element> enumerate(PcPresentation const & pres)
{
    if (pres.order_bound() > (std::uint64_t(1) << max_log2_order()))
        throw size_guard_error("enumerate: group order exceeds the guard");
    const auto n = static_cast<std::size_t>(pres.order_bound());
    std::vector<Element> out;
    out.reserve(n);
    std::vector<int> e(static_cast<std::size_t>(pres.generator_count()), 0);
    for (std::size_t i = 0; i < n; ++i) {
        out.emplace_back(e);
        for (int k = pres.generator_count() - 1; k >= 0; --k) {
            auto & ek = e[static_cast<std::size_t>(k)];
            if (++ek < pres.relative_order(k))
                break;
            ek = 0;
        }
    }
    return out;
}

/* Consistency of a pc presentation.  Two tests, both must pass:
 *  - overlaps on generator triples collect identically from either end;
 *  - the right-regular action computed by collection is a permutation
 *    action satisfying every defining relation.  Its orbit of the identity
 *    contains all prod(r_i) normal forms, so the presented group has at least
 *    that many elements, and collection shows it has at most that many. */
inline bool consistency_check(PcPresentation const & pres)
{
    const int g = pres.generator_count();
    PcGroup pc(pres);
    auto gen = [&](int i) { return pc.generator(i); };
    auto mul = [&](Element const & a, Element const & b) { return pc.multiply(a, b); };
    auto gpow = [&](int i, std::int64_t e) { return pc.multiply_generator_power(pc.identity(), i, e); };

    for (int i = 0; i < g; ++i) {
        const int ri = pres.relative_order(i);
        // g_i^(r_i) g_i = g_i g_i^(r_i)
        if (mul(pres.power(i), gen(i)) != mul(gen(i), pres.power(i)))
            return false;
        for (int j = i + 1; j < g; ++j) {
            const int rj = pres.relative_order(j);
            // (g_j^(r_j)) g_i = g_j^(r_j - 1) (g_j g_i)
            if (mul(pres.power(j), gen(i)) != mul(gpow(j, rj - 1), mul(gen(j), gen(i))))
                return false;
            // g_j (g_i^(r_i)) = (g_j g_i) g_i^(r_i - 1)
            if (mul(gen(j), pres.power(i)) != mul(mul(gen(j), gen(i)), gpow(i, ri - 1)))
                return false;
            for (int k = j + 1; k < g; ++k) {
                // (g_k g_j) g_i = g_k (g_j g_i)
                if (mul(mul(gen(k), gen(j)), gen(i)) != mul(gen(k), mul(gen(j), gen(i))))
                    return false;
            }
        }
    }

    const EnumeratedGroup G(pc);
    const std::size_t n = G.order();
    auto apply_word = [&](ElemId x, Element const & w) {
        for (int k = 0; k < g; ++k)
            for (int t = 0; t < w[static_cast<std::size_t>(k)]; ++t)
                x = G.generator_action(k)[x];
        return x;
    };
    for (int k = 0; k < g; ++k) {
        auto const & act = G.generator_action(k);
        std::vector<bool> hit(n, false);
        for (std::size_t x = 0; x < n; ++x) {
            if (hit[act[x]])
                return false;
            hit[act[x]] = true;
        }
        for (std::size_t x = 0; x < n; ++x) {
            ElemId y = static_cast<ElemId>(x);
            for (int t = 0; t < pres.relative_order(k); ++t)
                y = act[y];
            if (y != apply_word(static_cast<ElemId>(x), pres.power(k)))
                return false;
        }
    }
    for (int i = 0; i < g; ++i)
        for (int j = i + 1; j < g; ++j) {
            // g_j g_i = g_i g_j^(g_i)
            auto const & ai = G.generator_action(i);
            auto const & aj = G.generator_action(j);
            for (std::size_t x = 0; x < n; ++x)
                if (ai[aj[x]] != apply_word(ai[x], pres.conjugate(i, j)))
                    return false;
        }
    std::vector<bool> seen(n, false);
    std::deque<ElemId> queue{G.identity()};
    seen[G.identity()] = true;
    std::size_t reached = 1;
    while (!queue.empty()) {
        const ElemId x = queue.front();
        queue.pop_front();
        for (int k = 0; k < g; ++k) {
            const ElemId y = G.generator_action(k)[x];
            if (!seen[y]) {
                seen[y] = true;
                ++reached;
                queue.push_back(y);
            }
        }
    }
    return reached == n;
}

/* Subgroup of an enumerated group, stored with its full element set. */
class Subgroup
{
  public:
    Subgroup(EnumeratedGroup const & G, std::vector<ElemId> const & generators)
        : group_(&G), member_(G.order(), false)
    {
        member_[G.identity()] = true;
        elements_.push_back(G.identity());
        for (ElemId s : generators)
            adjoin(s);
        std::sort(elements_.begin(), elements_.end());
    }

    static Subgroup whole(EnumeratedGroup const & G)
    {
        std::vector<ElemId> gens;
        for (int k = 0; k < G.generator_count(); ++k)
            gens.push_back(G.generator(k));
        return Subgroup(G, gens);
    }

    static Subgroup trivial(EnumeratedGroup const & G) { return Subgroup(G, {}); }

    EnumeratedGroup const & group() const { return *group_; }
    std::vector<ElemId> const & generators() const { return generators_; }
    std::vector<ElemId> const & elements() const { return elements_; }
    std::size_t order() const { return elements_.size(); }
    bool contains(ElemId x) const { return member_[x]; }
    bool is_trivial() const { return elements_.size() == 1; }

    bool is_subgroup_of(Subgroup const & other) const
    {
        return std::all_of(elements_.begin(), elements_.end(),
                           [&](ElemId x) { return other.contains(x); });
    }

    int log_order() const
    {
        int lg = 0;
        for (std::size_t n = order(); n > 1; n /= static_cast<std::size_t>(group_->prime()))
            ++lg;
        return lg;
    }

    friend bool operator==(Subgroup const & a, Subgroup const & b)
    {
        return a.group_ == b.group_ && a.elements_ == b.elements_;
    }

  private:
    /* Extend the subgroup by s; saturate under right multiplication by the
     * generators (finite, so this yields the generated subgroup). */
    void adjoin(ElemId s)
    {
        if (member_[s])
            return;
        generators_.push_back(s);
        auto const & G = *group_;
        std::deque<ElemId> queue(elements_.begin(), elements_.end());
        // old elements only need the new generator; new ones need all
        std::size_t old_count = elements_.size();
        std::size_t processed = 0;
        while (!queue.empty()) {
            const ElemId x = queue.front();
            queue.pop_front();
            const bool is_old = processed++ < old_count;
            auto visit = [&](ElemId g) {
                const ElemId y = G.mul(x, g);
                if (!member_[y]) {
                    member_[y] = true;
                    elements_.push_back(y);
                    queue.push_back(y);
                }
            };
            if (is_old)
                visit(s);
            else
                for (ElemId g : generators_)
                    visit(g);
        }
    }

    EnumeratedGroup const * group_;
    std::vector<bool> member_;
    std::vector<ElemId> generators_;
    std::vector<ElemId> elements_;
};

/* Normal closure of the subgroup generated by gens inside the subgroup
 * generated by ambient_gens. */
inline Subgroup normal_closure(EnumeratedGroup const & G, std::vector<ElemId> gens,
                               std::vector<ElemId> const & ambient_gens)
{
    for (;;) {
        Subgroup N(G, gens);
        std::vector<ElemId> extra;
        for (ElemId n : N.generators())
            for (ElemId h : ambient_gens) {
                const ElemId c = G.conj(n, h);
                if (!N.contains(c))
                    extra.push_back(c);
            }
        if (extra.empty())
            return N;
        gens = N.generators();
        gens.insert(gens.end(), extra.begin(), extra.end());
    }
}

/* H' : normal closure in H of the commutators of its generators. */
inline Subgroup derived_subgroup(Subgroup const & H)
{
    auto const & G = H.group();
    std::vector<ElemId> comms;
    auto const & gens = H.generators();
    for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t j = i + 1; j < gens.size(); ++j)
            comms.push_back(G.comm(gens[i], gens[j]));
    return normal_closure(G, std::move(comms), gens);
}

/* Logarithmic type of H/H', from the number of cosets killed by p^k-th
 * powers (Omega-layer sizes of the quotient). */
inline AbelianInvariants abelian_invariants(Subgroup const & H)
{
    auto const & G = H.group();
    const Subgroup D = derived_subgroup(H);
    const auto p = static_cast<std::int64_t>(G.prime());
    std::vector<std::size_t> by_level; // by_level[k] = #x with x^(p^k) in D, minimal k
    for (ElemId x : H.elements()) {
        std::size_t k = 0;
        ElemId y = x;
        while (!D.contains(y)) {
            y = G.pow(y, p);
            ++k;
        }
        if (by_level.size() <= k)
            by_level.resize(k + 1, 0);
        ++by_level[k];
    }
    std::vector<int> omega_log;
    std::size_t cum = 0;
    for (std::size_t c : by_level) {
        cum += c;
        std::size_t q = cum / D.order();
        int lg = 0;
        while (q > 1) {
            q /= static_cast<std::size_t>(p);
            ++lg;
        }
        omega_log.push_back(lg);
    }
    omega_log.push_back(omega_log.back()); // stabilized
    return invariants_from_omega(omega_log);
}

/* Same invariants by an independent route: relation lattice of H/H' on the
 * images of H's generators (spanning-tree relations of the quotient's
 * Cayley graph), then Smith normal form. */
inline AbelianInvariants abelian_invariants_smith(Subgroup const & H)
{
    auto const & G = H.group();
    const Subgroup D = derived_subgroup(H);
    // label each element of H by the smallest element of its D-coset
    std::vector<ElemId> label(G.order(), G.order());
    std::vector<ElemId> cosets;
    for (ElemId x : H.elements()) {
        if (label[x] != G.order())
            continue;
        cosets.push_back(x);
        for (ElemId d : D.elements())
            label[G.mul(x, d)] = x;
    }
    auto const & gens = H.generators();
    const std::size_t s = gens.size();
    if (s == 0)
        return AbelianInvariants();

    std::vector<std::vector<std::int64_t>> word(G.order());
    std::vector<bool> seen(G.order(), false);
    std::deque<ElemId> queue{label[G.identity()]};
    seen[label[G.identity()]] = true;
    word[label[G.identity()]] = std::vector<std::int64_t>(s, 0);
    std::vector<std::vector<std::int64_t>> relations;
    std::vector<std::pair<ElemId, std::size_t>> edges;
    while (!queue.empty()) {
        const ElemId c = queue.front();
        queue.pop_front();
        for (std::size_t i = 0; i < s; ++i) {
            const ElemId t = label[G.mul(c, gens[i])];
            if (!seen[t]) {
                seen[t] = true;
                word[t] = word[c];
                word[t][i] += 1;
                queue.push_back(t);
            } else {
                edges.emplace_back(c, i);
            }
        }
    }
    for (auto const & [c, i] : edges) {
        const ElemId t = label[G.mul(c, gens[i])];
        std::vector<std::int64_t> rel = word[c];
        rel[i] += 1;
        for (std::size_t k = 0; k < s; ++k)
            rel[k] -= word[t][k];
        if (std::any_of(rel.begin(), rel.end(), [](std::int64_t v) { return v != 0; }))
            relations.push_back(std::move(rel));
    }
    std::vector<int> exps;
    const auto diag = smith_diagonal(relations);
    if (diag.size() < s)
        throw internal_error("abelian_invariants_smith: quotient is infinite");
    for (std::int64_t d : diag) {
        int e = 0;
        while (d > 1) {
            if (d % G.prime() != 0)
                throw internal_error("abelian_invariants_smith: not a p-group");
            d /= G.prime();
            ++e;
        }
        exps.push_back(e);
    }
    return AbelianInvariants(std::move(exps));
}

struct CentralSeries {
    std::vector<Subgroup> terms; // gamma_1 = G, ..., last is trivial
    int nilpotency_class = 0;
    int coclass = 0;
};

/* gamma_{i+1} = [gamma_i, G], the normal closure of the commutators of
 * generators of gamma_i with generators of G. */
inline CentralSeries lower_central_series(EnumeratedGroup const & G)
{
    CentralSeries out;
    out.terms.push_back(Subgroup::whole(G));
    const std::vector<ElemId> top = out.terms.front().generators();
    while (!out.terms.back().is_trivial()) {
        std::vector<ElemId> comms;
        for (ElemId x : out.terms.back().generators())
            for (ElemId g : top)
                comms.push_back(G.comm(x, g));
        Subgroup next = normal_closure(G, std::move(comms), top);
        if (next.order() == out.terms.back().order())
            throw internal_error("lower_central_series: group is not nilpotent");
        out.terms.push_back(std::move(next));
    }
    out.nilpotency_class = static_cast<int>(out.terms.size()) - 1;
    out.coclass = G.log_order() - out.nilpotency_class;
    return out;
}

} // namespace ptower

#endif
