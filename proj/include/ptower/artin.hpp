#ifndef PTOWER_ARTIN_HPP
#define PTOWER_ARTIN_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ptower/abelian.hpp"
#include "ptower/errors.hpp"
#include "ptower/pcgroup.hpp"

namespace ptower {

/* Entry of a transfer kernel type.  Codes follow the usual convention:
 * 0 is a total kernel, i > 0 means the kernel equals the i-th member of
 * the first layer, anything else is kept as an explicit subgroup of G/G'
 * given by its order and elements (quotient indices). */
struct KernelCode {
    enum class Kind { total, layer_one, explicit_subgroup };

    Kind kind = Kind::total;
    int position = 0;                  // layer_one: 1-based position
    std::size_t order = 0;             // explicit_subgroup: |kernel|
    std::vector<std::size_t> elements; // explicit_subgroup

    static KernelCode total_kernel() { return {}; }

    static KernelCode layer_one_member(int pos)
    {
        KernelCode k;
        k.kind = Kind::layer_one;
        k.position = pos;
        return k;
    }

    static KernelCode explicit_kernel(std::vector<std::size_t> elems)
    {
        KernelCode k;
        k.kind = Kind::explicit_subgroup;
        k.order = elems.size();
        k.elements = std::move(elems);
        return k;
    }

    /* Numeric code as in "(1 2 3 5 4 6 7)": 0 total, i for the i-th
     * first-layer member, -1 otherwise. */
    int code() const
    {
        switch (kind) {
        case Kind::total: return 0;
        case Kind::layer_one: return position;
        case Kind::explicit_subgroup: return -1;
        }
        return -1;
    }

    std::string str() const
    {
        if (kind == Kind::explicit_subgroup)
            return "{" + std::to_string(order) + "}";
        return std::to_string(code());
    }

    /* Explicit kernels coming from different groups are compared by order. */
    friend bool operator==(KernelCode const & a, KernelCode const & b)
    {
        if (a.kind != b.kind)
            return false;
        if (a.kind == Kind::explicit_subgroup)
            return a.order == b.order;
        return a.position == b.position;
    }
};

/* Fixed points and transpositions of a layer-one kernel type read as a
 * self-map of {1..k}. */
struct KernelCycleType {
    int fixed_points = 0;
    int two_cycles = 0;
    bool is_permutation = false;

    friend bool operator==(KernelCycleType const &, KernelCycleType const &) = default;
};

inline KernelCycleType cycle_type(std::vector<KernelCode> const & layer_one)
{
    KernelCycleType t;
    const int k = static_cast<int>(layer_one.size());
    std::vector<int> target(static_cast<std::size_t>(k));
    std::vector<int> hits(static_cast<std::size_t>(k + 1), 0);
    for (int i = 0; i < k; ++i) {
        const int c = layer_one[static_cast<std::size_t>(i)].code();
        target[static_cast<std::size_t>(i)] = c;
        if (c >= 1 && c <= k)
            ++hits[static_cast<std::size_t>(c)];
        if (c == i + 1)
            ++t.fixed_points;
    }
    for (int i = 0; i < k; ++i) {
        const int c = target[static_cast<std::size_t>(i)];
        if (c > i + 1 && c <= k && target[static_cast<std::size_t>(c - 1)] == i + 1)
            ++t.two_cycles;
    }
    t.is_permutation = std::all_of(hits.begin() + 1, hits.end(), [](int h) { return h == 1; });
    return t;
}

/* Multi-layered transfer target type and transfer kernel type. */
struct ArtinPattern {
    std::vector<std::vector<AbelianInvariants>> ttt; // tau_0 .. tau_v
    std::vector<std::vector<KernelCode>> tkt;        // kappa_0 .. kappa_v

    std::string layer_str(std::size_t n) const
    {
        std::string s = "tau" + std::to_string(n) + " = [";
        for (std::size_t i = 0; i < ttt[n].size(); ++i)
            s += (i ? "," : "") + ttt[n][i].str();
        s += "]; kappa" + std::to_string(n) + " = (";
        for (std::size_t i = 0; i < tkt[n].size(); ++i)
            s += (i ? " " : "") + tkt[n][i].str();
        return s + ")";
    }

    /* Canonical text: one line per layer. */
    std::string str() const
    {
        std::string s;
        for (std::size_t n = 0; n < ttt.size(); ++n)
            s += layer_str(n) + "\n";
        return s;
    }
};

/* Sorted copy of a layer's TTT, for order-free comparison. */
inline std::vector<AbelianInvariants> as_multiset(std::vector<AbelianInvariants> v)
{
    std::sort(v.begin(), v.end());
    return v;
}

/* Lyr_n(G): the subgroups between G' and G of index p^n. */
struct Layer {
    int index = 0;
    std::vector<Subgroup> members;
    std::vector<std::vector<std::size_t>> quotient_sets; // images in G/G', sorted
};

/* Everything about G that the Artin pattern needs: G', the quotient G/G'
 * with its multiplication table, and the layers (cached). */
class ArtinContext
{
  public:
    explicit ArtinContext(EnumeratedGroup const & G)
        : group_(&G), whole_(Subgroup::whole(G)), derived_(derived_subgroup(whole_)),
          coset_(G.order(), 0)
    {
        // G'-cosets, labelled by their smallest element, in ascending order
        std::vector<bool> seen(G.order(), false);
        for (std::size_t x = 0; x < G.order(); ++x) {
            if (seen[x])
                continue;
            const std::size_t id = reps_.size();
            reps_.push_back(static_cast<ElemId>(x));
            for (ElemId d : derived_.elements()) {
                const ElemId y = G.mul(static_cast<ElemId>(x), d);
                seen[y] = true;
                coset_[y] = id;
            }
        }
        const std::size_t q = reps_.size();
        qmul_.assign(q, std::vector<std::size_t>(q));
        for (std::size_t a = 0; a < q; ++a)
            for (std::size_t b = 0; b < q; ++b)
                qmul_[a][b] = coset_[G.mul(reps_[a], reps_[b])];
        top_ = 0;
        for (std::size_t n = q; n > 1; n /= static_cast<std::size_t>(G.prime()))
            ++top_;
    }

    EnumeratedGroup const & group() const { return *group_; }
    Subgroup const & whole() const { return whole_; }
    Subgroup const & derived() const { return derived_; }

    /* v with |G/G'| = p^v; layers run from 0 to v. */
    int top_layer() const { return top_; }
    std::size_t quotient_order() const { return reps_.size(); }
    std::vector<ElemId> const & quotient_reps() const { return reps_; }
    std::size_t quotient_index(ElemId x) const { return coset_[x]; }

    AbelianInvariants abelianization() const { return abelian_invariants(whole_); }

    /* Complete layer n in canonical order: members sorted by the ascending
     * list of smallest coset elements (lexicographic in exponent vectors). */
    Layer const & layer(int n) const
    {
        if (n < 0 || n > top_)
            throw precondition_error("layer index " + std::to_string(n) + " out of range 0.."
                                     + std::to_string(top_));
        if (layers_.empty())
            build_layers();
        return layers_[static_cast<std::size_t>(n)];
    }

    /* The quotient-index set of a subgroup H with G' <= H <= G. */
    std::vector<std::size_t> quotient_set(Subgroup const & H) const
    {
        check_between(H);
        std::set<std::size_t> s;
        for (ElemId x : H.elements())
            s.insert(coset_[x]);
        return {s.begin(), s.end()};
    }

    void check_between(Subgroup const & H) const
    {
        if (&H.group() != group_ || !derived_.is_subgroup_of(H))
            throw precondition_error("subgroup does not lie between G' and G");
    }

  private:
    void build_layers() const
    {
        auto const & G = *group_;
        const std::size_t q = reps_.size();
        // all subgroups of G/G': close <U, a> starting from the trivial one
        auto join = [&](std::vector<bool> const & u, std::size_t a) {
            std::vector<std::size_t> gens{a};
            for (std::size_t j = 0; j < q; ++j)
                if (u[j])
                    gens.push_back(j);
            std::vector<bool> v = u;
            std::vector<std::size_t> elems;
            for (std::size_t i = 0; i < q; ++i)
                if (v[i])
                    elems.push_back(i);
            for (std::size_t i = 0; i < elems.size(); ++i)
                for (std::size_t g : gens) {
                    const std::size_t y = qmul_[elems[i]][g];
                    if (!v[y]) {
                        v[y] = true;
                        elems.push_back(y);
                    }
                }
            return v;
        };
        std::set<std::vector<bool>> found;
        std::vector<std::vector<bool>> todo;
        std::vector<bool> trivial(q, false);
        trivial[0] = true;
        found.insert(trivial);
        todo.push_back(trivial);
        while (!todo.empty()) {
            const auto u = todo.back();
            todo.pop_back();
            for (std::size_t a = 0; a < q; ++a) {
                if (u[a])
                    continue;
                auto v = join(u, a);
                if (found.insert(v).second)
                    todo.push_back(std::move(v));
            }
        }

        struct Entry {
            std::vector<ElemId> key;
            std::vector<std::size_t> set;
        };
        std::vector<std::vector<Entry>> by_layer(static_cast<std::size_t>(top_ + 1));
        for (auto const & v : found) {
            Entry e;
            for (std::size_t i = 0; i < q; ++i)
                if (v[i]) {
                    e.set.push_back(i);
                    e.key.push_back(reps_[i]);
                }
            int index_log = 0;
            for (std::size_t n = q / e.set.size(); n > 1; n /= static_cast<std::size_t>(G.prime()))
                ++index_log;
            by_layer[static_cast<std::size_t>(index_log)].push_back(std::move(e));
        }
        layers_.resize(static_cast<std::size_t>(top_ + 1));
        for (int n = 0; n <= top_; ++n) {
            auto & entries = by_layer[static_cast<std::size_t>(n)];
            std::sort(entries.begin(), entries.end(),
                      [](Entry const & a, Entry const & b) { return a.key < b.key; });
            Layer & L = layers_[static_cast<std::size_t>(n)];
            L.index = n;
            for (auto & e : entries) {
                std::vector<ElemId> gens = derived_.generators();
                for (std::size_t i : e.set)
                    gens.push_back(reps_[i]);
                L.members.emplace_back(G, gens);
                L.quotient_sets.push_back(std::move(e.set));
            }
        }
    }

    EnumeratedGroup const * group_;
    Subgroup whole_;
    Subgroup derived_;
    std::vector<std::size_t> coset_;
    std::vector<ElemId> reps_;
    std::vector<std::vector<std::size_t>> qmul_;
    int top_ = 0;
    mutable std::vector<Layer> layers_;
};

/* Artin transfer T: G -> H/H' for G' <= H <= G.  With a right transversal
 * r_1..r_t of H in G and r_i g in H r_{g(i)},
 *   T(g) = prod_i r_i g r_{g(i)}^-1  (mod H').
 * Values are reported as the smallest element of the H'-coset. */
class Transfer
{
  public:
    Transfer(ArtinContext const & ctx, Subgroup H)
        : Transfer(ctx, std::move(H), std::vector<ElemId>{})
    {
    }

    /* transversal: one element per right coset of H, any order; empty
     * selects the smallest element of each coset. */
    Transfer(ArtinContext const & ctx, Subgroup H, std::vector<ElemId> transversal)
        : ctx_(&ctx), target_(std::move(H)), target_derived_(derived_subgroup(target_))
    {
        ctx.check_between(target_);
        auto const & G = ctx.group();
        const ElemId none = static_cast<ElemId>(G.order());

        // right cosets H x
        coset_.assign(G.order(), G.order());
        std::vector<ElemId> minima;
        for (std::size_t x = 0; x < G.order(); ++x) {
            if (coset_[x] != G.order())
                continue;
            const std::size_t id = minima.size();
            minima.push_back(static_cast<ElemId>(x));
            for (ElemId h : target_.elements())
                coset_[G.mul(h, static_cast<ElemId>(x))] = id;
        }
        if (transversal.empty()) {
            transversal_ = minima;
        } else {
            if (transversal.size() != minima.size())
                throw precondition_error("transversal has the wrong size");
            transversal_.assign(minima.size(), none);
            for (ElemId r : transversal) {
                auto & slot = transversal_[coset_[r]];
                if (slot != none)
                    throw precondition_error("transversal repeats a coset");
                slot = r;
            }
        }
        transversal_inv_.reserve(transversal_.size());
        for (ElemId r : transversal_)
            transversal_inv_.push_back(G.inv(r));

        label_.assign(G.order(), none);
        for (ElemId x : target_.elements()) {
            if (label_[x] != none)
                continue;
            for (ElemId d : target_derived_.elements())
                label_[G.mul(x, d)] = x;
        }
    }

    Subgroup const & target() const { return target_; }
    Subgroup const & target_derived() const { return target_derived_; }
    std::vector<ElemId> const & transversal() const { return transversal_; }

    /* T(g), as the H'-coset label. */
    ElemId operator()(ElemId g) const
    {
        auto const & G = ctx_->group();
        ElemId prod = G.identity();
        for (std::size_t i = 0; i < transversal_.size(); ++i) {
            const ElemId rg = G.mul(transversal_[i], g);
            const std::size_t j = coset_[rg];
            prod = G.mul(prod, G.mul(rg, transversal_inv_[j]));
        }
        if (!target_.contains(prod))
            throw internal_error("transfer: product left the target subgroup");
        return label_[prod];
    }

    /* Product of two H'-coset labels. */
    ElemId target_product(ElemId a, ElemId b) const { return label_[ctx_->group().mul(a, b)]; }

    /* The induced map on G/G', indexed like ArtinContext::quotient_reps(). */
    std::vector<ElemId> induced_map() const
    {
        std::vector<ElemId> out;
        for (ElemId r : ctx_->quotient_reps())
            out.push_back((*this)(r));
        return out;
    }

    /* Kernel of the induced map, as sorted quotient indices. */
    std::vector<std::size_t> kernel() const
    {
        std::vector<std::size_t> out;
        const auto img = induced_map();
        const ElemId one = label_[ctx_->group().identity()];
        for (std::size_t a = 0; a < img.size(); ++a)
            if (img[a] == one)
                out.push_back(a);
        return out;
    }

    std::size_t image_order() const
    {
        auto img = induced_map();
        std::sort(img.begin(), img.end());
        return static_cast<std::size_t>(std::unique(img.begin(), img.end()) - img.begin());
    }

  private:
    ArtinContext const * ctx_;
    Subgroup target_;
    Subgroup target_derived_;
    std::vector<std::size_t> coset_;
    std::vector<ElemId> transversal_;
    std::vector<ElemId> transversal_inv_;
    std::vector<ElemId> label_;
};

inline KernelCode transfer_kernel(ArtinContext const & ctx, Subgroup const & H)
{
    const Transfer T(ctx, H);
    auto ker = T.kernel();
    if (ker.size() == ctx.quotient_order())
        return KernelCode::total_kernel();
    if (ctx.top_layer() >= 1) {
        auto const & L1 = ctx.layer(1);
        for (std::size_t i = 0; i < L1.quotient_sets.size(); ++i)
            if (L1.quotient_sets[i] == ker)
                return KernelCode::layer_one_member(static_cast<int>(i) + 1);
    }
    return KernelCode::explicit_kernel(std::move(ker));
}

inline ArtinPattern artin_pattern(ArtinContext const & ctx)
{
    ArtinPattern ap;
    for (int n = 0; n <= ctx.top_layer(); ++n) {
        auto const & L = ctx.layer(n);
        std::vector<AbelianInvariants> tau;
        std::vector<KernelCode> kappa;
        for (auto const & H : L.members) {
            tau.push_back(abelian_invariants(H));
            kappa.push_back(transfer_kernel(ctx, H));
        }
        ap.ttt.push_back(std::move(tau));
        ap.tkt.push_back(std::move(kappa));
    }
    return ap;
}

inline ArtinPattern artin_pattern(EnumeratedGroup const & G)
{
    const ArtinContext ctx(G);
    return artin_pattern(ctx);
}

} // namespace ptower

#endif
