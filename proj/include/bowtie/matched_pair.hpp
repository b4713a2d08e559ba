#ifndef BOWTIE_MATCHED_PAIR_HPP
#define BOWTIE_MATCHED_PAIR_HPP

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "bowtie/groupoid.hpp"
#include "bowtie/report.hpp"

namespace bowtie {

/// Two groupoids on a shared unit set together with the mutual actions
///   left(g,x)  = g <| x   (an arrow of g1),
///   right(g,x) = g |> x   (an arrow of g2),
/// both defined exactly when s(g) = r(x).  The tables are stored
/// extensionally over the fibred domain so every axiom check is exhaustive.
class MatchedPair {
public:
    MatchedPair() = default;

    MatchedPair(GroupoidPtr g1, GroupoidPtr g2, std::vector<int> left,
                std::vector<int> right)
        : g1_(std::move(g1)),
          g2_(std::move(g2)),
          left_(std::move(left)),
          right_(std::move(right)) {}

    const FiniteGroupoid& g1() const { return *g1_; }
    const FiniteGroupoid& g2() const { return *g2_; }
    GroupoidPtr g1_ptr() const { return g1_; }
    GroupoidPtr g2_ptr() const { return g2_; }

    bool in_domain(int g, int x) const { return g2_->src(g) == g1_->rng(x); }

    /// g <| x
    int left(int g, int x) const { return left_[g * g1_->num_arrows() + x]; }
    /// g |> x
    int right(int g, int x) const { return right_[g * g1_->num_arrows() + x]; }

private:
    GroupoidPtr g1_, g2_;
    std::vector<int> left_, right_;  // flat |G2| x |G1|, -1 off-domain
};

namespace detail {
inline std::string pair_name(int g, int x) {
    return "(g#" + std::to_string(g) + ",x#" + std::to_string(x) + ")";
}
}  // namespace detail

/// Trivial mutual actions: g <| x = x, g |> x = g.  A matched pair for
/// one-unit groupoids (groups); for general unit spaces ZS7 can fail and
/// validate_matched_pair will say so.
inline MatchedPair trivial_matched_pair(GroupoidPtr g1, GroupoidPtr g2) {
    const int n1 = g1->num_arrows(), n2 = g2->num_arrows();
    std::vector<int> left(n2 * n1, -1), right(n2 * n1, -1);
    for (int g = 0; g < n2; ++g)
        for (int x = 0; x < n1; ++x)
            if (g2->src(g) == g1->rng(x)) {
                left[g * n1 + x] = x;
                right[g * n1 + x] = g;
            }
    return MatchedPair(std::move(g1), std::move(g2), std::move(left), std::move(right));
}

/// Checks (ZS1)-(ZS9) on every point of the fibred domain, plus table
/// well-definedness (defined exactly on the domain, values land where the
/// momentum maps demand).
inline Report validate_matched_pair(const MatchedPair& mp) {
    Report rep;
    const FiniteGroupoid& G1 = mp.g1();
    const FiniteGroupoid& G2 = mp.g2();
    if (G1.num_units() != G2.num_units()) {
        rep.add("structure", "unit sets differ");
        return rep;
    }
    const int n1 = G1.num_arrows(), n2 = G2.num_arrows();
    for (int g = 0; g < n2; ++g)
        for (int x = 0; x < n1; ++x) {
            const bool dom = mp.in_domain(g, x);
            const int l = mp.left(g, x), r = mp.right(g, x);
            if (dom) {
                if (l < 0 || l >= n1 || r < 0 || r >= n2)
                    rep.add("structure", "action undefined at " + detail::pair_name(g, x));
            } else if (l != -1 || r != -1) {
                rep.add("structure", "action defined off-domain at " + detail::pair_name(g, x));
            }
        }
    if (!rep.ok()) return rep;

    for (int g = 0; g < n2; ++g)
        for (int x = 0; x < n1; ++x) {
            if (!mp.in_domain(g, x)) continue;
            if (G1.rng(mp.left(g, x)) != G2.rng(g))
                rep.add("ZS2", detail::pair_name(g, x));
            if (G2.src(mp.right(g, x)) != G1.src(x))
                rep.add("ZS5", detail::pair_name(g, x));
            if (G1.src(mp.left(g, x)) != G2.rng(mp.right(g, x)))
                rep.add("ZS7", detail::pair_name(g, x));
        }
    if (!rep.ok()) return rep;  // ZS1/8/9 below assume the momentum laws

    for (int x = 0; x < n1; ++x) {
        const int u = G2.unit_arrow(G1.rng(x));
        if (mp.left(u, x) != x) rep.add("ZS3", "x#" + std::to_string(x));
    }
    for (int g = 0; g < n2; ++g) {
        const int u = G1.unit_arrow(G2.src(g));
        if (mp.right(g, u) != g) rep.add("ZS6", "g#" + std::to_string(g));
    }

    // (ZS1) (hg) <| x = h <| (g <| x), (ZS9) (hg) |> x = (h |> [g <| x])(g |> x)
    for (int h = 0; h < n2; ++h)
        for (int g = 0; g < n2; ++g) {
            if (!G2.composable(h, g)) continue;
            const int hg = G2.comp(h, g);
            for (int x = 0; x < n1; ++x) {
                if (!mp.in_domain(g, x)) continue;
                const int gx = mp.left(g, x);
                if (mp.left(hg, x) != mp.left(h, gx))
                    rep.add("ZS1", "h#" + std::to_string(h) + "," + detail::pair_name(g, x));
                const int lhs = mp.right(hg, x);
                const int rhs = G2.comp(mp.right(h, gx), mp.right(g, x));
                if (lhs != rhs)
                    rep.add("ZS9", "h#" + std::to_string(h) + "," + detail::pair_name(g, x));
            }
        }

    // (ZS4) g |> (xy) = (g |> x) |> y, (ZS8) g <| (xy) = (g <| x)([g |> x] <| y)
    for (int g = 0; g < n2; ++g)
        for (int x = 0; x < n1; ++x) {
            if (!mp.in_domain(g, x)) continue;
            for (int y = 0; y < n1; ++y) {
                if (!G1.composable(x, y)) continue;
                const int xy = G1.comp(x, y);
                if (mp.right(g, xy) != mp.right(mp.right(g, x), y))
                    rep.add("ZS4", detail::pair_name(g, x) + ",y#" + std::to_string(y));
                const int lhs = mp.left(g, xy);
                const int rhs = G1.comp(mp.left(g, x), mp.left(mp.right(g, x), y));
                if (lhs != rhs)
                    rep.add("ZS8", detail::pair_name(g, x) + ",y#" + std::to_string(y));
            }
        }
    return rep;
}

/// (ZS10)-(ZS13) are consequences of (ZS1)-(ZS9); a nonempty report here
/// means an implementation bug, not a bad input.
inline Report check_derived_axioms(const MatchedPair& mp) {
    Report rep;
    const FiniteGroupoid& G1 = mp.g1();
    const FiniteGroupoid& G2 = mp.g2();
    const int n1 = G1.num_arrows(), n2 = G2.num_arrows();
    for (int g = 0; g < n2; ++g) {
        const int u = G1.unit_arrow(G2.src(g));
        if (mp.left(g, u) != G1.unit_arrow(G2.rng(g)))
            rep.add("ZS10", "g#" + std::to_string(g));
    }
    for (int x = 0; x < n1; ++x) {
        const int u = G2.unit_arrow(G1.rng(x));
        if (mp.right(u, x) != G2.unit_arrow(G1.src(x)))
            rep.add("ZS11", "x#" + std::to_string(x));
    }
    for (int g = 0; g < n2; ++g)
        for (int x = 0; x < n1; ++x) {
            if (!mp.in_domain(g, x)) continue;
            if (G1.inv(mp.left(g, x)) != mp.left(mp.right(g, x), G1.inv(x)))
                rep.add("ZS12", detail::pair_name(g, x));
            if (G2.inv(mp.right(g, x)) != mp.right(G2.inv(g), mp.left(g, x)))
                rep.add("ZS13", detail::pair_name(g, x));
        }
    return rep;
}

/// Psi(g,x) = (g <| x, g |> x), the factorisation map.
inline std::pair<int, int> psi(const MatchedPair& mp, int g, int x) {
    if (!mp.in_domain(g, x))
        throw std::invalid_argument("psi: s(g) != r(x)");
    return {mp.left(g, x), mp.right(g, x)};
}

/// Inverse of Psi: given (y,h) with s(y) = r(h), the unique (g,x) with
/// Psi(g,x) = (y,h) is ([h^-1 |> y^-1]^-1, [h^-1 <| y^-1]^-1).
inline std::pair<int, int> psi_inverse(const MatchedPair& mp, int y, int h) {
    const FiniteGroupoid& G1 = mp.g1();
    const FiniteGroupoid& G2 = mp.g2();
    if (G1.src(y) != G2.rng(h))
        throw std::invalid_argument("psi_inverse: s(y) != r(h)");
    const int hi = G2.inv(h), yi = G1.inv(y);
    return {G2.inv(mp.right(hi, yi)), G1.inv(mp.left(hi, yi))};
}

/// (FR1)-(FR4): Psi is a bijection onto the opposite fibred product and
/// behaves like translation on either side.
inline Report check_fr(const MatchedPair& mp) {
    Report rep;
    const FiniteGroupoid& G1 = mp.g1();
    const FiniteGroupoid& G2 = mp.g2();
    const int n1 = G1.num_arrows(), n2 = G2.num_arrows();

    std::vector<char> hit(n1 * n2, 0);
    for (int g = 0; g < n2; ++g)
        for (int x = 0; x < n1; ++x) {
            if (!mp.in_domain(g, x)) continue;
            auto [y, h] = psi(mp, g, x);
            if (G1.src(y) != G2.rng(h)) {
                rep.add("FR-codomain", detail::pair_name(g, x));
                continue;
            }
            if (G2.rng(g) != G1.rng(y) || G1.src(x) != G2.src(h))
                rep.add("FR1", detail::pair_name(g, x));
            if (hit[y * n2 + h]) rep.add("FR-injectivity", detail::pair_name(g, x));
            hit[y * n2 + h] = 1;
            if (psi_inverse(mp, y, h) != std::make_pair(g, x))
                rep.add("FR-inverse", detail::pair_name(g, x));
        }
    // surjectivity onto G1 xsr G2
    for (int y = 0; y < n1; ++y)
        for (int h = 0; h < n2; ++h)
            if (G1.src(y) == G2.rng(h) && !hit[y * n2 + h])
                rep.add("FR-surjectivity", "(y#" + std::to_string(y) + ",h#" +
                                               std::to_string(h) + ")");

    // (FR2)
    for (int x = 0; x < n1; ++x) {
        const int u = G2.unit_arrow(G1.rng(x));
        if (psi(mp, u, x) != std::make_pair(x, G2.unit_arrow(G1.src(x))))
            rep.add("FR2", "x#" + std::to_string(x));
    }
    for (int g = 0; g < n2; ++g) {
        const int u = G1.unit_arrow(G2.src(g));
        if (psi(mp, g, u) != std::make_pair(G1.unit_arrow(G2.rng(g)), g))
            rep.add("FR2", "g#" + std::to_string(g));
    }

    // (FR3) Psi(g, x x') = y . Psi(h, x')   where Psi(g,x) = (y,h)
    for (int g = 0; g < n2; ++g)
        for (int x = 0; x < n1; ++x) {
            if (!mp.in_domain(g, x)) continue;
            auto [y, h] = psi(mp, g, x);
            for (int x2 = 0; x2 < n1; ++x2) {
                if (!G1.composable(x, x2)) continue;
                auto [y2, h2] = psi(mp, h, x2);
                auto lhs = psi(mp, g, G1.comp(x, x2));
                if (lhs != std::make_pair(G1.comp(y, y2), h2))
                    rep.add("FR3", detail::pair_name(g, x) + ",x'#" + std::to_string(x2));
            }
        }
    // (FR4) Psi(g' g, x) = Psi(g', y) . h
    for (int g = 0; g < n2; ++g)
        for (int x = 0; x < n1; ++x) {
            if (!mp.in_domain(g, x)) continue;
            auto [y, h] = psi(mp, g, x);
            for (int g2 = 0; g2 < n2; ++g2) {
                if (!G2.composable(g2, g)) continue;
                auto [y2, h2] = psi(mp, g2, y);
                auto lhs = psi(mp, G2.comp(g2, g), x);
                if (lhs != std::make_pair(y2, G2.comp(h2, h)))
                    rep.add("FR4", detail::pair_name(g, x) + ",g'#" + std::to_string(g2));
            }
        }
    return rep;
}

// ---------------------------------------------------------------------------
// The product groupoid

/// The Zappa-Szep product groupoid: arrows are the pairs (x,g) with
/// s(x) = r(g), in G1-first normal form, with
///   (y,g)(x,h) = (y (g <| x), (g |> x) h)    when s(g) = r(x),
///   (y,g)^-1   = (g^-1 <| y^-1, g^-1 |> y^-1).
/// Keeps provenance: the matched pair, the pair of factors behind every
/// arrow, and the factor embeddings.
struct ZsProductGroupoid {
    GroupoidPtr base;
    MatchedPair mp;
    std::vector<std::pair<int, int>> factors;  // product arrow -> (x, g)
    std::vector<int> pair_index;               // flat x * |G2| + g -> arrow or -1
    std::vector<int> embed1;                   // x -> product arrow (x, s(x))
    std::vector<int> embed2;                   // g -> product arrow (r(g), g)

    int arrow_of(int x, int g) const {
        return pair_index[x * mp.g2().num_arrows() + g];
    }
};

inline ZsProductGroupoid zs_product(const MatchedPair& mp) {
    const FiniteGroupoid& G1 = mp.g1();
    const FiniteGroupoid& G2 = mp.g2();
    const int n1 = G1.num_arrows(), n2 = G2.num_arrows();
    ZsProductGroupoid P;
    P.mp = mp;
    P.pair_index.assign(n1 * n2, -1);
    for (int x = 0; x < n1; ++x)
        for (int g = 0; g < n2; ++g)
            if (G1.src(x) == G2.rng(g)) {
                P.pair_index[x * n2 + g] = static_cast<int>(P.factors.size());
                P.factors.emplace_back(x, g);
            }
    const int n = static_cast<int>(P.factors.size());
    const int k = G1.num_units();
    std::vector<int> src(n), rng(n), unit(k), inv(n), comp(n * n, -1);
    for (int a = 0; a < n; ++a) {
        auto [x, g] = P.factors[a];
        rng[a] = G1.rng(x);
        src[a] = G2.src(g);
        const int gi = G2.inv(g), xi = G1.inv(x);
        inv[a] = P.arrow_of(mp.left(gi, xi), mp.right(gi, xi));
    }
    for (int u = 0; u < k; ++u)
        unit[u] = P.arrow_of(G1.unit_arrow(u), G2.unit_arrow(u));
    for (int a = 0; a < n; ++a) {
        auto [y, g] = P.factors[a];
        for (int b = 0; b < n; ++b) {
            auto [x, h] = P.factors[b];
            if (G2.src(g) != G1.rng(x)) continue;
            comp[a * n + b] =
                P.arrow_of(G1.comp(y, mp.left(g, x)), G2.comp(mp.right(g, x), h));
        }
    }
    P.base = std::make_shared<FiniteGroupoid>(k, src, rng, unit, inv, comp);
    P.embed1.resize(n1);
    for (int x = 0; x < n1; ++x)
        P.embed1[x] = P.arrow_of(x, G2.unit_arrow(G1.src(x)));
    P.embed2.resize(n2);
    for (int g = 0; g < n2; ++g)
        P.embed2[g] = P.arrow_of(G1.unit_arrow(G2.rng(g)), g);
    return P;
}

enum class FactorOrder { G1First, G2First };

/// The unique factorization of a product arrow through the embedded
/// factors.  G1First returns (x, g) with iota1(x) iota2(g) = k; G2First
/// returns (g', x') with iota2(g') iota1(x') = k, computed via Psi^-1.
inline std::pair<int, int> unique_factorization(const ZsProductGroupoid& P, int k,
                                                FactorOrder order) {
    auto [x, g] = P.factors[k];
    if (order == FactorOrder::G1First) return {x, g};
    return psi_inverse(P.mp, x, g);
}

/// The swapped matched pair (G2, G1): actions read off Psi^-1, per the
/// correspondence between Psi and Psi^-1 for the reversed order.
inline MatchedPair swap(const MatchedPair& mp) {
    const FiniteGroupoid& G1 = mp.g1();
    const FiniteGroupoid& G2 = mp.g2();
    const int n1 = G1.num_arrows(), n2 = G2.num_arrows();
    // roles reverse: the acting groupoid is G1, the acted-on is G2
    std::vector<int> left(n1 * n2, -1), right(n1 * n2, -1);
    for (int y = 0; y < n1; ++y)
        for (int h = 0; h < n2; ++h)
            if (G1.src(y) == G2.rng(h)) {
                auto [g, x] = psi_inverse(mp, y, h);
                left[y * n2 + h] = g;   // y <| h in the swapped pair
                right[y * n2 + h] = x;  // y |> h
            }
    return MatchedPair(mp.g2_ptr(), mp.g1_ptr(), std::move(left), std::move(right));
}

// ---------------------------------------------------------------------------
// Internal decomposition

struct InternalDecomposition {
    bool ok = false;
    std::string error;
    MatchedPair mp;
    // arrow maps between K and the factor groupoids of mp
    std::vector<int> a1_of_k1;  // mp.g1 arrow -> K arrow
    std::vector<int> a2_of_k2;  // mp.g2 arrow -> K arrow
};

/// Recovers a matched pair from a groupoid K and two subgroupoids given by
/// arrow-id subsets that share all units of K: every arrow of K must factor
/// uniquely as a*b with a in A1, b in A2, and then b*a = (b <| a)(b |> a)
/// defines the actions.
inline InternalDecomposition internal_decompose(const FiniteGroupoid& K,
                                                const std::vector<int>& a1_arrows,
                                                const std::vector<int>& a2_arrows) {
    InternalDecomposition res;
    SubgroupoidResult s1 = subgroupoid(K, a1_arrows);
    SubgroupoidResult s2 = subgroupoid(K, a2_arrows);
    if (!s1.ok) { res.error = "A1: " + s1.error; return res; }
    if (!s2.ok) { res.error = "A2: " + s2.error; return res; }
    if (static_cast<int>(s1.parent_unit.size()) != K.num_units() ||
        static_cast<int>(s2.parent_unit.size()) != K.num_units()) {
        res.error = "factors must touch every unit of K";
        return res;
    }

    std::vector<char> in1(K.num_arrows(), 0), in2(K.num_arrows(), 0);
    for (int a : s1.parent_arrow) in1[a] = 1;
    for (int b : s2.parent_arrow) in2[b] = 1;
    for (int a = 0; a < K.num_arrows(); ++a)
        if (in1[a] && in2[a] && !K.is_unit_arrow(a)) {
            res.error = "intersection too large: arrow " + detail::arrow_name(a);
            return res;
        }

    // factor every arrow of K as a*b, a in A1, b in A2
    std::vector<std::pair<int, int>> fact(K.num_arrows(), {-1, -1});
    for (int k = 0; k < K.num_arrows(); ++k) {
        for (int a : s1.parent_arrow) {
            if (K.rng(a) != K.rng(k)) continue;
            for (int b : s2.parent_arrow) {
                if (!K.composable(a, b) || K.comp(a, b) != k) continue;
                if (fact[k].first >= 0)
                    throw internal_error("internal_decompose: non-unique factorization "
                                         "despite trivial intersection");
                fact[k] = {a, b};
            }
        }
        if (fact[k].first < 0) {
            res.error = "product not exhaustive: arrow " + detail::arrow_name(k) +
                        " has no factorization";
            return res;
        }
    }

    // derive the actions from b*a = (b <| a)(b |> a)
    const int n1 = s1.sub.num_arrows(), n2 = s2.sub.num_arrows();
    std::vector<int> sub1_of_k(K.num_arrows(), -1), sub2_of_k(K.num_arrows(), -1);
    for (int i = 0; i < n1; ++i) sub1_of_k[s1.parent_arrow[i]] = i;
    for (int i = 0; i < n2; ++i) sub2_of_k[s2.parent_arrow[i]] = i;
    std::vector<int> left(n2 * n1, -1), right(n2 * n1, -1);
    for (int gi = 0; gi < n2; ++gi) {
        const int b = s2.parent_arrow[gi];
        for (int xi = 0; xi < n1; ++xi) {
            const int a = s1.parent_arrow[xi];
            if (s2.sub.src(gi) != s1.sub.rng(xi)) continue;
            const int ba = K.comp(b, a);
            left[gi * n1 + xi] = sub1_of_k[fact[ba].first];
            right[gi * n1 + xi] = sub2_of_k[fact[ba].second];
        }
    }
    res.ok = true;
    res.mp = MatchedPair(std::make_shared<FiniteGroupoid>(s1.sub),
                         std::make_shared<FiniteGroupoid>(s2.sub), std::move(left),
                         std::move(right));
    res.a1_of_k1 = s1.parent_arrow;
    res.a2_of_k2 = s2.parent_arrow;
    return res;
}

}  // namespace bowtie

#endif
