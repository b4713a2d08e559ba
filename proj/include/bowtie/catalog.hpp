#ifndef BOWTIE_CATALOG_HPP
#define BOWTIE_CATALOG_HPP

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "bowtie/cocycle.hpp"
#include "bowtie/groupoid.hpp"
#include "bowtie/matched_pair.hpp"

namespace bowtie {

// ---------------------------------------------------------------------------
// Permutation helpers (for the symmetric-group factorizations)

namespace perm {

using Permutation = std::vector<int>;

inline std::vector<Permutation> all_permutations(int n) {
    Permutation p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    std::vector<Permutation> out;
    do out.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return out;
}

inline Permutation compose(const Permutation& a, const Permutation& b) {
    Permutation out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[b[i]];  // apply b, then a
    return out;
}

inline int index_of(const std::vector<Permutation>& all, const Permutation& p) {
    for (std::size_t i = 0; i < all.size(); ++i)
        if (all[i] == p) return static_cast<int>(i);
    throw std::invalid_argument("index_of: not a permutation of the right degree");
}

/// Multiplication table of S_n in lexicographic ordering.
inline GroupTable symmetric_group_table(int n) {
    const auto all = all_permutations(n);
    const int m = static_cast<int>(all.size());
    GroupTable t(m, std::vector<int>(m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) t[i][j] = index_of(all, compose(all[i], all[j]));
    return t;
}

/// A permutation from cycle notation, e.g. {{0,1,2}} for the 3-cycle.
inline Permutation from_cycles(int n, const std::vector<std::vector<int>>& cycles) {
    Permutation p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    for (const auto& cyc : cycles)
        for (std::size_t i = 0; i < cyc.size(); ++i)
            p[cyc[i]] = cyc[(i + 1) % cyc.size()];
    return p;
}

}  // namespace perm

// ---------------------------------------------------------------------------
// Built entries

/// Everything one catalog entry constructs.  Entries that carry no twist
/// data leave the optional parts empty.
struct BuiltEntry {
    std::string name;
    std::optional<MatchedPair> mp;
    std::optional<ZsProductGroupoid> product;
    std::optional<Cocycle2> c1, c2;
    std::optional<ConnectingMap> phi;
    std::optional<Cocycle2> product_cocycle;
    // for the cohomology pair: a second cocycle on the same groupoid
    std::optional<Cocycle2> alt_cocycle;
    // named expected facts, each value suffixed with nothing; evaluated in selftest
    std::map<std::string, std::string> expected;
};

/// G1 = G2 = Z_q with trivial mutual actions, trivial factor cocycles and
/// the rotation connecting map phi(m,n) = (p/q) m n.  The product cocycle
/// is c(m,n) = (p/q) m2 n1 on Z_q^2 and its twisted algebra is the q x q
/// matrix algebra when gcd(p,q) = 1 (the rational rotation algebra).
inline BuiltEntry build_rotation(int q, int p) {
    BuiltEntry e;
    e.name = "rotation-" + std::to_string(q) + "-" + std::to_string(p);
    auto zq1 = std::make_shared<FiniteGroupoid>(from_group(cyclic_group_table(q)));
    auto zq2 = std::make_shared<FiniteGroupoid>(from_group(cyclic_group_table(q)));
    MatchedPair mp = trivial_matched_pair(zq1, zq2);
    e.c1 = trivial_cocycle(zq1);
    e.c2 = trivial_cocycle(zq2);
    ConnectingMap phi(mp);
    for (int m = 0; m < q; ++m)
        for (int n = 0; n < q; ++n) phi.set(m, n, Phase(static_cast<std::int64_t>(p) * m * n, q));
    e.phi = phi;
    e.mp = std::move(mp);
    e.product = zs_product(*e.mp);
    e.product_cocycle = zs_cocycle(*e.product, *e.c1, *e.c2, *e.phi);
    const int d = static_cast<int>(std::gcd(p % q == 0 ? q : p % q, q));
    e.expected["dimension"] = std::to_string(q * q);
    e.expected["center_dim"] = std::to_string(d * d);
    e.expected["blend_rank"] = std::to_string(q * q);
    return e;
}

/// Two groups with trivial mutual actions and trivial twist data; the
/// product is the direct product group.
inline BuiltEntry build_trivial_product() {
    BuiltEntry e;
    e.name = "trivial-c2-c3";
    auto c2g = std::make_shared<FiniteGroupoid>(from_group(cyclic_group_table(2)));
    auto c3g = std::make_shared<FiniteGroupoid>(from_group(cyclic_group_table(3)));
    MatchedPair mp = trivial_matched_pair(c2g, c3g);
    e.c1 = trivial_cocycle(c2g);
    e.c2 = trivial_cocycle(c3g);
    e.phi = ConnectingMap(mp);
    e.mp = std::move(mp);
    e.product = zs_product(*e.mp);
    e.product_cocycle = zs_cocycle(*e.product, *e.c1, *e.c2, *e.phi);
    e.expected["dimension"] = "6";
    e.expected["center_dim"] = "6";
    e.expected["blend_rank"] = "6";
    return e;
}

/// S3 factored as <(012)> . <(01)>, with the actions read off by unique
/// factorization inside S3.  Trivial twist data on both factors.
inline BuiltEntry build_s3() {
    BuiltEntry e;
    e.name = "s3";
    const auto table = perm::symmetric_group_table(3);
    const auto all = perm::all_permutations(3);
    const FiniteGroupoid s3 = from_group(table);
    const int c3gen = perm::index_of(all, perm::from_cycles(3, {{0, 1, 2}}));
    const int c2gen = perm::index_of(all, perm::from_cycles(3, {{0, 1}}));
    auto a1 = generated_subgroupoid(s3, {c3gen});
    auto a2 = generated_subgroupoid(s3, {c2gen});
    InternalDecomposition dec = internal_decompose(s3, a1.parent_arrow, a2.parent_arrow);
    if (!dec.ok) throw internal_error("build_s3: " + dec.error);
    e.mp = dec.mp;
    e.c1 = trivial_cocycle(e.mp->g1_ptr());
    e.c2 = trivial_cocycle(e.mp->g2_ptr());
    e.phi = ConnectingMap(*e.mp);
    e.product = zs_product(*e.mp);
    e.product_cocycle = zs_cocycle(*e.product, *e.c1, *e.c2, *e.phi);
    e.expected["dimension"] = "6";
    e.expected["center_dim"] = "3";
    e.expected["blend_rank"] = "6";
    e.expected["product_isomorphic_to_s3"] = "true";
    return e;
}

/// S4 factored as S3 (stabilizer of the last point) . <(0123)>; neither
/// factor is normal.
inline BuiltEntry build_s4() {
    BuiltEntry e;
    e.name = "s4";
    const auto table = perm::symmetric_group_table(4);
    const auto all = perm::all_permutations(4);
    const FiniteGroupoid s4 = from_group(table);
    std::vector<int> stab;
    for (std::size_t i = 0; i < all.size(); ++i)
        if (all[i][3] == 3) stab.push_back(static_cast<int>(i));
    const int c4gen = perm::index_of(all, perm::from_cycles(4, {{0, 1, 2, 3}}));
    auto a2 = generated_subgroupoid(s4, {c4gen});
    InternalDecomposition dec = internal_decompose(s4, stab, a2.parent_arrow);
    if (!dec.ok) throw internal_error("build_s4: " + dec.error);
    e.mp = dec.mp;
    e.c1 = trivial_cocycle(e.mp->g1_ptr());
    e.c2 = trivial_cocycle(e.mp->g2_ptr());
    e.phi = ConnectingMap(*e.mp);
    e.product = zs_product(*e.mp);
    e.product_cocycle = zs_cocycle(*e.product, *e.c1, *e.c2, *e.phi);
    e.expected["dimension"] = "24";
    e.expected["blend_rank"] = "24";
    e.expected["factors_nonnormal"] = "true";
    return e;
}

/// Two pair groupoids on n points, matched via the translation actions
///   (u,v) <| (v,w) = (u, u-v+w),   (u,v) |> (v,w) = (u-v+w, w)  (mod n).
/// The product is the fibred product; for n >= 2 it has the non-unit
/// isotropy arrow ((x,y),(y,x)) even though both factors are principal.
inline BuiltEntry build_pair_square(int n) {
    BuiltEntry e;
    e.name = "pair-square-" + std::to_string(n);
    auto p1 = std::make_shared<FiniteGroupoid>(pair_groupoid(n));
    auto p2 = std::make_shared<FiniteGroupoid>(pair_groupoid(n));
    const int m = n * n;
    auto arrow = [n](int i, int j) { return i * n + j; };
    std::vector<int> left(m * m, -1), right(m * m, -1);
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            for (int w = 0; w < n; ++w) {
                const int g = arrow(u, v);   // in G2, r=u, s=v
                const int x = arrow(v, w);   // in G1, r=v, s=w
                const int t = ((u - v + w) % n + n) % n;
                left[g * m + x] = arrow(u, t);
                right[g * m + x] = arrow(t, w);
            }
    MatchedPair mp(p1, p2, std::move(left), std::move(right));
    e.c1 = trivial_cocycle(p1);
    e.c2 = trivial_cocycle(p2);
    e.phi = ConnectingMap(mp);
    e.mp = std::move(mp);
    e.product = zs_product(*e.mp);
    e.product_cocycle = zs_cocycle(*e.product, *e.c1, *e.c2, *e.phi);
    e.expected["dimension"] = std::to_string(n * n * n);
    e.expected["blend_rank"] = std::to_string(n * n * n);
    e.expected["factors_principal"] = "true";
    e.expected["product_principal"] = "false";
    return e;
}

/// The nontrivial cohomology instance: Z2 x Z2 with the rotation cocycle
/// at 1/2 versus the trivial cocycle.
inline BuiltEntry build_z22_cohomology() {
    BuiltEntry rot = build_rotation(2, 1);
    BuiltEntry e;
    e.name = "z22-cohomology";
    e.product = rot.product;
    e.product_cocycle = rot.product_cocycle;
    e.alt_cocycle = trivial_cocycle(rot.product->base);
    e.mp = rot.mp;
    e.c1 = rot.c1;
    e.c2 = rot.c2;
    e.phi = rot.phi;
    e.expected["cohomologous_to_trivial"] = "false";
    return e;
}

/// A degenerate matched pair: the second factor is all units, so the
/// product cocycle reduces to c1.
inline BuiltEntry build_degenerate() {
    BuiltEntry e;
    e.name = "degenerate-c4-units";
    auto c4g = std::make_shared<FiniteGroupoid>(from_group(cyclic_group_table(4)));
    auto units = std::make_shared<FiniteGroupoid>(from_group(cyclic_group_table(1)));
    MatchedPair mp = trivial_matched_pair(c4g, units);
    // a nontrivial (but exact) normalized cocycle on Z4
    const std::vector<Phase> b = {Phase(0, 1), Phase(1, 8), Phase(4, 8), Phase(1, 8)};
    e.c1 = coboundary(c4g, b);
    e.c2 = trivial_cocycle(units);
    e.phi = ConnectingMap(mp);
    e.mp = std::move(mp);
    e.product = zs_product(*e.mp);
    e.product_cocycle = zs_cocycle(*e.product, *e.c1, *e.c2, *e.phi);
    e.expected["dimension"] = "4";
    e.expected["blend_rank"] = "4";
    return e;
}

// ---------------------------------------------------------------------------

struct CatalogEntry {
    std::string name;
    std::function<BuiltEntry(const std::map<std::string, int>&)> build;
};

inline int param_or(const std::map<std::string, int>& params, const std::string& key,
                    int dflt) {
    auto it = params.find(key);
    return it == params.end() ? dflt : it->second;
}

inline std::vector<CatalogEntry> catalog() {
    std::vector<CatalogEntry> out;
    auto fixed = [&](BuiltEntry (*f)(), const std::string& name) {
        out.push_back({name, [f](const std::map<std::string, int>&) { return f(); }});
    };
    out.push_back({"rotation", [](const std::map<std::string, int>& p) {
                       return build_rotation(param_or(p, "q", 2), param_or(p, "p", 1));
                   }});
    for (int q : {2, 3, 4}) {
        out.push_back({"rotation-" + std::to_string(q) + "-1",
                       [q](const std::map<std::string, int>&) { return build_rotation(q, 1); }});
        out.push_back({"rotation-" + std::to_string(q) + "-0",
                       [q](const std::map<std::string, int>&) { return build_rotation(q, 0); }});
    }
    fixed(&build_trivial_product, "trivial-c2-c3");
    fixed(&build_s3, "s3");
    fixed(&build_s4, "s4");
    out.push_back({"pair-square", [](const std::map<std::string, int>& p) {
                       return build_pair_square(param_or(p, "n", 2));
                   }});
    out.push_back({"pair-square-2",
                   [](const std::map<std::string, int>&) { return build_pair_square(2); }});
    fixed(&build_z22_cohomology, "z22-cohomology");
    fixed(&build_degenerate, "degenerate-c4-units");
    return out;
}

inline BuiltEntry build_entry(const std::string& name,
                              const std::map<std::string, int>& params = {}) {
    for (const auto& e : catalog())
        if (e.name == name) return e.build(params);
    throw std::invalid_argument("unknown catalog entry: " + name);
}

/// The entries selftest iterates over (fully built, default parameters,
/// no duplicate rotation aliases).
inline std::vector<std::string> selftest_entry_names() {
    return {"rotation-2-1", "rotation-3-1", "rotation-4-1", "rotation-2-0",
            "rotation-3-0", "rotation-4-0", "trivial-c2-c3", "s3",
            "s4",           "pair-square-2", "z22-cohomology", "degenerate-c4-units"};
}

}  // namespace bowtie

#endif
