#include <catch2/catch_amalgamated.hpp>

#include "bowtie/catalog.hpp"
#include "bowtie/matched_pair.hpp"

using namespace bowtie;

TEST_CASE("trivial mutual actions on groups form a matched pair") {
    auto g1 = std::make_shared<FiniteGroupoid>(from_group(cyclic_group_table(2)));
    auto g2 = std::make_shared<FiniteGroupoid>(from_group(cyclic_group_table(3)));
    const MatchedPair mp = trivial_matched_pair(g1, g2);
    REQUIRE(validate_matched_pair(mp).ok());
    REQUIRE(check_derived_axioms(mp).ok());
    REQUIRE(check_fr(mp).ok());
}

TEST_CASE("actions derived from the 6-element symmetric group are valid") {
    const BuiltEntry e = build_s3();
    REQUIRE(validate_matched_pair(*e.mp).ok());
    REQUIRE(check_derived_axioms(*e.mp).ok());
    REQUIRE(check_fr(*e.mp).ok());
    REQUIRE(e.mp->g1().num_arrows() == 3);
    REQUIRE(e.mp->g2().num_arrows() == 2);
}

TEST_CASE("actions derived from the 24-element symmetric group are valid") {
    const BuiltEntry e = build_s4();
    REQUIRE(validate_matched_pair(*e.mp).ok());
    REQUIRE(check_derived_axioms(*e.mp).ok());
    REQUIRE(check_fr(*e.mp).ok());
}

TEST_CASE("a corrupted action entry is reported with a witness") {
    auto g1 = std::make_shared<FiniteGroupoid>(from_group(cyclic_group_table(3)));
    auto g2 = std::make_shared<FiniteGroupoid>(from_group(cyclic_group_table(2)));
    const int n1 = 3;
    std::vector<int> left(2 * 3), right(2 * 3);
    for (int g = 0; g < 2; ++g)
        for (int x = 0; x < 3; ++x) {
            left[g * n1 + x] = x;
            right[g * n1 + x] = g;
        }
    left[1 * n1 + 1] = 2;  // corrupt one <| entry
    const MatchedPair mp(g1, g2, left, right);
    const Report rep = validate_matched_pair(mp);
    REQUIRE_FALSE(rep.ok());
    bool named = false;
    for (const auto& v : rep.violations)
        if ((v.law == "ZS3" || v.law == "ZS8" || v.law == "ZS1") && !v.witness.empty())
            named = true;
    REQUIRE(named);
}

TEST_CASE("trivial actions on pair groupoids violate the momentum law") {
    auto p1 = std::make_shared<FiniteGroupoid>(pair_groupoid(2));
    auto p2 = std::make_shared<FiniteGroupoid>(pair_groupoid(2));
    const MatchedPair mp = trivial_matched_pair(p1, p2);
    const Report rep = validate_matched_pair(mp);
    REQUIRE_FALSE(rep.ok());
    bool zs7 = false;
    for (const auto& v : rep.violations)
        if (v.law == "ZS7") zs7 = true;
    REQUIRE(zs7);
}

TEST_CASE("translation actions match two pair groupoids") {
    const BuiltEntry e = build_pair_square(2);
    REQUIRE(validate_matched_pair(*e.mp).ok());
    REQUIRE(check_derived_axioms(*e.mp).ok());
    REQUIRE(check_fr(*e.mp).ok());
    const BuiltEntry e3 = build_pair_square(3);
    REQUIRE(validate_matched_pair(*e3.mp).ok());
    REQUIRE(check_fr(*e3.mp).ok());
}

TEST_CASE("product of trivially matched groups is the direct product") {
    auto g1 = std::make_shared<FiniteGroupoid>(from_group(cyclic_group_table(2)));
    auto g2 = std::make_shared<FiniteGroupoid>(from_group(cyclic_group_table(3)));
    const ZsProductGroupoid P = zs_product(trivial_matched_pair(g1, g2));
    REQUIRE(P.base->num_arrows() == 6);
    REQUIRE(validate_groupoid(*P.base).ok());
    REQUIRE(is_isomorphic_small(*P.base, from_group(cyclic_group_table(6))).has_value());
}

TEST_CASE("product of the derived 6-element pair is the symmetric group") {
    const BuiltEntry e = build_s3();
    REQUIRE(e.product->base->num_arrows() == 6);
    REQUIRE(validate_groupoid(*e.product->base).ok());
    REQUIRE(is_isomorphic_small(*e.product->base,
                                from_group(perm::symmetric_group_table(3)))
                .has_value());
    // not abelian, so not C6
    REQUIRE_FALSE(
        is_isomorphic_small(*e.product->base, from_group(cyclic_group_table(6)))
            .has_value());
}

TEST_CASE("fibred square of two 2-point pair groupoids") {
    const BuiltEntry e = build_pair_square(2);
    const ZsProductGroupoid& P = *e.product;
    REQUIRE(P.base->num_arrows() == 8);
    REQUIRE(validate_groupoid(*P.base).ok());
    REQUIRE(is_principal(P.mp.g1()));
    REQUIRE(is_principal(P.mp.g2()));
    REQUIRE_FALSE(is_principal(*P.base));
    // the non-unit isotropy witness ((0,1),(1,0))
    const int x = 0 * 2 + 1, g = 1 * 2 + 0;
    const int a = P.arrow_of(x, g);
    REQUIRE(a >= 0);
    REQUIRE(P.base->src(a) == P.base->rng(a));
    REQUIRE_FALSE(P.base->is_unit_arrow(a));
}

TEST_CASE("embeddings are injective homomorphisms") {
    const BuiltEntry e = build_s3();
    const ZsProductGroupoid& P = *e.product;
    const FiniteGroupoid& G1 = P.mp.g1();
    const FiniteGroupoid& G2 = P.mp.g2();
    for (int x = 0; x < G1.num_arrows(); ++x)
        for (int y = 0; y < G1.num_arrows(); ++y) {
            if (x != y) REQUIRE(P.embed1[x] != P.embed1[y]);
            if (G1.composable(x, y))
                REQUIRE(P.base->comp(P.embed1[x], P.embed1[y]) ==
                        P.embed1[G1.comp(x, y)]);
        }
    for (int g = 0; g < G2.num_arrows(); ++g)
        for (int h = 0; h < G2.num_arrows(); ++h) {
            if (g != h) REQUIRE(P.embed2[g] != P.embed2[h]);
            if (G2.composable(g, h))
                REQUIRE(P.base->comp(P.embed2[g], P.embed2[h]) ==
                        P.embed2[G2.comp(g, h)]);
        }
}

TEST_CASE("factorisation map and its inverse") {
    const BuiltEntry e = build_s3();
    const MatchedPair& mp = *e.mp;
    const FiniteGroupoid& G1 = mp.g1();
    const FiniteGroupoid& G2 = mp.g2();
    for (int g = 0; g < G2.num_arrows(); ++g)
        for (int x = 0; x < G1.num_arrows(); ++x) {
            if (!mp.in_domain(g, x)) continue;
            auto [y, h] = psi(mp, g, x);
            REQUIRE(psi_inverse(mp, y, h) == std::make_pair(g, x));
        }
}

TEST_CASE("trivial actions give the identity factorisation map") {
    auto g1 = std::make_shared<FiniteGroupoid>(from_group(cyclic_group_table(2)));
    auto g2 = std::make_shared<FiniteGroupoid>(from_group(cyclic_group_table(2)));
    const MatchedPair mp = trivial_matched_pair(g1, g2);
    for (int g = 0; g < 2; ++g)
        for (int x = 0; x < 2; ++x) REQUIRE(psi(mp, g, x) == std::make_pair(x, g));
}

TEST_CASE("unique factorization in both orders") {
    for (const BuiltEntry& e : {build_s3(), build_pair_square(2)}) {
        const ZsProductGroupoid& P = *e.product;
        for (int k = 0; k < P.base->num_arrows(); ++k) {
            auto [x, g] = unique_factorization(P, k, FactorOrder::G1First);
            REQUIRE(P.base->comp(P.embed1[x], P.embed2[g]) == k);
            auto [g2, x2] = unique_factorization(P, k, FactorOrder::G2First);
            REQUIRE(P.base->comp(P.embed2[g2], P.embed1[x2]) == k);
        }
    }
}

TEST_CASE("the identity permutation factors through the factor units") {
    // G2-first factorization of a transposition in the 6-element model
    const BuiltEntry e = build_s3();
    const ZsProductGroupoid& P = *e.product;
    // the embedded image of the G2 generator (a transposition)
    const int k = P.embed2[1];
    auto [g, x] = unique_factorization(P, k, FactorOrder::G2First);
    REQUIRE(g == 1);
    REQUIRE(x == 0);  // identity of the 3-cycle factor
}

TEST_CASE("swap is a matched pair and an involution") {
    for (const BuiltEntry& e : {build_s3(), build_s4(), build_pair_square(2)}) {
        const MatchedPair sw = swap(*e.mp);
        REQUIRE(validate_matched_pair(sw).ok());
        const MatchedPair back = swap(sw);
        for (int g = 0; g < e.mp->g2().num_arrows(); ++g)
            for (int x = 0; x < e.mp->g1().num_arrows(); ++x) {
                REQUIRE(back.left(g, x) == e.mp->left(g, x));
                REQUIRE(back.right(g, x) == e.mp->right(g, x));
            }
    }
}

TEST_CASE("internal decomposition recovers the matched pair") {
    for (const BuiltEntry& e : {build_s3(), build_pair_square(2)}) {
        const ZsProductGroupoid& P = *e.product;
        std::vector<int> a1, a2;
        for (int x = 0; x < P.mp.g1().num_arrows(); ++x) a1.push_back(P.embed1[x]);
        for (int g = 0; g < P.mp.g2().num_arrows(); ++g) a2.push_back(P.embed2[g]);
        const InternalDecomposition dec = internal_decompose(*P.base, a1, a2);
        REQUIRE(dec.ok);
        for (int g = 0; g < P.mp.g2().num_arrows(); ++g)
            for (int x = 0; x < P.mp.g1().num_arrows(); ++x) {
                REQUIRE(dec.mp.left(g, x) == P.mp.left(g, x));
                REQUIRE(dec.mp.right(g, x) == P.mp.right(g, x));
            }
    }
}

TEST_CASE("order-6 cyclic group decomposes as 2 times 3") {
    const FiniteGroupoid z6 = from_group(cyclic_group_table(6));
    const InternalDecomposition dec = internal_decompose(z6, {0, 2, 4}, {0, 3});
    REQUIRE(dec.ok);
    REQUIRE(validate_matched_pair(dec.mp).ok());
    // abelian, so both actions are trivial
    for (int g = 0; g < 2; ++g)
        for (int x = 0; x < 3; ++x) {
            REQUIRE(dec.mp.left(g, x) == x);
            REQUIRE(dec.mp.right(g, x) == g);
        }
    REQUIRE(is_isomorphic_small(*zs_product(dec.mp).base, z6).has_value());
}

TEST_CASE("overlapping factors are rejected") {
    const FiniteGroupoid s3 = from_group(perm::symmetric_group_table(3));
    const auto all = perm::all_permutations(3);
    const int rot = perm::index_of(all, perm::from_cycles(3, {{0, 1, 2}}));
    const SubgroupoidResult a = generated_subgroupoid(s3, {rot});
    const InternalDecomposition dec =
        internal_decompose(s3, a.parent_arrow, a.parent_arrow);
    REQUIRE_FALSE(dec.ok);
    REQUIRE(dec.error.find("intersection") != std::string::npos);
}

TEST_CASE("non-exhaustive factors are rejected with a witness") {
    const FiniteGroupoid z4 = from_group(cyclic_group_table(4));
    const InternalDecomposition dec = internal_decompose(z4, {0, 2}, {0, 2});
    REQUIRE_FALSE(dec.ok);
}

TEST_CASE("neither symmetric-group factor is normal in the 24-element model") {
    const BuiltEntry e = build_s4();
    const ZsProductGroupoid& P = *e.product;
    auto normal = [&](const std::vector<int>& emb) {
        std::vector<char> in(P.base->num_arrows(), 0);
        for (int a : emb) in[a] = 1;
        for (int a : emb)
            for (int k = 0; k < P.base->num_arrows(); ++k) {
                const int conj = P.base->comp(P.base->comp(k, a), P.base->inv(k));
                if (!in[conj]) return false;
            }
        return true;
    };
    REQUIRE_FALSE(normal(P.embed1));
    REQUIRE_FALSE(normal(P.embed2));
}
