#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "bowtie/algebra.hpp"
#include "bowtie/catalog.hpp"

using namespace bowtie;

namespace {

AlgebraPtr rotation_algebra(int q, int p) {
    const BuiltEntry e = build_rotation(q, p);
    return make_algebra(e.product->base, *e.product_cocycle);
}

AlgebraPtr group_algebra(const GroupTable& t) {
    auto g = std::make_shared<FiniteGroupoid>(from_group(t));
    return make_algebra(g, trivial_cocycle(g));
}

AlgebraElement random_element(const AlgebraPtr& alg, std::mt19937& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    AlgebraElement f(alg);
    for (int a = 0; a < alg->g->num_arrows(); ++a) f.add(a, {dist(rng), dist(rng)});
    return f;
}

double dist(const AlgebraElement& f, const AlgebraElement& g) {
    double m = 0.0;
    const AlgebraElement d = f - g;
    for (auto [a, z] : d.coeffs()) m = std::max(m, std::abs(z));
    return m;
}

}  // namespace

TEST_CASE("unit deltas are projections") {
    const AlgebraPtr alg = group_algebra(cyclic_group_table(3));
    const int u = alg->g->unit_arrow(0);
    const AlgebraElement e = delta(alg, u);
    REQUIRE(dist(convolve(e, e), e) == 0.0);
    REQUIRE(dist(involution(e), e) == 0.0);
}

TEST_CASE("delta scaling and sup norm") {
    const AlgebraPtr alg = group_algebra(cyclic_group_table(3));
    REQUIRE(sup_norm(delta(alg, 1, 3.0)) == 3.0);
    REQUIRE_THROWS_AS(delta(alg, 17), std::invalid_argument);
}

TEST_CASE("basis convolution follows the cocycle") {
    const AlgebraPtr alg = rotation_algebra(2, 1);
    const FiniteGroupoid& g = *alg->g;
    for (int a = 0; a < g.num_arrows(); ++a) {
        const int ai = g.inv(a);
        const AlgebraElement p = convolve(delta(alg, a), delta(alg, ai));
        REQUIRE(p.coeffs().size() == 1);
        const auto [arrow, z] = *p.coeffs().begin();
        REQUIRE(arrow == g.unit_arrow(g.rng(a)));
        REQUIRE(std::abs(z - alg->c.at(a, ai).embed()) < 1e-12);
    }
}

TEST_CASE("half-turn twist makes the generators anticommute") {
    const BuiltEntry e = build_rotation(2, 1);
    const AlgebraPtr alg = make_algebra(e.product->base, *e.product_cocycle);
    const ZsProductGroupoid& P = *e.product;
    const int a10 = P.arrow_of(1, 0), a01 = P.arrow_of(0, 1), a11 = P.arrow_of(1, 1);
    const AlgebraElement fwd = convolve(delta(alg, a10), delta(alg, a01));
    const AlgebraElement bwd = convolve(delta(alg, a01), delta(alg, a10));
    REQUIRE(dist(fwd, delta(alg, a11)) < 1e-12);
    REQUIRE(dist(bwd, delta(alg, a11, -1.0)) < 1e-12);
}

TEST_CASE("deltas over non-composable arrows multiply to zero") {
    auto g = std::make_shared<FiniteGroupoid>(pair_groupoid(2));
    const AlgebraPtr alg = make_algebra(g, trivial_cocycle(g));
    // (0,1) then (0,1): source 1 vs range 0
    const AlgebraElement p = convolve(delta(alg, 1), delta(alg, 1));
    REQUIRE(p.coeffs().empty());
}

TEST_CASE("convolution is associative exactly when the table is a cocycle") {
    const AlgebraPtr alg = rotation_algebra(3, 1);
    std::mt19937 rng(3);
    const AlgebraElement f = random_element(alg, rng);
    const AlgebraElement g = random_element(alg, rng);
    const AlgebraElement h = random_element(alg, rng);
    REQUIRE(dist(convolve(convolve(f, g), h), convolve(f, convolve(g, h))) < 1e-12);

    // perturb one entry: associativity must fail on some basis triple
    Cocycle2 bad = alg->c;
    bad.set(1, 1, bad.at(1, 1) + Phase(1, 7));
    const AlgebraPtr alg2 = make_algebra(alg->g, bad);
    bool broke = false;
    for (int a = 0; a < alg2->g->num_arrows() && !broke; ++a)
        for (int b = 0; b < alg2->g->num_arrows() && !broke; ++b)
            for (int c = 0; c < alg2->g->num_arrows() && !broke; ++c)
                if (dist(convolve(convolve(delta(alg2, a), delta(alg2, b)), delta(alg2, c)),
                         convolve(delta(alg2, a), convolve(delta(alg2, b), delta(alg2, c)))) >
                    1e-9)
                    broke = true;
    REQUIRE(broke);
}

TEST_CASE("involution properties") {
    const AlgebraPtr alg = rotation_algebra(4, 1);
    std::mt19937 rng(9);
    const AlgebraElement f = random_element(alg, rng);
    const AlgebraElement g = random_element(alg, rng);
    REQUIRE(dist(involution(involution(f)), f) < 1e-12);
    REQUIRE(dist(involution(convolve(f, g)), convolve(involution(g), involution(f))) <
            1e-12);
    // untwisted: delta_g* = delta_{g^-1}
    const AlgebraPtr plain = group_algebra(perm::symmetric_group_table(3));
    for (int a = 0; a < plain->g->num_arrows(); ++a)
        REQUIRE(dist(involution(delta(plain, a)), delta(plain, plain->g->inv(a))) == 0.0);
}

TEST_CASE("regular representation of a unit delta is the identity") {
    const AlgebraPtr alg = rotation_algebra(2, 1);
    const RepMatrix m = regular_rep(delta(alg, alg->g->unit_arrow(0)), 0);
    REQUIRE(m.entries.isApprox(Eigen::MatrixXcd::Identity(4, 4), 1e-12));
}

TEST_CASE("order-2 group representation is the swap matrix") {
    const AlgebraPtr alg = group_algebra(cyclic_group_table(2));
    const RepMatrix m = regular_rep(delta(alg, 1), 0);
    Eigen::MatrixXcd swap(2, 2);
    swap << 0, 1, 1, 0;
    REQUIRE(m.entries.isApprox(swap, 1e-12));
}

TEST_CASE("representations of the anticommuting generators anticommute") {
    const BuiltEntry e = build_rotation(2, 1);
    const AlgebraPtr alg = make_algebra(e.product->base, *e.product_cocycle);
    const ZsProductGroupoid& P = *e.product;
    const Eigen::MatrixXcd a = regular_rep(delta(alg, P.arrow_of(1, 0)), 0).entries;
    const Eigen::MatrixXcd b = regular_rep(delta(alg, P.arrow_of(0, 1)), 0).entries;
    REQUIRE((a * b + b * a).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("representation is a star-homomorphism") {
    const AlgebraPtr alg = rotation_algebra(3, 1);
    std::mt19937 rng(13);
    for (int trial = 0; trial < 5; ++trial) {
        const AlgebraElement f = random_element(alg, rng);
        const AlgebraElement g = random_element(alg, rng);
        for (int u = 0; u < alg->g->num_units(); ++u) {
            const Eigen::MatrixXcd mf = regular_rep(f, u).entries;
            const Eigen::MatrixXcd mg = regular_rep(g, u).entries;
            REQUIRE((mf * mg - regular_rep(convolve(f, g), u).entries)
                        .cwiseAbs()
                        .maxCoeff() < 1e-9);
            REQUIRE((mf.adjoint() - regular_rep(involution(f), u).entries)
                        .cwiseAbs()
                        .maxCoeff() < 1e-9);
        }
    }
}

TEST_CASE("reduced norm basics") {
    const AlgebraPtr alg = group_algebra(cyclic_group_table(2));
    REQUIRE(std::abs(reduced_norm(delta(alg, 1, {0.0, -2.5})) - 2.5) < 1e-12);
    const AlgebraElement f = delta(alg, 0) + delta(alg, 1);
    REQUIRE(std::abs(reduced_norm(f) - 2.0) < 1e-9);
}

TEST_CASE("reduced norm satisfies the C*-identity") {
    std::mt19937 rng(21);
    for (int q : {2, 3}) {
        const AlgebraPtr alg = rotation_algebra(q, 1);
        for (int trial = 0; trial < 10; ++trial) {
            const AlgebraElement f = random_element(alg, rng);
            const double n = reduced_norm(f);
            REQUIRE(std::abs(reduced_norm(convolve(involution(f), f)) - n * n) <=
                    1e-7 * std::max(1.0, n * n));
            REQUIRE(n <= alg->g->num_arrows() * sup_norm(f) + 1e-9);
        }
    }
}

TEST_CASE("self-adjoint elements: norm equals spectral radius") {
    const AlgebraPtr alg = rotation_algebra(2, 1);
    std::mt19937 rng(31);
    const AlgebraElement g = random_element(alg, rng);
    const AlgebraElement f = convolve(involution(g), g);  // self-adjoint
    for (int u = 0; u < alg->g->num_units(); ++u) {
        const Eigen::MatrixXcd m = regular_rep(f, u).entries;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
        const double rad =
            std::max(std::abs(es.eigenvalues().minCoeff()), es.eigenvalues().maxCoeff());
        REQUIRE(std::abs(operator_norm(m) - rad) < 1e-9);
    }
}

TEST_CASE("bisection support equalizes sup and reduced norms") {
    auto g = std::make_shared<FiniteGroupoid>(pair_groupoid(3));
    const AlgebraPtr alg = make_algebra(g, trivial_cocycle(g));
    // a weighted partial permutation: (0,1), (1,2), (2,0)
    AlgebraElement f(alg);
    f.add(0 * 3 + 1, {0.5, 0.0});
    f.add(1 * 3 + 2, {0.0, -2.0});
    f.add(2 * 3 + 0, {1.0, 1.0});
    REQUIRE(support_is_bisection(f));
    REQUIRE(bisection_norm_check(f).ok());
    REQUIRE(std::abs(reduced_norm(f) - 2.0) < 1e-9);  // largest |weight|
}

TEST_CASE("non-bisection support is a precondition error") {
    auto g = std::make_shared<FiniteGroupoid>(pair_groupoid(2));
    const AlgebraPtr alg = make_algebra(g, trivial_cocycle(g));
    AlgebraElement f(alg);
    f.add(0 * 2 + 1, 1.0);
    f.add(1 * 2 + 1, 1.0);  // same source
    REQUIRE_FALSE(support_is_bisection(f));
    REQUIRE_THROWS_AS(bisection_norm_check(f), std::invalid_argument);
}

TEST_CASE("center dimensions") {
    REQUIRE(center(rotation_algebra(2, 0)).dimension == 4);
    REQUIRE(center(rotation_algebra(2, 1)).dimension == 1);
    REQUIRE(center(rotation_algebra(3, 1)).dimension == 1);
    REQUIRE(center(group_algebra(perm::symmetric_group_table(3))).dimension == 3);
}

TEST_CASE("center basis elements actually commute with everything") {
    const AlgebraPtr alg = group_algebra(perm::symmetric_group_table(3));
    const CenterResult c = center(alg);
    for (const AlgebraElement& z : c.basis)
        for (int a = 0; a < alg->g->num_arrows(); ++a)
            REQUIRE(dist(convolve(z, delta(alg, a)), convolve(delta(alg, a), z)) < 1e-12);
}

TEST_CASE("factor inclusion maps deltas onto embedded deltas") {
    const BuiltEntry e = build_s3();
    const ZsProductGroupoid& P = *e.product;
    const AlgebraPtr alg = make_algebra(P.base, *e.product_cocycle);
    const AlgebraPtr alg1 = make_algebra(P.mp.g1_ptr(), restrict_cocycle(P, alg->c, 1));
    for (int x = 0; x < P.mp.g1().num_arrows(); ++x) {
        const AlgebraElement inc = include_factor(P, 1, delta(alg1, x), alg);
        REQUIRE(inc.coeffs().size() == 1);
        REQUIRE(inc.coeffs().begin()->first == P.embed1[x]);
    }
}

TEST_CASE("factor inclusion is multiplicative on all basis pairs") {
    const BuiltEntry e = build_s3();
    const ZsProductGroupoid& P = *e.product;
    const AlgebraPtr alg = make_algebra(P.base, *e.product_cocycle);
    for (int which : {1, 2}) {
        const FiniteGroupoid& gi = which == 1 ? P.mp.g1() : P.mp.g2();
        const AlgebraPtr algi =
            make_algebra(which == 1 ? P.mp.g1_ptr() : P.mp.g2_ptr(),
                         restrict_cocycle(P, alg->c, which));
        for (int a = 0; a < gi.num_arrows(); ++a)
            for (int b = 0; b < gi.num_arrows(); ++b) {
                const AlgebraElement lhs = include_factor(
                    P, which, convolve(delta(algi, a), delta(algi, b)), alg);
                const AlgebraElement rhs =
                    convolve(include_factor(P, which, delta(algi, a), alg),
                             include_factor(P, which, delta(algi, b), alg));
                REQUIRE(dist(lhs, rhs) < 1e-12);
                REQUIRE(dist(include_factor(P, which, involution(delta(algi, a)), alg),
                             involution(include_factor(P, which, delta(algi, a), alg))) <
                        1e-12);
            }
    }
}

TEST_CASE("inclusion images meet only in unit-supported elements") {
    const BuiltEntry e = build_s3();
    const ZsProductGroupoid& P = *e.product;
    std::vector<char> in1(P.base->num_arrows(), 0);
    for (int a : P.embed1) in1[a] = 1;
    for (int g = 0; g < P.mp.g2().num_arrows(); ++g)
        if (in1[P.embed2[g]])
            REQUIRE(P.base->is_unit_arrow(P.embed2[g]));
}

TEST_CASE("inclusion rejects a mismatched cocycle") {
    const BuiltEntry e = build_rotation(2, 1);
    const ZsProductGroupoid& P = *e.product;
    const AlgebraPtr alg = make_algebra(P.base, *e.product_cocycle);
    // wrong factor cocycle: a nonzero table where the restriction is trivial
    Cocycle2 wrong = restrict_cocycle(P, alg->c, 1);
    wrong.set(1, 1, wrong.at(1, 1) + Phase(1, 2));
    const AlgebraPtr bad = make_algebra(P.mp.g1_ptr(), wrong);
    REQUIRE_THROWS_AS(include_factor(P, 1, delta(bad, 1), alg), std::invalid_argument);
}

TEST_CASE("blend spans the whole product algebra") {
    for (const std::string& name :
         {std::string("trivial-c2-c3"), std::string("rotation-2-1"), std::string("s3"),
          std::string("pair-square-2")}) {
        const BuiltEntry e = build_entry(name);
        const AlgebraPtr alg = make_algebra(e.product->base, *e.product_cocycle);
        const BlendReport rep = blend_check(*e.product, alg);
        REQUIRE(rep.spanning);
        REQUIRE(rep.rank == e.product->base->num_arrows());
        REQUIRE(rep.austere);
    }
}

TEST_CASE("rotation blends rank exactly over the Gaussian integers") {
    const BuiltEntry e = build_rotation(2, 1);
    const AlgebraPtr alg = make_algebra(e.product->base, *e.product_cocycle);
    const BlendReport rep = blend_check(*e.product, alg);
    REQUIRE(rep.rank == 4);
    REQUIRE(rep.rank_path == "exact");
}

TEST_CASE("factor-product phases vanish for aligned product cocycles") {
    // c(iota1 x, iota2 g) = 0 by normalization whenever the cocycle was
    // assembled from factor data, so the exact rank path runs
    const BuiltEntry e = build_rotation(3, 1);
    const AlgebraPtr alg = make_algebra(e.product->base, *e.product_cocycle);
    const BlendReport rep = blend_check(*e.product, alg);
    REQUIRE(rep.rank == 9);
    REQUIRE(rep.rank_path == "exact");
}

TEST_CASE("third-root phases fall back to the numeric rank path") {
    // shift the cocycle by a coboundary with denominator-3 phases: the
    // blend products pick up those phases and leave the Gaussian integers
    const BuiltEntry e = build_rotation(2, 0);
    const GroupoidPtr g = e.product->base;
    std::vector<Phase> b(g->num_arrows());
    for (int a = 0; a < g->num_arrows(); ++a)
        if (!g->is_unit_arrow(a)) b[a] = Phase(1, 3);
    const Cocycle2 db = coboundary(g, b);
    Cocycle2 shifted(g);
    for (int a = 0; a < g->num_arrows(); ++a)
        for (int bb = 0; bb < g->num_arrows(); ++bb)
            if (g->composable(a, bb))
                shifted.set(a, bb, e.product_cocycle->at(a, bb) + db.at(a, bb));
    const AlgebraPtr alg = make_algebra(g, shifted);
    const BlendReport rep = blend_check(*e.product, alg);
    REQUIRE(rep.rank == 4);
    REQUIRE(rep.spanning);
    REQUIRE(rep.rank_path == "numeric");
}

TEST_CASE("dropping a factor's non-unit arrows breaks spanning") {
    const BuiltEntry e = build_s3();
    const ZsProductGroupoid& P = *e.product;
    const AlgebraPtr alg = make_algebra(P.base, *e.product_cocycle);
    std::vector<std::pair<int, int>> prods;
    for (int x = 0; x < P.mp.g1().num_arrows(); ++x) {
        if (!P.mp.g1().is_unit_arrow(x)) continue;  // units only from factor 1
        for (int g = 0; g < P.mp.g2().num_arrows(); ++g) prods.emplace_back(x, g);
    }
    auto [rank, path] = blend_rank(P, alg, prods);
    REQUIRE(rank < P.base->num_arrows());
}
