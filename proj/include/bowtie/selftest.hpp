#ifndef BOWTIE_SELFTEST_HPP
#define BOWTIE_SELFTEST_HPP

#include <iomanip>
#include <ostream>
#include <random>
#include <string>

#include "bowtie/algebra.hpp"
#include "bowtie/catalog.hpp"
#include "bowtie/cocycle.hpp"
#include "bowtie/groupoid.hpp"
#include "bowtie/matched_pair.hpp"

namespace bowtie {

struct SelftestOptions {
    unsigned seed = 7;
    bool machine = false;
    double tolerance = 1e-9;
};

namespace detail {

class SelftestSink {
public:
    SelftestSink(std::ostream& out, bool machine) : out_(out), machine_(machine) {}

    void check(const std::string& entry, const std::string& name, bool ok,
               const std::string& detail = "") {
        ++total_;
        if (!ok) ++failures_;
        if (machine_) {
            out_ << "check." << entry << "." << name << "=" << (ok ? "pass" : "fail");
            if (!ok && !detail.empty()) out_ << " # " << detail;
            out_ << "\n";
        } else {
            out_ << (ok ? "[pass] " : "[FAIL] ") << entry << ": " << name;
            if (!ok && !detail.empty()) out_ << " (" << detail << ")";
            out_ << "\n";
        }
    }

    int failures() const { return failures_; }
    int total() const { return total_; }

private:
    std::ostream& out_;
    bool machine_;
    int failures_ = 0, total_ = 0;
};

inline AlgebraElement random_element(const AlgebraPtr& alg, std::mt19937& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    AlgebraElement f(alg);
    for (int a = 0; a < alg->g->num_arrows(); ++a) f.add(a, {dist(rng), dist(rng)});
    return f;
}

inline double element_distance(const AlgebraElement& f, const AlgebraElement& g) {
    double m = 0.0;
    const AlgebraElement d = f - g;
    for (auto [a, z] : d.coeffs()) m = std::max(m, std::abs(z));
    return m;
}

inline bool same_actions(const MatchedPair& a, const MatchedPair& b) {
    if (a.g1().num_arrows() != b.g1().num_arrows() ||
        a.g2().num_arrows() != b.g2().num_arrows())
        return false;
    for (int g = 0; g < a.g2().num_arrows(); ++g)
        for (int x = 0; x < a.g1().num_arrows(); ++x)
            if (a.left(g, x) != b.left(g, x) || a.right(g, x) != b.right(g, x))
                return false;
    return true;
}

inline bool same_connecting(const ConnectingMap& a, const ConnectingMap& b) {
    const MatchedPair& mp = a.pair();
    for (int g = 0; g < mp.g2().num_arrows(); ++g)
        for (int x = 0; x < mp.g1().num_arrows(); ++x)
            if (mp.in_domain(g, x) && a.at(g, x) != b.at(g, x)) return false;
    return true;
}

/// A seeded normalized 1-cochain with small random phases.
inline std::vector<Phase> random_cochain(const FiniteGroupoid& g, std::mt19937& rng) {
    std::uniform_int_distribution<int> num(0, 11);
    std::vector<Phase> b(g.num_arrows());
    for (int a = 0; a < g.num_arrows(); ++a)
        if (!g.is_unit_arrow(a)) b[a] = Phase(num(rng), 12);
    return b;
}

inline void run_entry(const BuiltEntry& e, SelftestSink& sink, std::mt19937& rng,
                      double tol) {
    const std::string& nm = e.name;
    const MatchedPair& mp = *e.mp;
    const ZsProductGroupoid& P = *e.product;

    sink.check(nm, "groupoid.g1", validate_groupoid(mp.g1()).ok());
    sink.check(nm, "groupoid.g2", validate_groupoid(mp.g2()).ok());
    sink.check(nm, "groupoid.product", validate_groupoid(*P.base).ok());

    sink.check(nm, "zs.axioms", validate_matched_pair(mp).ok(),
               validate_matched_pair(mp).str());
    sink.check(nm, "zs.derived", check_derived_axioms(mp).ok());
    sink.check(nm, "zs.fr", check_fr(mp).ok());

    const MatchedPair sw = swap(mp);
    sink.check(nm, "zs.swap-valid", validate_matched_pair(sw).ok());
    sink.check(nm, "zs.swap-involution", same_actions(swap(sw), mp));

    // unique factorization inverts the embedded products, in both orders
    {
        bool ok = true;
        for (int a = 0; a < P.base->num_arrows() && ok; ++a) {
            auto [x, g] = unique_factorization(P, a, FactorOrder::G1First);
            if (P.base->comp(P.embed1[x], P.embed2[g]) != a) ok = false;
            auto [g2, x2] = unique_factorization(P, a, FactorOrder::G2First);
            if (P.base->comp(P.embed2[g2], P.embed1[x2]) != a) ok = false;
        }
        sink.check(nm, "zs.unique-factorization", ok);
    }

    // internal decomposition of the product recovers the actions
    {
        std::vector<int> a1, a2;
        for (int x = 0; x < mp.g1().num_arrows(); ++x) a1.push_back(P.embed1[x]);
        for (int g = 0; g < mp.g2().num_arrows(); ++g) a2.push_back(P.embed2[g]);
        InternalDecomposition dec = internal_decompose(*P.base, a1, a2);
        sink.check(nm, "zs.internal-roundtrip", dec.ok && same_actions(dec.mp, mp),
                   dec.error);
    }

    const Cocycle2& c1 = *e.c1;
    const Cocycle2& c2 = *e.c2;
    const ConnectingMap& phi = *e.phi;
    const Cocycle2& c = *e.product_cocycle;

    sink.check(nm, "cocycle.c1", validate_cocycle(c1).ok());
    sink.check(nm, "cocycle.c2", validate_cocycle(c2).ok());
    sink.check(nm, "cocycle.connecting", validate_connecting(phi, c1, c2).ok());
    sink.check(nm, "cocycle.product", validate_cocycle(c).ok());

    // internal recovery returns the inputs exactly (sections align)
    {
        InternalTwistData in = internal_phi(P, c);
        sink.check(nm, "cocycle.internal-exact",
                   in.c1 == c1 && in.c2 == c2 && same_connecting(in.phi, phi));
    }

    // round trip, plain and coboundary-shifted
    {
        bool ok = true;
        std::string what;
        try {
            roundtrip_coboundary(P, c);
            const Cocycle2 shifted =
                [&] {
                    const Cocycle2 db = coboundary(P.base, random_cochain(*P.base, rng));
                    Cocycle2 out(P.base);
                    for (int a = 0; a < P.base->num_arrows(); ++a)
                        for (int b = 0; b < P.base->num_arrows(); ++b)
                            if (P.base->composable(a, b))
                                out.set(a, b, c.at(a, b) + db.at(a, b));
                    return out;
                }();
            roundtrip_coboundary(P, shifted);
        } catch (const internal_error& ex) {
            ok = false;
            what = ex.what();
        }
        sink.check(nm, "cocycle.roundtrip", ok, what);
    }

    // swapped connecting map is valid for (c2, c1) and swaps back; the
    // swapped pair reuses the factor pointers, so c1/c2 just change roles
    {
        const ConnectingMap phi2 = swap_connecting(phi);
        sink.check(nm, "cocycle.swap-valid", validate_connecting(phi2, c2, c1).ok());
        sink.check(nm, "cocycle.swap-involution",
                   same_connecting(swap_connecting(phi2), phi));
    }

    if (c2.is_trivial())
        sink.check(nm, "cocycle.line-action", check_line_action(phi, c1, c2).ok());

    // twisted algebra on the product
    const AlgebraPtr alg = make_algebra(P.base, c);
    {
        const AlgebraElement f = random_element(alg, rng);
        const AlgebraElement g = random_element(alg, rng);
        const AlgebraElement h = random_element(alg, rng);
        sink.check(nm, "algebra.associative",
                   element_distance(convolve(convolve(f, g), h),
                                    convolve(f, convolve(g, h))) < 1e-12);
        sink.check(nm, "algebra.involutive", element_distance(involution(involution(f)), f) < 1e-12);
        sink.check(nm, "algebra.antimultiplicative",
                   element_distance(involution(convolve(f, g)),
                                    convolve(involution(g), involution(f))) < 1e-12);
        // pi_u is a *-homomorphism
        bool rep_ok = true;
        for (int u = 0; u < P.base->num_units(); ++u) {
            const Eigen::MatrixXcd mf = regular_rep(f, u).entries;
            const Eigen::MatrixXcd mg = regular_rep(g, u).entries;
            const Eigen::MatrixXcd mfg = regular_rep(convolve(f, g), u).entries;
            const Eigen::MatrixXcd mfs = regular_rep(involution(f), u).entries;
            if ((mf * mg - mfg).cwiseAbs().maxCoeff() > 1e-9) rep_ok = false;
            if ((mf.adjoint() - mfs).cwiseAbs().maxCoeff() > 1e-9) rep_ok = false;
        }
        sink.check(nm, "algebra.rep-homomorphism", rep_ok);
        const double nf = reduced_norm(f);
        sink.check(nm, "algebra.cstar-identity",
                   std::abs(reduced_norm(convolve(involution(f), f)) - nf * nf) <
                       1e-7 * std::max(1.0, nf * nf));
        sink.check(nm, "algebra.bisection-norm",
                   bisection_norm_check(delta(alg, 0, {0.3, -1.2}), tol).ok());
    }

    // expected facts
    {
        auto want = [&](const std::string& key) {
            auto it = e.expected.find(key);
            return it == e.expected.end() ? std::string() : it->second;
        };
        if (!want("dimension").empty())
            sink.check(nm, "expected.dimension",
                       std::to_string(P.base->num_arrows()) == want("dimension"));
        if (!want("center_dim").empty())
            sink.check(nm, "expected.center_dim",
                       std::to_string(center(alg).dimension) == want("center_dim"),
                       "got " + std::to_string(center(alg).dimension));
        const BlendReport br = blend_check(P, alg);
        if (!want("blend_rank").empty())
            sink.check(nm, "expected.blend_rank",
                       std::to_string(br.rank) == want("blend_rank") && br.spanning &&
                           br.austere,
                       "rank " + std::to_string(br.rank) + " via " + br.rank_path);
        if (want("factors_principal") == "true")
            sink.check(nm, "expected.factors_principal",
                       is_principal(mp.g1()) && is_principal(mp.g2()));
        if (want("product_principal") == "false")
            sink.check(nm, "expected.product_not_principal", !is_principal(*P.base));
        if (want("cohomologous_to_trivial") == "false")
            sink.check(nm, "expected.noncohomologous",
                       !are_cohomologous(*e.product_cocycle, *e.alt_cocycle).has_value());
        if (want("product_isomorphic_to_s3") == "true")
            sink.check(nm, "expected.iso-s3",
                       is_isomorphic_small(*P.base,
                                           from_group(perm::symmetric_group_table(3)))
                           .has_value());
        if (want("factors_nonnormal") == "true") {
            // neither embedded factor is closed under conjugation in the product
            auto normal = [&](const std::vector<int>& emb) {
                std::vector<char> in(P.base->num_arrows(), 0);
                for (int a : emb) in[a] = 1;
                for (int a : emb)
                    for (int k = 0; k < P.base->num_arrows(); ++k) {
                        if (!P.base->composable(k, a)) continue;
                        const int conj = P.base->comp(P.base->comp(k, a), P.base->inv(k));
                        if (!in[conj]) return false;
                    }
                return true;
            };
            sink.check(nm, "expected.nonnormal", !normal(P.embed1) && !normal(P.embed2));
        }
    }
}

}  // namespace detail

/// Runs every invariant suite over the catalog.  Returns the number of
/// failed checks; output is line-oriented and, in machine mode,
/// byte-identical across runs at a fixed seed.
inline int selftest(std::ostream& out, const SelftestOptions& opt) {
    detail::SelftestSink sink(out, opt.machine);
    std::mt19937 rng(opt.seed);
    if (opt.machine) out << "seed=" << opt.seed << "\n";
    for (const std::string& name : selftest_entry_names())
        detail::run_entry(build_entry(name), sink, rng, opt.tolerance);
    if (opt.machine) {
        out << "checks=" << sink.total() << "\n";
        out << "failures=" << sink.failures() << "\n";
        out << "selftest=" << (sink.failures() == 0 ? "pass" : "fail") << "\n";
    } else {
        out << sink.total() << " checks, " << sink.failures() << " failures\n";
    }
    return sink.failures();
}

}  // namespace bowtie

#endif
