#ifndef BOWTIE_ALGEBRA_HPP
#define BOWTIE_ALGEBRA_HPP

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "bowtie/cocycle.hpp"
#include "bowtie/groupoid.hpp"
#include "bowtie/matched_pair.hpp"
#include "bowtie/phase.hpp"
#include "bowtie/report.hpp"

namespace bowtie {

using Complex = std::complex<double>;

/// The finite-dimensional twisted convolution *-algebra C(G, c): complex
/// coefficient maps on arrows with delta_a * delta_b = embed(c(a,b)) delta_ab.
struct TwistedAlgebra {
    GroupoidPtr g;
    Cocycle2 c;
};

using AlgebraPtr = std::shared_ptr<const TwistedAlgebra>;

inline AlgebraPtr make_algebra(GroupoidPtr g, Cocycle2 c) {
    if (c.groupoid_ptr() != g)
        throw std::invalid_argument("make_algebra: cocycle lives on a different groupoid");
    return std::make_shared<TwistedAlgebra>(TwistedAlgebra{std::move(g), std::move(c)});
}

class AlgebraElement {
public:
    AlgebraElement() = default;
    explicit AlgebraElement(AlgebraPtr alg) : alg_(std::move(alg)) {}

    const TwistedAlgebra& algebra() const { return *alg_; }
    AlgebraPtr algebra_ptr() const { return alg_; }

    // ordered map keeps every downstream iteration deterministic
    const std::map<int, Complex>& coeffs() const { return coeffs_; }

    Complex at(int a) const {
        auto it = coeffs_.find(a);
        return it == coeffs_.end() ? Complex(0.0) : it->second;
    }

    void add(int a, Complex z) {
        if (z == Complex(0.0)) return;
        auto [it, fresh] = coeffs_.emplace(a, z);
        if (!fresh) {
            it->second += z;
            if (it->second == Complex(0.0)) coeffs_.erase(it);
        }
    }

    AlgebraElement operator+(const AlgebraElement& o) const {
        AlgebraElement out = *this;
        for (auto [a, z] : o.coeffs_) out.add(a, z);
        return out;
    }
    AlgebraElement operator-(const AlgebraElement& o) const {
        AlgebraElement out = *this;
        for (auto [a, z] : o.coeffs_) out.add(a, -z);
        return out;
    }
    friend AlgebraElement operator*(Complex z, const AlgebraElement& f) {
        AlgebraElement out(f.alg_);
        for (auto [a, w] : f.coeffs_) out.add(a, z * w);
        return out;
    }

private:
    AlgebraPtr alg_;
    std::map<int, Complex> coeffs_;
};

inline AlgebraElement delta(AlgebraPtr alg, int arrow, Complex coeff = 1.0) {
    if (arrow < 0 || arrow >= alg->g->num_arrows())
        throw std::invalid_argument("delta: dangling arrow");
    AlgebraElement f(std::move(alg));
    f.add(arrow, coeff);
    return f;
}

/// (f * g)(gamma) = sum over alpha beta = gamma of
/// f(alpha) g(beta) embed(c(alpha,beta)).
inline AlgebraElement convolve(const AlgebraElement& f, const AlgebraElement& g) {
    if (f.algebra_ptr() != g.algebra_ptr())
        throw std::invalid_argument("convolve: mismatched algebras");
    const TwistedAlgebra& alg = f.algebra();
    AlgebraElement out(f.algebra_ptr());
    for (auto [a, za] : f.coeffs())
        for (auto [b, zb] : g.coeffs()) {
            if (!alg.g->composable(a, b)) continue;
            out.add(alg.g->comp(a, b), za * zb * alg.c.at(a, b).embed());
        }
    return out;
}

/// f*(gamma) = conj(f(gamma^-1) embed(c(gamma, gamma^-1))).
inline AlgebraElement involution(const AlgebraElement& f) {
    const TwistedAlgebra& alg = f.algebra();
    AlgebraElement out(f.algebra_ptr());
    for (auto [a, z] : f.coeffs()) {
        const int ai = alg.g->inv(a);
        out.add(ai, std::conj(z * alg.c.at(a, ai).embed()));
    }
    return out;
}

inline double sup_norm(const AlgebraElement& f) {
    double m = 0.0;
    for (auto [a, z] : f.coeffs()) m = std::max(m, std::abs(z));
    return m;
}

// ---------------------------------------------------------------------------
// Regular representations and the reduced norm

struct RepMatrix {
    int unit = -1;
    std::vector<int> basis;  // the arrows with source = unit, ascending
    Eigen::MatrixXcd entries;
};

/// pi_u(f) on l2(Gu), entry [gamma, alpha] = f(gamma alpha^-1) *
/// embed(c(gamma alpha^-1, alpha)).  The cocycle factor placement is the
/// unique one that makes pi_u(delta_a * delta_b) = pi_u(delta_a) pi_u(delta_b)
/// hold exactly; the unit tests pin it down.
inline RepMatrix regular_rep(const AlgebraElement& f, int u) {
    const TwistedAlgebra& alg = f.algebra();
    const FiniteGroupoid& g = *alg.g;
    if (u < 0 || u >= g.num_units())
        throw std::invalid_argument("regular_rep: unknown unit");
    RepMatrix rep;
    rep.unit = u;
    for (int a = 0; a < g.num_arrows(); ++a)
        if (g.src(a) == u) rep.basis.push_back(a);
    const int d = static_cast<int>(rep.basis.size());
    rep.entries = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        const int gamma = rep.basis[i];
        for (int j = 0; j < d; ++j) {
            const int alpha = rep.basis[j];
            const int ga = g.comp(gamma, g.inv(alpha));  // s(gamma)=s(alpha)=u
            const Complex z = f.at(ga);
            if (z != Complex(0.0))
                rep.entries(i, j) = z * alg.c.at(ga, alpha).embed();
        }
    }
    return rep;
}

/// Largest singular value via the Hermitian eigenproblem of M^dagger M.
inline double operator_norm(const Eigen::MatrixXcd& m) {
    if (m.rows() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m.adjoint() * m);
    const double top = es.eigenvalues().maxCoeff();
    return top <= 0.0 ? 0.0 : std::sqrt(top);
}

/// sup over units of || pi_u(f) ||.
inline double reduced_norm(const AlgebraElement& f) {
    double m = 0.0;
    for (int u = 0; u < f.algebra().g->num_units(); ++u)
        m = std::max(m, operator_norm(regular_rep(f, u).entries));
    return m;
}

/// Support is a bisection iff it meets each source fiber and each range
/// fiber at most once.
inline bool support_is_bisection(const AlgebraElement& f) {
    const FiniteGroupoid& g = *f.algebra().g;
    std::vector<char> bysrc(g.num_units(), 0), byrng(g.num_units(), 0);
    for (auto [a, z] : f.coeffs()) {
        if (bysrc[g.src(a)] || byrng[g.rng(a)]) return false;
        bysrc[g.src(a)] = 1;
        byrng[g.rng(a)] = 1;
    }
    return true;
}

/// For bisection-supported f, the sup norm and the reduced norm agree
/// (and for finite groupoids the full norm is the reduced one).
inline Report bisection_norm_check(const AlgebraElement& f, double tol = 1e-9) {
    if (!support_is_bisection(f))
        throw std::invalid_argument("bisection_norm_check: support is not a bisection");
    Report rep;
    const double sup = sup_norm(f), red = reduced_norm(f);
    if (std::abs(sup - red) > tol * std::max(1.0, sup))
        rep.add("bisection-norm",
                "sup=" + std::to_string(sup) + " reduced=" + std::to_string(red));
    return rep;
}

// ---------------------------------------------------------------------------
// Center (exact)

struct CenterResult {
    int dimension = 0;
    std::vector<AlgebraElement> basis;
};

namespace detail {

/// Union-find over arrows with a Phase potential on every edge, recording
/// relations f(x) = embed(p) f(y).  A component becomes "zero" when its
/// relations are inconsistent or an explicit zero constraint hits it.
class PhaseUnionFind {
public:
    explicit PhaseUnionFind(int n) : parent_(n), pot_(n), zero_(n, 0) {
        for (int i = 0; i < n; ++i) parent_[i] = i;
    }

    int find(int x, Phase& acc) {
        Phase p;
        int r = x;
        while (parent_[r] != r) {
            p += pot_[r];
            r = parent_[r];
        }
        // path compression
        int c = x;
        Phase q = p;
        while (parent_[c] != r) {
            const int nxt = parent_[c];
            const Phase save = pot_[c];
            parent_[c] = r;
            pot_[c] = q;
            q -= save;
            c = nxt;
        }
        acc = p;
        return r;
    }

    /// impose f(x) = embed(w) f(y)
    void relate(int x, int y, Phase w) {
        Phase px, py;
        const int rx = find(x, px), ry = find(y, py);
        if (rx == ry) {
            if (px != w + py) zero_[rx] = 1;
            return;
        }
        parent_[ry] = rx;
        pot_[ry] = px - w - py;
        if (zero_[ry]) zero_[rx] = 1;
    }

    void force_zero(int x) {
        Phase p;
        zero_[find(x, p)] = 1;
    }

    bool is_zero_root(int r) const { return zero_[r] != 0; }

private:
    std::vector<int> parent_;
    std::vector<Phase> pot_;
    std::vector<char> zero_;
};

}  // namespace detail

/// Exact center computation.  Centrality of f against every delta_a couples
/// at most two coefficients per equation (f(a^-1 gamma) and f(gamma a^-1)),
/// each with a unit-phase coefficient, so the whole linear system is a
/// phase-labelled graph: components that stay consistent and unforced give
/// one center dimension each.
inline CenterResult center(const AlgebraPtr& alg) {
    const FiniteGroupoid& g = *alg->g;
    const Cocycle2& c = alg->c;
    const int n = g.num_arrows();
    detail::PhaseUnionFind uf(n);
    for (int a = 0; a < n; ++a)
        for (int gamma = 0; gamma < n; ++gamma) {
            const bool left_ok = g.rng(gamma) == g.rng(a);    // a^-1 gamma exists
            const bool right_ok = g.src(gamma) == g.src(a);   // gamma a^-1 exists
            if (left_ok && right_ok) {
                const int x = g.comp(g.inv(a), gamma);
                const int y = g.comp(gamma, g.inv(a));
                // embed(c(a,x)) f(x) = embed(c(y,a)) f(y)
                uf.relate(x, y, c.at(y, a) - c.at(a, x));
            } else if (left_ok) {
                uf.force_zero(g.comp(g.inv(a), gamma));
            } else if (right_ok) {
                uf.force_zero(g.comp(gamma, g.inv(a)));
            }
        }
    CenterResult res;
    std::map<int, AlgebraElement> by_root;
    for (int x = 0; x < n; ++x) {
        Phase p;
        const int r = uf.find(x, p);
        if (uf.is_zero_root(r)) continue;
        auto [it, fresh] = by_root.try_emplace(r, AlgebraElement(alg));
        it->second.add(x, p.embed());
    }
    for (auto& [r, f] : by_root) res.basis.push_back(std::move(f));
    res.dimension = static_cast<int>(res.basis.size());
    return res;
}

// ---------------------------------------------------------------------------
// Factor inclusions and the blend check

/// The restriction of a product cocycle to an embedded factor.
inline Cocycle2 restrict_cocycle(const ZsProductGroupoid& P, const Cocycle2& c, int which) {
    const auto& embed = which == 1 ? P.embed1 : P.embed2;
    const FiniteGroupoid& gi = which == 1 ? P.mp.g1() : P.mp.g2();
    const GroupoidPtr gp = which == 1 ? P.mp.g1_ptr() : P.mp.g2_ptr();
    Cocycle2 ci(gp);
    for (int a = 0; a < gi.num_arrows(); ++a)
        for (int b = 0; b < gi.num_arrows(); ++b)
            if (gi.composable(a, b)) ci.set(a, b, c.at(embed[a], embed[b]));
    return ci;
}

/// Extend-by-zero inclusion of C(G_i, c_i) into the product algebra.
/// Checks that the product cocycle restricts to the factor's cocycle.
inline AlgebraElement include_factor(const ZsProductGroupoid& P, int which,
                                     const AlgebraElement& f, const AlgebraPtr& target) {
    if (target->g != P.base)
        throw std::invalid_argument("include_factor: target is not the product algebra");
    const auto& embed = which == 1 ? P.embed1 : P.embed2;
    const FiniteGroupoid& gi = which == 1 ? P.mp.g1() : P.mp.g2();
    const Cocycle2& ci = f.algebra().c;
    if (f.algebra().g.get() != &gi)
        throw std::invalid_argument("include_factor: element not on factor " +
                                    std::to_string(which));
    for (int a = 0; a < gi.num_arrows(); ++a)
        for (int b = 0; b < gi.num_arrows(); ++b)
            if (gi.composable(a, b) &&
                target->c.at(embed[a], embed[b]) != ci.at(a, b))
                throw std::invalid_argument("include_factor: cocycle restriction mismatch");
    AlgebraElement out(target);
    for (auto [a, z] : f.coeffs()) out.add(embed[a], z);
    return out;
}

struct BlendReport {
    bool spanning = false;
    int rank = 0;
    int expected_rank = 0;
    bool austere = false;
    std::string rank_path;  // "exact" or "numeric"
};

namespace detail {

/// Exact rank over Z[i] by fraction-free (Bareiss) elimination; usable
/// when every entry is a Gaussian integer.
inline int rank_gaussian_exact(std::vector<std::vector<std::complex<long long>>> m) {
    using GI = std::complex<long long>;
    const int rows = static_cast<int>(m.size());
    if (rows == 0) return 0;
    const int cols = static_cast<int>(m[0].size());
    int rank = 0;
    GI prev(1, 0);
    for (int col = 0; col < cols && rank < rows; ++col) {
        int piv = -1;
        for (int r = rank; r < rows; ++r)
            if (m[r][col] != GI(0, 0)) { piv = r; break; }
        if (piv < 0) continue;
        std::swap(m[rank], m[piv]);
        for (int r = rank + 1; r < rows; ++r) {
            for (int cc = col + 1; cc < cols; ++cc) {
                const GI num = m[rank][col] * m[r][cc] - m[r][col] * m[rank][cc];
                // exact division by the previous pivot (Bareiss)
                const long long nrm = prev.real() * prev.real() + prev.imag() * prev.imag();
                const GI q = num * std::conj(prev);
                m[r][cc] = GI(q.real() / nrm, q.imag() / nrm);
            }
            m[r][col] = GI(0, 0);
        }
        prev = m[rank][col];
        ++rank;
    }
    return rank;
}

}  // namespace detail

/// Rank of the span of iota1(delta_x) * iota2(delta_g) over the given
/// (x, g) set.  Exact over Z[i] when every occurring phase is a fourth
/// root of unity; numeric (threshold 1e-9) otherwise.
inline std::pair<int, std::string> blend_rank(const ZsProductGroupoid& P,
                                              const AlgebraPtr& alg,
                                              const std::vector<std::pair<int, int>>& prods) {
    const int n = P.base->num_arrows();
    std::vector<std::pair<int, Phase>> vecs;  // each product is phase * delta_arrow
    bool exact_ok = true;
    const AlgebraPtr alg1 = make_algebra(P.mp.g1_ptr(), restrict_cocycle(P, alg->c, 1));
    const AlgebraPtr alg2 = make_algebra(P.mp.g2_ptr(), restrict_cocycle(P, alg->c, 2));
    for (auto [x, g] : prods) {
        const AlgebraElement p =
            convolve(include_factor(P, 1, delta(alg1, x), alg),
                     include_factor(P, 2, delta(alg2, g), alg));
        if (p.coeffs().empty()) continue;
        if (p.coeffs().size() != 1)
            throw internal_error("blend_rank: factor product is not a monomial");
        const auto [arrow, z] = *p.coeffs().begin();
        // recover the phase exactly from the cocycle
        const Phase ph = alg->c.at(P.embed1[x], P.embed2[g]);
        if (std::abs(z - ph.embed()) > 1e-9)
            throw internal_error("blend_rank: phase mismatch");
        if (ph.den() != 1 && ph.den() != 2 && ph.den() != 4) exact_ok = false;
        vecs.emplace_back(arrow, ph);
    }
    if (exact_ok) {
        std::vector<std::vector<std::complex<long long>>> m;
        for (auto [arrow, ph] : vecs) {
            std::vector<std::complex<long long>> row(n, {0, 0});
            static const std::complex<long long> roots[4] = {
                {1, 0}, {0, 1}, {-1, 0}, {0, -1}};
            row[arrow] = roots[(ph.num() * (4 / ph.den())) % 4];
            m.push_back(std::move(row));
        }
        return {detail::rank_gaussian_exact(std::move(m)), "exact"};
    }
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<int>(vecs.size()), n);
    for (int i = 0; i < static_cast<int>(vecs.size()); ++i)
        m(i, vecs[i].first) = vecs[i].second.embed();
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(m);
    qr.setThreshold(1e-9);
    return {static_cast<int>(qr.rank()), "numeric"};
}

/// The finite-scale blend statement: the pairwise products of the two
/// included factors span the whole algebra, and both inclusions are
/// injective *-homomorphisms.
inline BlendReport blend_check(const ZsProductGroupoid& P, const AlgebraPtr& alg) {
    BlendReport rep;
    std::vector<std::pair<int, int>> prods;
    for (int x = 0; x < P.mp.g1().num_arrows(); ++x)
        for (int g = 0; g < P.mp.g2().num_arrows(); ++g) prods.emplace_back(x, g);
    auto [rank, path] = blend_rank(P, alg, prods);
    rep.rank = rank;
    rep.rank_path = path;
    rep.expected_rank = P.base->num_arrows();
    rep.spanning = rank == rep.expected_rank;
    // extend-by-zero along an injective embedding is injective; include_factor
    // has already verified the cocycle restrictions, so austerity holds by
    // construction once both embeddings are checked injective.
    std::vector<char> seen(P.base->num_arrows(), 0);
    rep.austere = true;
    for (int a : P.embed1) {
        if (seen[a]) rep.austere = false;
        seen[a] = 1;
    }
    std::fill(seen.begin(), seen.end(), 0);
    for (int a : P.embed2) {
        if (seen[a]) rep.austere = false;
        seen[a] = 1;
    }
    return rep;
}

}  // namespace bowtie

#endif
