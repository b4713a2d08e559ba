#ifndef BOWTIE_GROUPOID_HPP
#define BOWTIE_GROUPOID_HPP

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bowtie/report.hpp"

namespace bowtie {

/// A finite discrete groupoid, fully enumerated: every arrow, the whole
/// partial composition table, and the inverse table.  Units are dense
/// 0..k-1 and every unit is identified with its unit arrow.
///
/// Composition convention: comp(a,b) is defined iff s(a) == r(b), and then
/// r(ab) = r(a), s(ab) = s(b).
class FiniteGroupoid {
public:
    FiniteGroupoid() = default;

    FiniteGroupoid(int units, std::vector<int> src, std::vector<int> rng,
                   std::vector<int> unit_arrow, std::vector<int> inv,
                   std::vector<int> comp)
        : units_(units),
          src_(std::move(src)),
          rng_(std::move(rng)),
          unit_arrow_(std::move(unit_arrow)),
          inv_(std::move(inv)),
          comp_(std::move(comp)) {}

    int num_units() const { return units_; }
    int num_arrows() const { return static_cast<int>(src_.size()); }

    int src(int a) const { return src_[a]; }
    int rng(int a) const { return rng_[a]; }
    int unit_arrow(int u) const { return unit_arrow_[u]; }
    int inv(int a) const { return inv_[a]; }

    bool is_unit_arrow(int a) const {
        return src_[a] == rng_[a] && unit_arrow_[src_[a]] == a;
    }

    bool composable(int a, int b) const { return src_[a] == rng_[b]; }

    /// Composition ab; only meaningful when composable(a,b).
    int comp(int a, int b) const { return comp_[a * num_arrows() + b]; }

    /// Raw table access for validation (may be -1 or inconsistent before
    /// validate_groupoid has been run).
    int comp_raw(int a, int b) const { return comp_[a * num_arrows() + b]; }

private:
    int units_ = 0;
    std::vector<int> src_, rng_;
    std::vector<int> unit_arrow_;
    std::vector<int> inv_;
    std::vector<int> comp_;  // flat num_arrows x num_arrows, -1 = undefined
};

using GroupoidPtr = std::shared_ptr<const FiniteGroupoid>;

namespace detail {
inline std::string arrow_name(int a) { return "#" + std::to_string(a); }
}  // namespace detail

/// Checks every groupoid law on the full tables.  Structural errors
/// (dangling ids, wrong table sizes) are reported with law "structure"
/// and short-circuit the algebraic checks they would break.
inline Report validate_groupoid(const FiniteGroupoid& g) {
    Report rep;
    const int n = g.num_arrows();
    const int k = g.num_units();

    for (int a = 0; a < n; ++a) {
        if (g.src(a) < 0 || g.src(a) >= k || g.rng(a) < 0 || g.rng(a) >= k)
            rep.add("structure", "arrow " + detail::arrow_name(a) + " has dangling unit");
        if (g.inv(a) < 0 || g.inv(a) >= n)
            rep.add("structure", "inv of " + detail::arrow_name(a) + " dangling");
    }
    for (int u = 0; u < k; ++u) {
        const int e = g.unit_arrow(u);
        if (e < 0 || e >= n) {
            rep.add("structure", "unit " + std::to_string(u) + " has dangling unit arrow");
            continue;
        }
        if (g.src(e) != u || g.rng(e) != u)
            rep.add("unit-arrow-endpoints", "unit " + std::to_string(u));
    }
    if (!rep.ok()) return rep;

    // Domain of definition and endpoint behaviour of composition.
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const int ab = g.comp_raw(a, b);
            if (g.composable(a, b)) {
                if (ab < 0 || ab >= n) {
                    rep.add("composition-domain",
                            detail::arrow_name(a) + "," + detail::arrow_name(b) + " undefined");
                    continue;
                }
                if (g.rng(ab) != g.rng(a) || g.src(ab) != g.src(b))
                    rep.add("composition-endpoints",
                            detail::arrow_name(a) + "," + detail::arrow_name(b));
            } else if (ab != -1) {
                rep.add("composition-domain",
                        detail::arrow_name(a) + "," + detail::arrow_name(b) +
                            " defined but not composable");
            }
        }
    if (!rep.ok()) return rep;

    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (!g.composable(a, b)) continue;
            for (int c = 0; c < n; ++c) {
                if (!g.composable(b, c)) continue;
                if (g.comp(g.comp(a, b), c) != g.comp(a, g.comp(b, c)))
                    rep.add("associativity", detail::arrow_name(a) + "," +
                                                 detail::arrow_name(b) + "," +
                                                 detail::arrow_name(c));
            }
        }

    for (int a = 0; a < n; ++a) {
        if (g.comp(g.unit_arrow(g.rng(a)), a) != a)
            rep.add("left-identity", detail::arrow_name(a));
        if (g.comp(a, g.unit_arrow(g.src(a))) != a)
            rep.add("right-identity", detail::arrow_name(a));
        const int ai = g.inv(a);
        if (g.src(ai) != g.rng(a) || g.rng(ai) != g.src(a)) {
            rep.add("inverse-endpoints", detail::arrow_name(a));
            continue;
        }
        if (g.comp(a, ai) != g.unit_arrow(g.rng(a)))
            rep.add("right-inverse", detail::arrow_name(a));
        if (g.comp(ai, a) != g.unit_arrow(g.src(a)))
            rep.add("left-inverse", detail::arrow_name(a));
    }
    return rep;
}

inline std::vector<int> isotropy(const FiniteGroupoid& g, int u) {
    if (u < 0 || u >= g.num_units())
        throw std::invalid_argument("isotropy: unknown unit");
    std::vector<int> out;
    for (int a = 0; a < g.num_arrows(); ++a)
        if (g.rng(a) == u && g.src(a) == u) out.push_back(a);
    return out;
}

inline bool is_principal(const FiniteGroupoid& g) {
    for (int u = 0; u < g.num_units(); ++u)
        if (isotropy(g, u).size() != 1) return false;
    return true;
}

/// In the discrete topology the interior of the isotropy bundle is the
/// bundle itself, so effectiveness coincides with principality.
inline bool is_effective(const FiniteGroupoid& g) { return is_principal(g); }

// ---------------------------------------------------------------------------
// Constructors

using GroupTable = std::vector<std::vector<int>>;

/// One-unit groupoid from a group multiplication table (table[i][j] = i*j).
inline FiniteGroupoid from_group(const GroupTable& table) {
    const int n = static_cast<int>(table.size());
    if (n == 0) throw std::invalid_argument("from_group: empty table");
    for (const auto& row : table)
        if (static_cast<int>(row.size()) != n)
            throw std::invalid_argument("from_group: ragged table");
    // locate the identity
    int e = -1;
    for (int i = 0; i < n; ++i) {
        bool id = true;
        for (int j = 0; j < n; ++j)
            if (table[i][j] != j || table[j][i] != j) { id = false; break; }
        if (id) { e = i; break; }
    }
    if (e < 0) throw std::invalid_argument("from_group: no identity element");
    std::vector<int> inv(n, -1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (table[i][j] == e) inv[i] = j;
    for (int i = 0; i < n; ++i)
        if (inv[i] < 0) throw std::invalid_argument("from_group: missing inverse");
    std::vector<int> src(n, 0), rng(n, 0), comp(n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) comp[i * n + j] = table[i][j];
    return FiniteGroupoid(1, src, rng, {e}, inv, comp);
}

inline GroupTable cyclic_group_table(int n) {
    GroupTable t(n, std::vector<int>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) t[i][j] = (i + j) % n;
    return t;
}

/// Pair groupoid on n points: arrows (i,j), r=(i), s=(j), id = i*n+j.
inline FiniteGroupoid pair_groupoid(int n) {
    if (n <= 0) throw std::invalid_argument("pair_groupoid: n must be positive");
    const int m = n * n;
    std::vector<int> src(m), rng(m), unit(n), inv(m), comp(m * m, -1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const int a = i * n + j;
            rng[a] = i;
            src[a] = j;
            inv[a] = j * n + i;
        }
    for (int i = 0; i < n; ++i) unit[i] = i * n + i;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k2 = 0; k2 < n; ++k2)
                comp[(i * n + j) * m + (j * n + k2)] = i * n + k2;
    return FiniteGroupoid(n, src, rng, unit, inv, comp);
}

inline FiniteGroupoid direct_union(const FiniteGroupoid& g, const FiniteGroupoid& h) {
    const int n1 = g.num_arrows(), n2 = h.num_arrows();
    const int k1 = g.num_units(), k2 = h.num_units();
    const int n = n1 + n2;
    std::vector<int> src(n), rng(n), unit(k1 + k2), inv(n), comp(n * n, -1);
    for (int a = 0; a < n1; ++a) {
        src[a] = g.src(a);
        rng[a] = g.rng(a);
        inv[a] = g.inv(a);
    }
    for (int a = 0; a < n2; ++a) {
        src[n1 + a] = k1 + h.src(a);
        rng[n1 + a] = k1 + h.rng(a);
        inv[n1 + a] = n1 + h.inv(a);
    }
    for (int u = 0; u < k1; ++u) unit[u] = g.unit_arrow(u);
    for (int u = 0; u < k2; ++u) unit[k1 + u] = n1 + h.unit_arrow(u);
    for (int a = 0; a < n1; ++a)
        for (int b = 0; b < n1; ++b)
            if (g.composable(a, b)) comp[a * n + b] = g.comp(a, b);
    for (int a = 0; a < n2; ++a)
        for (int b = 0; b < n2; ++b)
            if (h.composable(a, b)) comp[(n1 + a) * n + (n1 + b)] = n1 + h.comp(a, b);
    return FiniteGroupoid(k1 + k2, src, rng, unit, inv, comp);
}

/// Disjoint union of groups, one unit per group.
inline FiniteGroupoid group_bundle(const std::vector<GroupTable>& tables) {
    if (tables.empty()) throw std::invalid_argument("group_bundle: empty");
    FiniteGroupoid acc = from_group(tables[0]);
    for (std::size_t i = 1; i < tables.size(); ++i)
        acc = direct_union(acc, from_group(tables[i]));
    return acc;
}

/// Action groupoid of a group acting on {0..npoints-1}; action[i][x] = i.x.
/// Arrow (i, x) has source x and range i.x; (i, j.x)(j, x) = (ij, x).
inline FiniteGroupoid transformation_groupoid(const GroupTable& table,
                                              const std::vector<std::vector<int>>& action) {
    const int ord = static_cast<int>(table.size());
    if (action.size() != table.size())
        throw std::invalid_argument("transformation_groupoid: table/action size mismatch");
    const int np = action.empty() ? 0 : static_cast<int>(action[0].size());
    if (np == 0) throw std::invalid_argument("transformation_groupoid: empty point set");
    const FiniteGroupoid grp = from_group(table);  // validates group + finds inverses
    const int e = grp.unit_arrow(0);
    // check it is an action
    for (int x = 0; x < np; ++x) {
        if (action[e][x] != x)
            throw std::invalid_argument("transformation_groupoid: identity does not fix points");
        for (int i = 0; i < ord; ++i)
            for (int j = 0; j < ord; ++j)
                if (action[table[i][j]][x] != action[i][action[j][x]])
                    throw std::invalid_argument("transformation_groupoid: not an action");
    }
    const int n = ord * np;
    auto id = [np](int i, int x) { return i * np + x; };
    std::vector<int> src(n), rng(n), unit(np), inv(n), comp(n * n, -1);
    for (int i = 0; i < ord; ++i)
        for (int x = 0; x < np; ++x) {
            const int a = id(i, x);
            src[a] = x;
            rng[a] = action[i][x];
            inv[a] = id(grp.inv(i), action[i][x]);
        }
    for (int x = 0; x < np; ++x) unit[x] = id(e, x);
    for (int i = 0; i < ord; ++i)
        for (int j = 0; j < ord; ++j)
            for (int x = 0; x < np; ++x)
                comp[id(i, action[j][x]) * n + id(j, x)] = id(table[i][j], x);
    return FiniteGroupoid(np, src, rng, unit, inv, comp);
}

// ---------------------------------------------------------------------------
// Subgroupoids

struct SubgroupoidResult {
    bool ok = false;
    std::string error;
    FiniteGroupoid sub;
    std::vector<int> parent_arrow;  // sub arrow id -> parent arrow id
    std::vector<int> parent_unit;   // sub unit id -> parent unit id
};

/// Builds the subgroupoid on the given arrow ids.  Fails (with a witness)
/// unless the set contains the unit arrows of every unit it touches and is
/// closed under composition and inverse.
inline SubgroupoidResult subgroupoid(const FiniteGroupoid& g, std::vector<int> arrows) {
    SubgroupoidResult res;
    std::sort(arrows.begin(), arrows.end());
    arrows.erase(std::unique(arrows.begin(), arrows.end()), arrows.end());
    for (int a : arrows)
        if (a < 0 || a >= g.num_arrows()) {
            res.error = "dangling arrow id " + std::to_string(a);
            return res;
        }
    std::vector<int> sub_id(g.num_arrows(), -1);
    for (std::size_t i = 0; i < arrows.size(); ++i) sub_id[arrows[i]] = static_cast<int>(i);

    std::vector<int> touched_units;
    for (int a : arrows) {
        touched_units.push_back(g.src(a));
        touched_units.push_back(g.rng(a));
    }
    std::sort(touched_units.begin(), touched_units.end());
    touched_units.erase(std::unique(touched_units.begin(), touched_units.end()),
                        touched_units.end());
    for (int u : touched_units)
        if (sub_id[g.unit_arrow(u)] < 0) {
            res.error = "missing unit arrow of unit " + std::to_string(u);
            return res;
        }
    for (int a : arrows) {
        if (sub_id[g.inv(a)] < 0) {
            res.error = "not closed under inverse at " + detail::arrow_name(a);
            return res;
        }
        for (int b : arrows) {
            if (!g.composable(a, b)) continue;
            if (sub_id[g.comp(a, b)] < 0) {
                res.error = "not closed under composition at " + detail::arrow_name(a) +
                            "," + detail::arrow_name(b);
                return res;
            }
        }
    }

    std::vector<int> unit_of_parent(g.num_units(), -1);
    for (std::size_t i = 0; i < touched_units.size(); ++i)
        unit_of_parent[touched_units[i]] = static_cast<int>(i);
    const int n = static_cast<int>(arrows.size());
    const int k = static_cast<int>(touched_units.size());
    std::vector<int> src(n), rng(n), unit(k), inv(n), comp(n * n, -1);
    for (int i = 0; i < n; ++i) {
        const int a = arrows[i];
        src[i] = unit_of_parent[g.src(a)];
        rng[i] = unit_of_parent[g.rng(a)];
        inv[i] = sub_id[g.inv(a)];
    }
    for (int u = 0; u < k; ++u) unit[u] = sub_id[g.unit_arrow(touched_units[u])];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (g.composable(arrows[i], arrows[j]))
                comp[i * n + j] = sub_id[g.comp(arrows[i], arrows[j])];
    res.ok = true;
    res.sub = FiniteGroupoid(k, src, rng, unit, inv, comp);
    res.parent_arrow = arrows;
    res.parent_unit = touched_units;
    return res;
}

/// Generated subgroupoid: closure of the given arrows (plus the unit
/// arrows they touch) under composition and inverse.
inline SubgroupoidResult generated_subgroupoid(const FiniteGroupoid& g,
                                               std::vector<int> gens) {
    std::vector<char> in(g.num_arrows(), 0);
    std::vector<int> work = std::move(gens);
    for (int a : work) in[a] = 1;
    while (!work.empty()) {
        const int a = work.back();
        work.pop_back();
        auto push = [&](int b) {
            if (!in[b]) {
                in[b] = 1;
                work.push_back(b);
            }
        };
        push(g.inv(a));
        push(g.unit_arrow(g.src(a)));
        push(g.unit_arrow(g.rng(a)));
        for (int b = 0; b < g.num_arrows(); ++b) {
            if (!in[b]) continue;
            if (g.composable(a, b)) push(g.comp(a, b));
            if (g.composable(b, a)) push(g.comp(b, a));
        }
    }
    std::vector<int> arrows;
    for (int a = 0; a < g.num_arrows(); ++a)
        if (in[a]) arrows.push_back(a);
    return subgroupoid(g, arrows);
}

// ---------------------------------------------------------------------------
// Exhaustive isomorphism search

namespace detail {

inline bool extend_iso(const FiniteGroupoid& g, const FiniteGroupoid& h,
                       std::vector<int>& map, std::vector<char>& used, int next) {
    const int n = g.num_arrows();
    if (next == n) return true;
    const int a = next;
    for (int b = 0; b < n; ++b) {
        if (used[b]) continue;
        // unit arrows must go to unit arrows
        if (g.is_unit_arrow(a) != h.is_unit_arrow(b)) continue;
        // endpoints must be consistent with units already mapped
        const int su = g.unit_arrow(g.src(a)), ru = g.unit_arrow(g.rng(a));
        if (map[su] >= 0 && h.src(b) != h.src(map[su])) continue;
        if (map[ru] >= 0 && h.rng(b) != h.rng(map[ru])) continue;
        if (map[g.inv(a)] >= 0 && map[g.inv(a)] != h.inv(b)) continue;
        bool fine = true;
        for (int c = 0; c < n && fine; ++c) {
            if (map[c] < 0) continue;
            if (g.composable(a, c)) {
                if (!h.composable(b, map[c])) { fine = false; break; }
                const int ac = g.comp(a, c);
                if (map[ac] >= 0 && map[ac] != h.comp(b, map[c])) fine = false;
            } else if (h.composable(b, map[c])) {
                fine = false;
            }
            if (!fine) break;
            if (g.composable(c, a)) {
                if (!h.composable(map[c], b)) { fine = false; break; }
                const int ca = g.comp(c, a);
                if (map[ca] >= 0 && map[ca] != h.comp(map[c], b)) fine = false;
            } else if (h.composable(map[c], b)) {
                fine = false;
            }
        }
        if (!fine) continue;
        map[a] = b;
        used[b] = 1;
        if (extend_iso(g, h, map, used, next + 1)) return true;
        map[a] = -1;
        used[b] = 0;
    }
    return false;
}

}  // namespace detail

/// Exhaustive backtracking search for a unit-respecting, composition-
/// respecting arrow bijection.  "nullopt" is a proof of non-isomorphism
/// at this size.  Throws if either groupoid exceeds the cap.
inline std::optional<std::vector<int>> is_isomorphic_small(const FiniteGroupoid& g,
                                                           const FiniteGroupoid& h,
                                                           int cap = 64) {
    if (g.num_arrows() > cap || h.num_arrows() > cap)
        throw std::invalid_argument("is_isomorphic_small: size cap exceeded");
    if (g.num_arrows() != h.num_arrows() || g.num_units() != h.num_units())
        return std::nullopt;
    std::vector<int> map(g.num_arrows(), -1);
    std::vector<char> used(h.num_arrows(), 0);
    if (detail::extend_iso(g, h, map, used, 0)) return map;
    return std::nullopt;
}

}  // namespace bowtie

#endif
