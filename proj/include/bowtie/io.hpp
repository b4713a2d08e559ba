#ifndef BOWTIE_IO_HPP
#define BOWTIE_IO_HPP

#include <array>
#include <cstdint>
#include <fstream>
#include <tuple>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bowtie/algebra.hpp"
#include "bowtie/cocycle.hpp"
#include "bowtie/groupoid.hpp"
#include "bowtie/matched_pair.hpp"

namespace bowtie {

/// Syntax or schema error in a bundle file; carries 1-based position.
class parse_error : public std::runtime_error {
public:
    parse_error(int line, int col, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ", col " +
                             std::to_string(col) + ": " + what),
          line(line),
          col(col) {}
    int line, col;
};

/// Everything a bundle file can describe.  Sections are optional; the
/// parser validates whatever is present (groupoid laws, action domains,
/// cocycle table shape) and leaves deeper law checking to the caller.
///
/// Format: line-oriented sections.
///   [groupoid]            starts the next groupoid (first = g1, second = g2)
///     units N
///     arrow ID SRC RNG    one per arrow, IDs dense from 0
///     unit U ARROW
///     inv A B
///     comp A B AB         one per composable pair
///   [actions]             requires two groupoids; g from g2, x from g1
///     act G X LEFT RIGHT
///   [cocycle]             on the most recent groupoid
///     entry A B NUM DEN   omitted composable pairs default to phase 0
///   [connecting]          requires [actions]
///     entry G X NUM DEN
///   [element]             on the most recent groupoid + cocycle
///     coeff ARROW RE IM
/// '#' starts a comment; blank lines are ignored.
struct Bundle {
    std::vector<GroupoidPtr> groupoids;
    std::optional<MatchedPair> mp;
    std::vector<Cocycle2> cocycles;
    std::optional<ConnectingMap> phi;
    std::vector<AlgebraElement> elements;
};

namespace detail {

struct RawGroupoid {
    int units = -1;
    std::vector<std::array<int, 3>> arrows;      // id src rng
    std::vector<std::pair<int, int>> unit_rows;  // unit, arrow
    std::vector<std::pair<int, int>> inv_rows;
    std::vector<std::array<int, 3>> comp_rows;
    int decl_line = 0;
};

inline GroupoidPtr finish_groupoid(const RawGroupoid& raw) {
    const int line = raw.decl_line;
    if (raw.units < 0) throw parse_error(line, 1, "[groupoid] missing 'units'");
    const int n = static_cast<int>(raw.arrows.size());
    std::vector<int> src(n, -1), rng(n, -1), unit(raw.units, -1), inv(n, -1);
    std::vector<int> comp(static_cast<std::size_t>(n) * n, -1);
    std::vector<char> seen(n, 0);
    for (const auto& [id, s, r] : raw.arrows) {
        if (id < 0 || id >= n || seen[id])
            throw parse_error(line, 1, "arrow id " + std::to_string(id) +
                                           " out of range or repeated");
        seen[id] = 1;
        src[id] = s;
        rng[id] = r;
    }
    auto need_arrow = [&](int a, const char* what) {
        if (a < 0 || a >= n)
            throw parse_error(line, 1, std::string(what) + ": dangling arrow id " +
                                           std::to_string(a));
    };
    for (auto [u, a] : raw.unit_rows) {
        need_arrow(a, "unit");
        if (u < 0 || u >= raw.units)
            throw parse_error(line, 1, "unit id " + std::to_string(u) + " out of range");
        unit[u] = a;
    }
    for (int u = 0; u < raw.units; ++u)
        if (unit[u] < 0)
            throw parse_error(line, 1, "unit " + std::to_string(u) + " has no unit arrow");
    for (auto [a, b] : raw.inv_rows) {
        need_arrow(a, "inv");
        need_arrow(b, "inv");
        inv[a] = b;
    }
    for (int a = 0; a < n; ++a)
        if (inv[a] < 0)
            throw parse_error(line, 1, "arrow " + std::to_string(a) + " has no inverse row");
    for (const auto& [a, b, ab] : raw.comp_rows) {
        need_arrow(a, "comp");
        need_arrow(b, "comp");
        need_arrow(ab, "comp");
        comp[a * n + b] = ab;
    }
    auto g = std::make_shared<FiniteGroupoid>(raw.units, src, rng, unit, inv, comp);
    const Report rep = validate_groupoid(*g);
    if (!rep.ok())
        throw parse_error(line, 1, "groupoid invalid: " + rep.violations[0].law + " at " +
                                       rep.violations[0].witness);
    return g;
}

}  // namespace detail

inline Bundle parse_bundle(std::istream& in) {
    Bundle bundle;
    std::optional<detail::RawGroupoid> raw;
    std::vector<std::array<int, 4>> action_rows;
    std::vector<std::array<std::int64_t, 4>> cocycle_rows, connecting_rows;
    std::vector<std::tuple<int, double, double>> coeff_rows;
    int actions_line = 0, cocycle_line = 0, connecting_line = 0, element_line = 0;
    std::string section;

    auto flush_groupoid = [&]() {
        if (raw) {
            bundle.groupoids.push_back(detail::finish_groupoid(*raw));
            raw.reset();
        }
    };
    auto finish_actions = [&]() {
        if (section != "actions") return;
        if (bundle.groupoids.size() < 2)
            throw parse_error(actions_line, 1, "[actions] needs two groupoids");
        const GroupoidPtr g1 = bundle.groupoids[0], g2 = bundle.groupoids[1];
        const int n1 = g1->num_arrows(), n2 = g2->num_arrows();
        std::vector<int> left(static_cast<std::size_t>(n2) * n1, -1), right(left);
        for (auto [g, x, l, r] : action_rows) {
            if (g < 0 || g >= n2 || x < 0 || x >= n1)
                throw parse_error(actions_line, 1, "act row out of range");
            left[g * n1 + x] = l;
            right[g * n1 + x] = r;
        }
        bundle.mp = MatchedPair(g1, g2, std::move(left), std::move(right));
        const Report rep = validate_matched_pair(*bundle.mp);
        if (!rep.ok())
            throw parse_error(actions_line, 1,
                              "actions invalid: " + rep.violations[0].law + " at " +
                                  rep.violations[0].witness);
        action_rows.clear();
    };
    auto finish_cocycle = [&]() {
        if (section != "cocycle") return;
        if (bundle.groupoids.empty())
            throw parse_error(cocycle_line, 1, "[cocycle] needs a groupoid first");
        const GroupoidPtr g = bundle.groupoids.back();
        Cocycle2 c(g);
        for (auto [a, b, num, den] : cocycle_rows) {
            if (a < 0 || a >= g->num_arrows() || b < 0 || b >= g->num_arrows())
                throw parse_error(cocycle_line, 1, "cocycle entry out of range");
            if (den == 0) throw parse_error(cocycle_line, 1, "zero denominator");
            c.set(static_cast<int>(a), static_cast<int>(b), Phase(num, den));
        }
        const Report rep = validate_cocycle(c);
        if (!rep.ok())
            throw parse_error(cocycle_line, 1,
                              "cocycle invalid: " + rep.violations[0].law + " at " +
                                  rep.violations[0].witness);
        bundle.cocycles.push_back(std::move(c));
        cocycle_rows.clear();
    };
    auto finish_connecting = [&]() {
        if (section != "connecting") return;
        if (!bundle.mp)
            throw parse_error(connecting_line, 1, "[connecting] needs [actions] first");
        ConnectingMap phi(*bundle.mp);
        const int n1 = bundle.mp->g1().num_arrows(), n2 = bundle.mp->g2().num_arrows();
        for (auto [g, x, num, den] : connecting_rows) {
            if (g < 0 || g >= n2 || x < 0 || x >= n1)
                throw parse_error(connecting_line, 1, "connecting entry out of range");
            if (den == 0) throw parse_error(connecting_line, 1, "zero denominator");
            phi.set(static_cast<int>(g), static_cast<int>(x), Phase(num, den));
        }
        bundle.phi = std::move(phi);
        connecting_rows.clear();
    };
    auto finish_element = [&]() {
        if (section != "element") return;
        if (bundle.groupoids.empty())
            throw parse_error(element_line, 1, "[element] needs a groupoid first");
        const GroupoidPtr g = bundle.groupoids.back();
        Cocycle2 c = bundle.cocycles.empty() ? trivial_cocycle(g) : bundle.cocycles.back();
        if (c.groupoid_ptr() != g) c = trivial_cocycle(g);
        AlgebraElement f(make_algebra(g, std::move(c)));
        for (auto [a, re, im] : coeff_rows) {
            if (a < 0 || a >= g->num_arrows())
                throw parse_error(element_line, 1,
                                  "coeff: dangling arrow id " + std::to_string(a));
            f.add(a, Complex(re, im));
        }
        bundle.elements.push_back(std::move(f));
        coeff_rows.clear();
    };
    auto finish_section = [&]() {
        finish_actions();
        finish_cocycle();
        finish_connecting();
        finish_element();
    };

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;

        if (tok.front() == '[') {
            if (tok.back() != ']')
                throw parse_error(lineno, 1, "malformed section header " + tok);
            finish_section();
            section = tok.substr(1, tok.size() - 2);
            if (section == "groupoid") {
                flush_groupoid();
                raw.emplace();
                raw->decl_line = lineno;
            } else if (section == "actions") {
                flush_groupoid();
                actions_line = lineno;
            } else if (section == "cocycle") {
                flush_groupoid();
                cocycle_line = lineno;
            } else if (section == "connecting") {
                flush_groupoid();
                connecting_line = lineno;
            } else if (section == "element") {
                flush_groupoid();
                element_line = lineno;
            } else {
                throw parse_error(lineno, 1, "unknown section [" + section + "]");
            }
            continue;
        }

        const int col = static_cast<int>(line.find(tok)) + 1;
        auto ints = [&](int k) {
            std::vector<std::int64_t> out(k);
            for (int i = 0; i < k; ++i)
                if (!(ls >> out[i]))
                    throw parse_error(lineno, col,
                                      tok + " expects " + std::to_string(k) + " integers");
            std::string extra;
            if (ls >> extra)
                throw parse_error(lineno, col, "trailing tokens after " + tok);
            return out;
        };

        if (section == "groupoid") {
            if (tok == "units") {
                raw->units = static_cast<int>(ints(1)[0]);
            } else if (tok == "arrow") {
                auto v = ints(3);
                raw->arrows.push_back({static_cast<int>(v[0]), static_cast<int>(v[1]),
                                       static_cast<int>(v[2])});
            } else if (tok == "unit") {
                auto v = ints(2);
                raw->unit_rows.emplace_back(static_cast<int>(v[0]), static_cast<int>(v[1]));
            } else if (tok == "inv") {
                auto v = ints(2);
                raw->inv_rows.emplace_back(static_cast<int>(v[0]), static_cast<int>(v[1]));
            } else if (tok == "comp") {
                auto v = ints(3);
                raw->comp_rows.push_back({static_cast<int>(v[0]), static_cast<int>(v[1]),
                                          static_cast<int>(v[2])});
            } else {
                throw parse_error(lineno, col, "unknown key '" + tok + "' in [groupoid]");
            }
        } else if (section == "actions" && tok == "act") {
            auto v = ints(4);
            action_rows.push_back({static_cast<int>(v[0]), static_cast<int>(v[1]),
                                   static_cast<int>(v[2]), static_cast<int>(v[3])});
        } else if (section == "cocycle" && tok == "entry") {
            auto v = ints(4);
            cocycle_rows.push_back({v[0], v[1], v[2], v[3]});
        } else if (section == "connecting" && tok == "entry") {
            auto v = ints(4);
            connecting_rows.push_back({v[0], v[1], v[2], v[3]});
        } else if (section == "element" && tok == "coeff") {
            std::int64_t a;
            double re, im;
            if (!(ls >> a >> re >> im))
                throw parse_error(lineno, col, "coeff expects: arrow re im");
            coeff_rows.emplace_back(static_cast<int>(a), re, im);
        } else if (section.empty()) {
            throw parse_error(lineno, col, "data before any section header");
        } else {
            throw parse_error(lineno, col,
                              "unknown key '" + tok + "' in [" + section + "]");
        }
    }
    finish_section();
    flush_groupoid();
    return bundle;
}

inline Bundle parse_bundle_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error(0, 0, "cannot open " + path);
    return parse_bundle(in);
}

// ---------------------------------------------------------------------------
// Writers (used to ship example bundles and for reproducible reports)

inline void write_groupoid(std::ostream& out, const FiniteGroupoid& g) {
    out << "[groupoid]\n";
    out << "units " << g.num_units() << "\n";
    for (int a = 0; a < g.num_arrows(); ++a)
        out << "arrow " << a << " " << g.src(a) << " " << g.rng(a) << "\n";
    for (int u = 0; u < g.num_units(); ++u)
        out << "unit " << u << " " << g.unit_arrow(u) << "\n";
    for (int a = 0; a < g.num_arrows(); ++a)
        out << "inv " << a << " " << g.inv(a) << "\n";
    for (int a = 0; a < g.num_arrows(); ++a)
        for (int b = 0; b < g.num_arrows(); ++b)
            if (g.composable(a, b))
                out << "comp " << a << " " << b << " " << g.comp(a, b) << "\n";
}

inline void write_actions(std::ostream& out, const MatchedPair& mp) {
    out << "[actions]\n";
    for (int g = 0; g < mp.g2().num_arrows(); ++g)
        for (int x = 0; x < mp.g1().num_arrows(); ++x)
            if (mp.in_domain(g, x))
                out << "act " << g << " " << x << " " << mp.left(g, x) << " "
                    << mp.right(g, x) << "\n";
}

inline void write_cocycle(std::ostream& out, const Cocycle2& c) {
    out << "[cocycle]\n";
    const FiniteGroupoid& g = c.groupoid();
    for (int a = 0; a < g.num_arrows(); ++a)
        for (int b = 0; b < g.num_arrows(); ++b)
            if (g.composable(a, b) && !c.at(a, b).is_zero())
                out << "entry " << a << " " << b << " " << c.at(a, b).num() << " "
                    << c.at(a, b).den() << "\n";
}

inline void write_connecting(std::ostream& out, const ConnectingMap& phi) {
    out << "[connecting]\n";
    const MatchedPair& mp = phi.pair();
    for (int g = 0; g < mp.g2().num_arrows(); ++g)
        for (int x = 0; x < mp.g1().num_arrows(); ++x)
            if (mp.in_domain(g, x) && !phi.at(g, x).is_zero())
                out << "entry " << g << " " << x << " " << phi.at(g, x).num() << " "
                    << phi.at(g, x).den() << "\n";
}

}  // namespace bowtie

#endif
