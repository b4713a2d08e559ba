// Command-line driver: build catalog entries or parse bundle files, run
// the validators, and report in human or machine form.
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 usage/parse error,
// 3 internal assertion (a library bug, never a user error).

#include <CLI11.hpp>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <string>

#include "bowtie/algebra.hpp"
#include "bowtie/catalog.hpp"
#include "bowtie/cocycle.hpp"
#include "bowtie/groupoid.hpp"
#include "bowtie/io.hpp"
#include "bowtie/matched_pair.hpp"
#include "bowtie/selftest.hpp"

namespace {

struct Options {
    std::string input;
    std::string entry;
    std::vector<std::string> params;
    unsigned seed = 7;
    std::string format = "human";
    double tolerance = 1e-9;
};

std::map<std::string, int> parse_params(const std::vector<std::string>& kvs) {
    std::map<std::string, int> out;
    for (const std::string& kv : kvs) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw CLI::ValidationError("--param", "expected k=v, got " + kv);
        out[kv.substr(0, eq)] = std::stoi(kv.substr(eq + 1));
    }
    return out;
}

bool machine(const Options& o) { return o.format == "machine"; }

void kv(const Options& o, const std::string& key, const std::string& value,
        const std::string& human_label = "") {
    if (machine(o))
        std::cout << key << "=" << value << "\n";
    else
        std::cout << (human_label.empty() ? key : human_label) << ": " << value << "\n";
}

bowtie::BuiltEntry need_entry(const Options& o) {
    if (o.entry.empty()) throw CLI::ValidationError("--entry", "this command needs --entry");
    return bowtie::build_entry(o.entry, parse_params(o.params));
}

int report_result(const Options& o, const bowtie::Report& rep, const std::string& what) {
    if (rep.ok()) {
        kv(o, what, "ok");
        return 0;
    }
    kv(o, what, "fail");
    for (const auto& v : rep.violations)
        if (machine(o))
            std::cout << "violation=" << v.law << " witness=" << v.witness << "\n";
        else
            std::cout << "  " << v.law << " at " << v.witness << "\n";
    return 1;
}

int cmd_validate(const Options& o) {
    if (!o.input.empty()) {
        const bowtie::Bundle b = bowtie::parse_bundle_file(o.input);
        // parse_bundle already validates every section it accepts
        kv(o, "groupoids", std::to_string(b.groupoids.size()));
        kv(o, "cocycles", std::to_string(b.cocycles.size()));
        kv(o, "actions", b.mp ? "ok" : "absent");
        kv(o, "connecting", b.phi ? "ok" : "absent");
        kv(o, "elements", std::to_string(b.elements.size()));
        kv(o, "validate", "ok");
        return 0;
    }
    const bowtie::BuiltEntry e = need_entry(o);
    bowtie::Report rep = bowtie::validate_groupoid(e.mp->g1());
    for (const auto& v : bowtie::validate_groupoid(e.mp->g2()).violations)
        rep.violations.push_back(v);
    for (const auto& v : bowtie::validate_matched_pair(*e.mp).violations)
        rep.violations.push_back(v);
    for (const auto& v : bowtie::check_fr(*e.mp).violations) rep.violations.push_back(v);
    return report_result(o, rep, "validate");
}

int cmd_product(const Options& o) {
    const bowtie::BuiltEntry e = need_entry(o);
    const bowtie::ZsProductGroupoid& P = *e.product;
    kv(o, "units", std::to_string(P.base->num_units()));
    kv(o, "arrows", std::to_string(P.base->num_arrows()));
    kv(o, "principal", bowtie::is_principal(*P.base) ? "true" : "false");
    return report_result(o, bowtie::validate_groupoid(*P.base), "product");
}

int cmd_cocycle(const Options& o) {
    const bowtie::BuiltEntry e = need_entry(o);
    bowtie::Report rep = bowtie::validate_cocycle(*e.c1);
    for (const auto& v : bowtie::validate_cocycle(*e.c2).violations)
        rep.violations.push_back(v);
    for (const auto& v : bowtie::validate_connecting(*e.phi, *e.c1, *e.c2).violations)
        rep.violations.push_back(v);
    for (const auto& v : bowtie::validate_cocycle(*e.product_cocycle).violations)
        rep.violations.push_back(v);
    return report_result(o, rep, "cocycle");
}

int cmd_internal(const Options& o) {
    const bowtie::BuiltEntry e = need_entry(o);
    const bowtie::InternalTwistData in = bowtie::internal_phi(*e.product, *e.product_cocycle);
    const std::vector<bowtie::Phase> b =
        bowtie::roundtrip_coboundary(*e.product, *e.product_cocycle);
    bool zero = true;
    for (const bowtie::Phase& p : b)
        if (!p.is_zero()) zero = false;
    kv(o, "recovered_c1_trivial", in.c1.is_trivial() ? "true" : "false");
    kv(o, "recovered_c2_trivial", in.c2.is_trivial() ? "true" : "false");
    kv(o, "roundtrip_witness_zero", zero ? "true" : "false");
    kv(o, "internal", "ok");
    return 0;
}

int cmd_algebra(const Options& o) {
    const bowtie::BuiltEntry e = need_entry(o);
    const bowtie::AlgebraPtr alg =
        bowtie::make_algebra(e.product->base, *e.product_cocycle);
    kv(o, "dim", std::to_string(e.product->base->num_arrows()));
    kv(o, "center_dim", std::to_string(bowtie::center(alg).dimension));
    return 0;
}

int cmd_blend(const Options& o) {
    const bowtie::BuiltEntry e = need_entry(o);
    const bowtie::AlgebraPtr alg =
        bowtie::make_algebra(e.product->base, *e.product_cocycle);
    const bowtie::BlendReport rep = bowtie::blend_check(*e.product, alg);
    kv(o, "spanning", rep.spanning ? "true" : "false");
    kv(o, "rank", std::to_string(rep.rank));
    kv(o, "expected_rank", std::to_string(rep.expected_rank));
    kv(o, "austere", rep.austere ? "true" : "false");
    kv(o, "rank_path", rep.rank_path);
    return rep.spanning && rep.austere ? 0 : 1;
}

int cmd_norm(const Options& o) {
    const bowtie::BuiltEntry e = need_entry(o);
    const bowtie::AlgebraPtr alg =
        bowtie::make_algebra(e.product->base, *e.product_cocycle);
    std::mt19937 rng(o.seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        bowtie::AlgebraElement f(alg);
        for (int a = 0; a < alg->g->num_arrows(); ++a) f.add(a, {dist(rng), dist(rng)});
        const double n = bowtie::reduced_norm(f);
        const double lhs = bowtie::reduced_norm(convolve(involution(f), f));
        worst = std::max(worst, std::abs(lhs - n * n) / std::max(1.0, n * n));
    }
    std::ostringstream w;
    w << std::setprecision(12) << worst;
    kv(o, "cstar_identity_max_deviation", w.str());
    const bool ok = worst <= 1e-7;
    kv(o, "norm", ok ? "ok" : "fail");
    return ok ? 0 : 1;
}

int cmd_catalog(const Options& o) {
    for (const auto& e : bowtie::catalog())
        if (machine(o))
            std::cout << "entry=" << e.name << "\n";
        else
            std::cout << e.name << "\n";
    return 0;
}

int cmd_selftest(const Options& o) {
    bowtie::SelftestOptions so;
    so.seed = o.seed;
    so.machine = machine(o);
    so.tolerance = o.tolerance;
    return bowtie::selftest(std::cout, so) == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact engine for matched-pair products of finite groupoids, "
                 "cocycle twists, and their convolution *-algebras"};
    app.require_subcommand(1);

    Options o;
    int (*run)(const Options&) = nullptr;
    for (auto [name, fn, desc] :
         {std::tuple{"validate", &cmd_validate, "validate a bundle file or catalog entry"},
          std::tuple{"product", &cmd_product, "build and check a product groupoid"},
          std::tuple{"cocycle", &cmd_cocycle, "check cocycles and the connecting map"},
          std::tuple{"internal", &cmd_internal, "internal recovery and round trip"},
          std::tuple{"algebra", &cmd_algebra, "dimension and exact center"},
          std::tuple{"blend", &cmd_blend, "factor inclusions and spanning rank"},
          std::tuple{"norm", &cmd_norm, "reduced-norm C*-identity spot check"},
          std::tuple{"catalog", &cmd_catalog, "list catalog entries"},
          std::tuple{"selftest", &cmd_selftest, "run every invariant suite"}}) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->add_option("--input", o.input, "bundle file");
        sub->add_option("--entry", o.entry, "catalog entry name");
        sub->add_option("--param", o.params, "entry parameter k=v")->allow_extra_args(false);
        sub->add_option("--seed", o.seed, "random seed");
        sub->add_option("--format", o.format, "human|machine")
            ->check(CLI::IsMember({"human", "machine"}));
        sub->add_option("--tolerance", o.tolerance, "numeric tolerance");
        sub->callback([&run, fn = fn] { run = fn; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& ex) {
        const int code = app.exit(ex);
        return code == 0 ? 0 : 2;
    }

    try {
        return run(o);
    } catch (const bowtie::parse_error& ex) {
        std::cerr << "parse error: " << ex.what() << "\n";
        return 2;
    } catch (const bowtie::internal_error& ex) {
        std::cerr << "internal assertion failed: " << ex.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
}
