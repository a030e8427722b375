#include "dmc/dmc.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>

using nlohmann::json;
using namespace dmc;

namespace
{

json matrix_json(const Mat& m)
{
    json rows = json::array();
    for (const auto& r : m) {
        json row = json::array();
        for (const auto& x : r) row.push_back(x.to_string());
        rows.push_back(row);
    }
    return rows;
}

json spectrum_json(const SignatureSpectrum& sp)
{
    json j = json::object();
    for (const auto& [k, s] : sp.at) j[std::to_string(k)] = {s.pos, s.neg, s.null};
    return j;
}

json invariants_json(const RowInvariants& I)
{
    return {{"tuple", I.mu.to_string()},
            {"n", I.n},
            {"d", I.mu.denominator()},
            {"conductor", I.conductor},
            {"spectrum", spectrum_json(I.spectrum)},
            {"arithmetic", I.arithmetic},
            {"compact", I.compact},
            {"ideal_symbol", I.symbol.to_string()},
            {"det", I.det.to_string()}};
}

json det_json(const DetClassResult& r)
{
    json j = {{"verdict", to_string(r.verdict)}, {"witness", r.witness}};
    j["certificate"] = r.w ? json(r.w->to_string()) : json(nullptr);
    return j;
}

std::vector<int> one_based(const std::vector<int>& v)
{
    std::vector<int> r;
    for (int i : v) r.push_back(i + 1);
    return r;
}

int run_selftest()
{
    int failures = 0;
    auto report = [&](const std::string& name, bool ok) {
        std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
        if (!ok) ++failures;
    };
    auto mu = WeightTuple::parse("5,5,5,11,14/20");
    auto nu = WeightTuple::parse("6,6,6,9,13/20");
    report("signature at k=3", signature(dm_hermitian(mu), 3) == Signature{2, 1, 0} &&
                                   signature(dm_hermitian(nu), 3) == Signature{3, 0, 0});
    bool units = true;
    for (int i = 1; i < 12; ++i) {
        bool expect = i == 1 || i == 2 || i == 5 || i == 7 || i == 10 || i == 11;
        units = units && classify_factor(12, i).unit == expect;
    }
    report("unit factors for d=12", units);
    report("boundary discriminants",
           cm_discriminant(boundary_lattice(WeightTuple::parse("5,7,3,3,6/12"))) == -4 &&
               cm_discriminant(boundary_lattice(WeightTuple::parse("5,7,4,4,4/12"))) == -3);
    auto ds = default_data();
    auto tables = load_tables(ds);
    bool assembled = !ds.configs.empty();
    for (const auto& cfg : shipped_configurations(ds)) {
        bool found = false;
        for (const auto& rel : tables.relations)
            if (rel.case_id == cfg.case_id)
                found = assemble_tuple(cfg, Projection::First) == rel.tuple_mu().sorted() &&
                        assemble_tuple(cfg, Projection::Second) == rel.tuple_nu().sorted();
        assembled = assembled && found;
    }
    report("configuration assembly", assembled);
    report("data checksum " + tables.checksum, tables.rows.size() == 104 && tables.relations.size() == 59);
    return failures ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Deligne-Mostow commensurability invariants"};
    app.require_subcommand(1);

    std::string tuple_a, tuple_b, table_path, relations_path;
    int mi = 0, mj = 0;
    bool as_json = false;

    auto* gram = app.add_subcommand("gram", "Gram matrices of the intersection and Hermitian forms");
    gram->add_option("tuple", tuple_a)->required();
    auto* inv = app.add_subcommand("invariants", "invariant record of a tuple");
    inv->add_option("tuple", tuple_a)->required();
    auto* spec = app.add_subcommand("spectrum", "signature spectrum");
    spec->add_option("tuple", tuple_a)->required();
    auto* det = app.add_subcommand("detclass", "compare determinant classes of two tuples");
    det->add_option("tupleA", tuple_a)->required();
    det->add_option("tupleB", tuple_b)->required();
    auto* mrg = app.add_subcommand("merge", "merge weights i and j (1-based)");
    mrg->add_option("tuple", tuple_a)->required();
    mrg->add_option("i", mi)->required();
    mrg->add_option("j", mj)->required();
    auto* cus = app.add_subcommand("cusps", "cusp partitions");
    cus->add_option("tuple", tuple_a)->required();
    auto* bdy = app.add_subcommand("boundary", "boundary lattices and CM discriminants (five weights)");
    bdy->add_option("tuple", tuple_a)->required();
    auto* cls = app.add_subcommand("classify", "classify the table into commensurability classes");
    cls->add_option("--table", table_path, "tuples.csv path");
    cls->add_option("--relations", relations_path, "relations.csv path");
    cls->add_flag("--json", as_json, "one JSON document per row");
    auto* chk = app.add_subcommand("check-relations", "verify every relation row");
    auto* self = app.add_subcommand("selftest", "quick consistency checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gram) {
            auto mu = require_ball(WeightTuple::parse(tuple_a));
            auto S = gram_lf(mu);
            std::cout << json{{"tuple", mu.to_string()},
                              {"skew", matrix_json(S.a)},
                              {"hermitian", matrix_json(scale_to_hermitian(S).a)}}
                             .dump(2)
                      << "\n";
        } else if (*inv) {
            std::cout << invariants_json(compute_invariants(WeightTuple::parse(tuple_a))).dump(2) << "\n";
        } else if (*spec) {
            auto mu = require_ball(WeightTuple::parse(tuple_a));
            std::cout << spectrum_json(signature_spectrum(dm_hermitian(mu))).dump() << "\n";
        } else if (*det) {
            auto a = require_ball(WeightTuple::parse(tuple_a));
            auto b = require_ball(WeightTuple::parse(tuple_b));
            if (a.conductor() != b.conductor()) throw ConductorMismatch();
            auto r = det_class_equal(determinant(dm_hermitian(a)), determinant(dm_hermitian(b)), pair_hints(a, b));
            std::cout << det_json(r).dump(2) << "\n";
            return r.verdict == Verdict::Unknown ? 2 : 0;
        } else if (*mrg) {
            auto mu = WeightTuple::parse(tuple_a);
            auto m = merge(mu, mi - 1, mj - 1);
            bool identity = determinant(gram_lf(m.reordered).a) == determinant(gram_lf(m.merged).a) * m.c;
            std::cout << json{{"reordered", m.reordered.to_string()},
                              {"merged", m.merged.to_string()},
                              {"c", m.c.to_string()},
                              {"det_identity", identity}}
                             .dump(2)
                      << "\n";
        } else if (*cus) {
            auto mu = WeightTuple::parse(tuple_a);
            auto cp = cusp_partitions(mu);
            json raw = json::array();
            for (const auto& P : cp.raw) raw.push_back({one_based(P.S1), one_based(P.S2)});
            std::cout << json{{"tuple", mu.to_string()}, {"raw", raw}, {"orbits", cp.orbits}, {"compact", cp.raw.empty()}}
                             .dump(2)
                      << "\n";
        } else if (*bdy) {
            auto mu = WeightTuple::parse(tuple_a);
            json out = json::array();
            const auto& a = mu.numerators();
            for (int i = 0; i < mu.size(); ++i)
                for (int j = i + 1; j < mu.size(); ++j) {
                    if (a[i] + a[j] != mu.denominator()) continue;
                    auto L = boundary_lattice(mu, {i, j});
                    out.push_back({{"pair", {i + 1, j + 1}},
                                   {"lattice", {L.t1.to_string(), L.t2.to_string()}},
                                   {"cm_discriminant", cm_discriminant(L).get_si()}});
                }
            if (out.empty()) throw NoPairSummingToOne();
            std::cout << out.dump(2) << "\n";
        } else if (*cls) {
            DataSet ds = default_data();
            if (!table_path.empty()) ds.tuples_csv = read_file(table_path);
            if (!relations_path.empty()) ds.relations_csv = read_file(relations_path);
            auto tables = load_tables(ds);
            auto invs = compute_all(tables.rows);
            auto P = classify(tables.rows, tables.relations, invs);
            auto R = verify_against_expected(P, tables.rows, invs);
            if (as_json) {
                for (const auto& r : tables.rows) {
                    json j = invariants_json(invs.at(r.id));
                    j["id"] = r.id;
                    j["class"] = P.label.at(r.id);
                    j["expected_class"] = r.expected_class;
                    std::cout << j.dump() << "\n";
                }
            }
            std::cout << "data: " << ds.origin << " checksum " << tables.checksum << "\n";
            std::cout << "classes: " << R.classes << "\n";
            for (const auto& [l, dg] : P.digest) std::cout << "  class " << l << ": " << dg << "\n";
            for (const auto& u : P.unresolved) std::cout << "unresolved: " << u << "\n";
            for (const auto* list : {&R.partition_diffs, &R.flag_diffs, &R.symbol_diffs})
                for (const auto& s : *list) std::cout << "diff: " << s << "\n";
            return R.empty() ? 0 : 1;
        } else if (*chk) {
            auto tables = load_tables();
            int failed = 0;
            for (const auto& c : check_relations(tables.relations)) {
                json j = {{"case", c.case_id}, {"passed", c.passed()}, {"det", det_json(c.det)}, {"failures", c.failures}};
                std::cout << j.dump() << "\n";
                failed += !c.passed();
            }
            std::cout << (tables.relations.size() - failed) << "/" << tables.relations.size() << " relations pass\n";
            return failed ? 1 : 0;
        } else if (*self) {
            return run_selftest();
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
