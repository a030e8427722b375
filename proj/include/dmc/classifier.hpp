#pragma once

#include "dmc/cusps.hpp"
#include "dmc/invariants.hpp"
#include "dmc_embedded_data.hpp"

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace dmc
{

struct ParseError : std::runtime_error
{
    ParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line)
    {
    }
    int line;
};
struct ValidationError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};
struct InconsistentMerge : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct TableRow
{
    int id = 0;
    int n = 0;
    int d = 0;
    std::vector<int> numerators;
    bool compact = false;
    bool arithmetic = false;
    std::string symbol;
    int expected_class = 0;

    WeightTuple tuple() const { return WeightTuple(numerators, d); }
};

struct RelationRow
{
    std::string case_id;
    int d = 0;
    std::vector<int> mu, nu;
    std::optional<int> deg1, deg2;

    WeightTuple tuple_mu() const { return WeightTuple(mu, d); }
    WeightTuple tuple_nu() const { return WeightTuple(nu, d); }
};

struct DataSet
{
    std::string tuples_csv;
    std::string relations_csv;
    std::map<std::string, std::string> configs;  // case id -> json text
    std::string origin;
};

inline std::string fnv1a64(const std::string& s)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

inline std::string read_file(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline DataSet embedded_data()
{
    DataSet ds;
    ds.tuples_csv = std::string(embedded::tuples_csv);
    ds.relations_csv = std::string(embedded::relations_csv);
    for (const auto& c : embedded::configs) ds.configs[std::string(c.name)] = std::string(c.json);
    ds.origin = "embedded";
    return ds;
}

inline DataSet data_from_dir(const std::filesystem::path& dir)
{
    DataSet ds;
    ds.tuples_csv = read_file(dir / "tuples.csv");
    ds.relations_csv = read_file(dir / "relations.csv");
    if (std::filesystem::is_directory(dir / "configs"))
        for (const auto& e : std::filesystem::directory_iterator(dir / "configs"))
            if (e.path().extension() == ".json") ds.configs[e.path().stem().string()] = read_file(e.path());
    ds.origin = dir.string();
    return ds;
}

// DMC_DATA_DIR overrides the embedded copy
inline DataSet default_data()
{
    if (const char* dir = std::getenv("DMC_DATA_DIR"); dir && *dir) return data_from_dir(dir);
    return embedded_data();
}

inline std::string checksum(const DataSet& ds) { return fnv1a64(ds.tuples_csv + "\n" + ds.relations_csv); }

namespace detail
{

inline std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::stringstream ss(s);
    while (std::getline(ss, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

inline std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

inline int parse_int(const std::string& s, int line, const char* field)
{
    try {
        std::size_t pos;
        int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::logic_error&) {
        throw ParseError(line, std::string("bad integer in ") + field + ": '" + s + "'");
    }
}

inline std::vector<int> parse_numerators(const std::string& s, int line)
{
    std::vector<int> v;
    for (const auto& t : split(s, '-')) v.push_back(parse_int(t, line, "numerators"));
    return v;
}

template <class F>
void for_each_data_line(const std::string& text, F&& f)
{
    std::stringstream ss(text);
    std::string line;
    int no = 0;
    bool header = true;
    while (std::getline(ss, line)) {
        ++no;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        if (header) {
            header = false;
            continue;
        }
        f(no, line);
    }
}

}  // namespace detail

inline std::vector<TableRow> parse_tuples(const std::string& text)
{
    std::vector<TableRow> rows;
    detail::for_each_data_line(text, [&](int no, const std::string& line) {
        auto f = detail::split(line, ',');
        if (f.size() != 8) throw ParseError(no, "expected 8 fields");
        TableRow r;
        r.id = detail::parse_int(f[0], no, "id");
        r.n = detail::parse_int(f[1], no, "n");
        r.d = detail::parse_int(f[2], no, "d");
        r.numerators = detail::parse_numerators(f[3], no);
        if (f[4] != "C" && f[4] != "NC") throw ParseError(no, "compact flag must be C or NC");
        if (f[5] != "A" && f[5] != "NA") throw ParseError(no, "arithmetic flag must be A or NA");
        r.compact = f[4] == "C";
        r.arithmetic = f[5] == "A";
        r.symbol = f[6];
        r.expected_class = detail::parse_int(f[7], no, "class");
        long sum = 0;
        for (int a : r.numerators) sum += a;
        if (static_cast<int>(r.numerators.size()) != r.n + 3)
            throw ValidationError("row " + std::to_string(r.id) + ": numerator count is not n+3");
        if (sum != 2L * r.d) throw ValidationError("row " + std::to_string(r.id) + ": numerators do not sum to 2d");
        for (int a : r.numerators)
            if (a <= 0 || a >= r.d) throw ValidationError("row " + std::to_string(r.id) + ": numerator outside (0,d)");
        rows.push_back(std::move(r));
    });
    return rows;
}

inline std::vector<RelationRow> parse_relations(const std::string& text)
{
    std::vector<RelationRow> rows;
    detail::for_each_data_line(text, [&](int no, const std::string& line) {
        auto f = detail::split(line, ',');
        if (f.size() != 6) throw ParseError(no, "expected 6 fields");
        RelationRow r;
        r.case_id = f[0];
        r.d = detail::parse_int(f[1], no, "d");
        r.mu = detail::parse_numerators(f[2], no);
        r.nu = detail::parse_numerators(f[3], no);
        if (!f[4].empty()) r.deg1 = detail::parse_int(f[4], no, "deg1");
        if (!f[5].empty()) r.deg2 = detail::parse_int(f[5], no, "deg2");
        for (const auto* v : {&r.mu, &r.nu}) {
            long sum = 0;
            for (int a : *v) sum += a;
            if (sum != 2L * r.d) throw ValidationError("relation " + r.case_id + ": numerators do not sum to 2d");
        }
        rows.push_back(std::move(r));
    });
    return rows;
}

struct Tables
{
    std::vector<TableRow> rows;
    std::vector<RelationRow> relations;
    std::string checksum;
};

inline Tables load_tables(const DataSet& ds)
{
    return {parse_tuples(ds.tuples_csv), parse_relations(ds.relations_csv), checksum(ds)};
}

inline Tables load_tables() { return load_tables(default_data()); }

struct RowInvariants
{
    WeightTuple mu;
    int n = 0;
    int conductor = 1;
    SignatureSpectrum spectrum;
    bool arithmetic = false;
    bool compact = false;
    IdealSymbol symbol;
    CycElem det;                  // det of the skew-Hermitian Gram matrix
    std::vector<long> cm;         // sorted CM discriminants over cusp orbits (five weights only)
};

inline std::vector<long> cm_multiset(const WeightTuple& mu, const CuspEnumeration& cp)
{
    std::vector<long> out;
    if (mu.n() != 2) return out;
    std::set<std::vector<int>> done;
    const auto& a = mu.numerators();
    for (const auto& P : cp.raw) {
        const auto& pair = P.S1.size() == 2 ? P.S1 : P.S2;
        std::vector<int> shape{a[pair[0]], a[pair[1]]};
        std::sort(shape.begin(), shape.end());
        if (!done.insert(shape).second) continue;
        out.push_back(cm_discriminant(boundary_lattice(mu, {pair[0], pair[1]})).get_si());
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline RowInvariants compute_invariants(const WeightTuple& mu_in)
{
    RowInvariants r;
    r.mu = require_ball(mu_in);
    r.n = r.mu.n();
    r.conductor = r.mu.conductor();
    auto S = gram_lf(r.mu);
    auto H = scale_to_hermitian(S);
    r.spectrum = signature_spectrum(H);
    r.arithmetic = true;
    for (const auto& [k, s] : r.spectrum.at)
        if (k != 1 && !s.definite()) r.arithmetic = false;
    auto cp = cusp_partitions(r.mu);
    r.compact = cp.raw.empty();
    r.symbol = det_ideal_symbol(r.mu);
    r.det = determinant(S.a);
    r.cm = cm_multiset(r.mu, cp);
    return r;
}

inline std::string spectrum_up_to_sign(const SignatureSpectrum& sp)
{
    std::string r = "{";
    for (const auto& [k, s] : sp.at) {
        Signature t = s.flipped();
        const Signature& m = std::tie(s.pos, s.neg) <= std::tie(t.pos, t.neg) ? s : t;
        r += std::to_string(k) + ":" + m.to_string() + ";";
    }
    return r + "}";
}

inline std::string invariant_digest(const RowInvariants& r)
{
    std::string s = "n=" + std::to_string(r.n) + " c=" + std::to_string(r.conductor) + (r.compact ? " C" : " NC") +
                    " spec=" + spectrum_up_to_sign(r.spectrum);
    if (r.n % 2) s += " sym=" + r.symbol.to_string();
    if (!r.cm.empty()) {
        s += " cm=";
        for (long d : r.cm) s += std::to_string(d) + ";";
    }
    return s;
}

// the paired hints for comparing two tuples' determinants
inline std::vector<CycElem> pair_hints(const WeightTuple& a, const WeightTuple& b)
{
    auto h = tuple_generators(a);
    for (auto& g : tuple_generators(b)) h.push_back(std::move(g));
    return h;
}

// determinant comparison up to conformal scaling of an m-dimensional form.
// Odd m: scaling by r = x/y leaves x / (r^m y) = r^{1-m}, a square in F.
inline DetClassResult conformal_det_class(const CycElem& x, const CycElem& y, int m, std::vector<CycElem> hints)
{
    if (m % 2 == 0) return det_class_equal(x, y, std::move(hints));
    if (x.is_zero() || y.is_zero()) throw ZeroInput();
    CycElem r = x / y;
    DetClassResult res;
    if (!r.is_real()) {
        res.verdict = Verdict::Distinct;
        res.witness = "ratio is not real";
        return res;
    }
    CycElem w = r.pow((1 - m) / 2);
    if (w * w.conj() == x / (r.pow(m) * y)) {
        res.verdict = Verdict::Equal;
        res.w = w;
        res.witness = "scaled by x/y";
    }
    return res;
}

struct ClassPartition
{
    std::map<int, int> label;  // row id -> minimum row id of its class
    std::map<int, std::string> digest;  // class label -> invariant digest
    std::vector<std::string> unresolved;

    int count() const
    {
        std::set<int> s;
        for (const auto& [id, l] : label) s.insert(l);
        return static_cast<int>(s.size());
    }
};

namespace detail
{

struct UnionFind
{
    std::map<int, int> parent;
    int find(int x)
    {
        auto it = parent.find(x);
        if (it == parent.end()) return parent[x] = x;
        if (it->second == x) return x;
        return it->second = find(it->second);
    }
    void unite(int a, int b)
    {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a < b) std::swap(a, b);
        parent[a] = b;
    }
};

}  // namespace detail

inline std::map<int, RowInvariants> compute_all(const std::vector<TableRow>& rows)
{
    std::map<int, RowInvariants> inv;
    for (const auto& r : rows) inv.emplace(r.id, compute_invariants(r.tuple()));
    return inv;
}

inline std::optional<int> find_row(const std::vector<TableRow>& rows, const WeightTuple& t)
{
    WeightTuple key = t.sorted();
    for (const auto& r : rows)
        if (r.tuple().sorted() == key) return r.id;
    return std::nullopt;
}

inline std::string agreement_failure(const RowInvariants& a, const RowInvariants& b)
{
    if (a.conductor != b.conductor) return "conductors differ";
    if (a.n != b.n) return "dimensions differ";
    if (a.compact != b.compact) return "compactness differs";
    if (!a.spectrum.matches_up_to_sign(b.spectrum)) return "signature spectra differ";
    if (a.n % 2 == 1 && !(a.symbol == b.symbol)) return "determinant symbols differ";
    if (a.cm != b.cm) return "boundary CM discriminants differ";
    return "";
}

inline ClassPartition classify(const std::vector<TableRow>& rows, const std::vector<RelationRow>& relations,
                               const std::map<int, RowInvariants>& inv)
{
    detail::UnionFind uf;
    for (const auto& r : rows) uf.find(r.id);

    std::map<WeightTuple, int> by_tuple;
    for (const auto& r : rows) {
        auto key = inv.at(r.id).mu.sorted();
        auto [it, fresh] = by_tuple.emplace(key, r.id);
        if (!fresh) uf.unite(it->second, r.id);
    }

    ClassPartition out;
    std::map<std::pair<int, int>, std::vector<int>> arith;
    for (const auto& r : rows) {
        const auto& I = inv.at(r.id);
        if (I.arithmetic) arith[{I.n, I.conductor}].push_back(r.id);
    }
    for (auto& [key, ids] : arith) {
        std::sort(ids.begin(), ids.end());
        if (key.first % 2 == 0) {
            for (int id : ids) uf.unite(ids.front(), id);
            continue;
        }
        std::vector<int> reps;
        for (int id : ids) {
            bool placed = false;
            for (int rep : reps) {
                if (uf.find(rep) == uf.find(id)) {
                    placed = true;
                    break;
                }
                auto v = det_class_equal(inv.at(id).det, inv.at(rep).det, pair_hints(inv.at(id).mu, inv.at(rep).mu));
                if (v.verdict == Verdict::Equal) {
                    uf.unite(rep, id);
                    placed = true;
                    break;
                }
                if (v.verdict == Verdict::Unknown)
                    out.unresolved.push_back("rows " + std::to_string(rep) + " and " + std::to_string(id) + ": " +
                                             v.witness);
            }
            if (!placed) reps.push_back(id);
        }
    }

    std::set<std::pair<int, int>> edges;
    for (const auto& rel : relations) {
        auto u = find_row(rows, rel.tuple_mu()), v = find_row(rows, rel.tuple_nu());
        if (!u || !v) throw ValidationError("relation " + rel.case_id + " names a tuple outside the table");
        edges.insert({std::min(*u, *v), std::max(*u, *v)});
    }
    for (auto [u, v] : edges) {
        const auto &A = inv.at(u), &B = inv.at(v);
        if (A.arithmetic != B.arithmetic)
            throw InconsistentMerge("relation joins arithmetic row " + std::to_string(A.arithmetic ? u : v) +
                                    " with non-arithmetic row " + std::to_string(A.arithmetic ? v : u));
        if (A.arithmetic) {
            if (uf.find(u) != uf.find(v))
                throw InconsistentMerge("relation joins arithmetic rows " + std::to_string(u) + " and " +
                                        std::to_string(v) + " from different classes");
            continue;
        }
        if (auto why = agreement_failure(A, B); !why.empty())
            throw InconsistentMerge("rows " + std::to_string(u) + " and " + std::to_string(v) + ": " + why);
        uf.unite(u, v);
    }

    for (const auto& r : rows) out.label[r.id] = uf.find(r.id);
    for (const auto& [id, l] : out.label)
        if (!out.digest.count(l)) out.digest[l] = invariant_digest(inv.at(l));
    return out;
}

inline ClassPartition classify(const std::vector<TableRow>& rows, const std::vector<RelationRow>& relations)
{
    return classify(rows, relations, compute_all(rows));
}

struct RelationCheck
{
    std::string case_id;
    bool valid = false;
    bool same_conductor = false;
    bool same_dimension = false;
    bool spectra_match = false;
    bool compact_match = false;
    DetClassResult det;
    std::vector<std::string> failures;

    bool passed() const { return failures.empty(); }
};

inline RelationCheck check_relation(const RelationRow& rel)
{
    RelationCheck c;
    c.case_id = rel.case_id;
    try {
        auto A = compute_invariants(rel.tuple_mu());
        auto B = compute_invariants(rel.tuple_nu());
        c.valid = true;
        c.same_conductor = A.conductor == B.conductor;
        c.same_dimension = A.n == B.n;
        if (!c.same_conductor) c.failures.push_back("conductors differ");
        if (!c.same_dimension) c.failures.push_back("dimensions differ");
        if (c.same_conductor && c.same_dimension) {
            c.spectra_match = A.spectrum.matches_up_to_sign(B.spectrum);
            if (!c.spectra_match) c.failures.push_back("signature spectra differ");
            c.det = conformal_det_class(A.det, B.det, A.n + 1, pair_hints(A.mu, B.mu));
            if (c.det.verdict != Verdict::Equal)
                c.failures.push_back(std::string("det class ") + to_string(c.det.verdict) + ": " + c.det.witness);
        }
        c.compact_match = A.compact == B.compact;
        if (!c.compact_match) c.failures.push_back("compactness differs");
    } catch (const std::exception& e) {
        c.failures.push_back(std::string("invalid: ") + e.what());
    }
    return c;
}

inline std::vector<RelationCheck> check_relations(const std::vector<RelationRow>& relations)
{
    std::vector<RelationCheck> out;
    for (const auto& r : relations) out.push_back(check_relation(r));
    return out;
}

struct VerifyReport
{
    std::vector<std::string> partition_diffs;
    std::vector<std::string> flag_diffs;
    std::vector<std::string> symbol_diffs;
    int classes = 0;

    bool partition_ok() const { return partition_diffs.empty(); }
    bool empty() const { return partition_diffs.empty() && flag_diffs.empty() && symbol_diffs.empty(); }
};

inline VerifyReport verify_against_expected(const ClassPartition& P, const std::vector<TableRow>& rows,
                                            const std::map<int, RowInvariants>& inv)
{
    VerifyReport R;
    R.classes = P.count();
    std::map<int, std::set<int>> computed_to_expected, expected_to_computed;
    for (const auto& r : rows) {
        int l = P.label.at(r.id);
        computed_to_expected[l].insert(r.expected_class);
        expected_to_computed[r.expected_class].insert(l);
    }
    for (const auto& [l, es] : computed_to_expected)
        if (es.size() > 1) {
            std::string s = "computed class " + std::to_string(l) + " spans expected classes";
            for (int e : es) s += " " + std::to_string(e);
            R.partition_diffs.push_back(s);
        }
    for (const auto& [e, ls] : expected_to_computed)
        if (ls.size() > 1) {
            std::string s = "expected class " + std::to_string(e) + " split into computed classes";
            for (int l : ls) s += " " + std::to_string(l);
            R.partition_diffs.push_back(s);
        }
    for (const auto& r : rows) {
        const auto& I = inv.at(r.id);
        if (I.arithmetic != r.arithmetic)
            R.flag_diffs.push_back("row " + std::to_string(r.id) + ": arithmetic flag " + (I.arithmetic ? "A" : "NA"));
        if (I.compact != r.compact)
            R.flag_diffs.push_back("row " + std::to_string(r.id) + ": compact flag " + (I.compact ? "C" : "NC"));
        if (I.symbol.to_string() != r.symbol)
            R.symbol_diffs.push_back("row " + std::to_string(r.id) + ": symbol " + I.symbol.to_string() +
                                     " expected " + r.symbol);
    }
    return R;
}

inline std::vector<Configuration> shipped_configurations(const DataSet& ds)
{
    std::vector<Configuration> out;
    for (const auto& [name, text] : ds.configs) out.push_back(Configuration::from_json(nlohmann::json::parse(text)));
    return out;
}

}  // namespace dmc
