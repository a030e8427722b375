#pragma once

#include "dmc/dmtheory.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace dmc
{

struct ZeroInput : std::domain_error
{
    ZeroInput() : std::domain_error("det class comparison of a zero element") {}
};
struct DimensionTooSmall : std::domain_error
{
    DimensionTooSmall() : std::domain_error("trace field is only bounded for n < 2") {}
};

struct FactorClassification
{
    bool unit = true;
    int p = 0;
    int m = 1;
    int valuation = 0;

    friend bool operator==(const FactorClassification&, const FactorClassification&) = default;
};

inline bool prime_power(int m, int& p, int& j)
{
    if (m < 2) return false;
    auto ps = prime_factors(m);
    if (ps.size() != 1) return false;
    p = ps[0];
    j = vp(m, p);
    return true;
}

inline int ipow(int b, int e)
{
    int r = 1;
    while (e-- > 0) r *= b;
    return r;
}

// ideal (1 - zeta_d^a) in Q(zeta_d)
inline FactorClassification classify_factor(int d, int a)
{
    if (a <= 0 || a >= d) throw std::invalid_argument("classify_factor needs 0 < a < d");
    FactorClassification f;
    f.m = d / std::gcd(a, d);
    int p, j;
    if (!prime_power(f.m, p, j)) return f;
    f.unit = false;
    f.p = p;
    f.valuation = ipow(p, vp(d, p) - j);
    return f;
}

// shape of the rational prime p in K = Q(zeta_c) relative to F = K cap R
struct PrimeShape
{
    int f = 1;                 // residue degree over Q
    int e = 1;                 // ramification index over Q
    int g = 1;                 // number of primes of K over p
    bool conj_in_decomposition = false;
    bool ramified_over_real = false;
};

inline PrimeShape prime_shape(int p, int c)
{
    PrimeShape s;
    int v = c > 1 ? vp(c, p) : 0;
    int pv = ipow(p, v);
    int rest = c / pv;
    s.e = euler_phi(pv);
    s.f = mult_order(p, rest);
    s.g = euler_phi(c) / (s.e * s.f);
    if (rest <= 2) {
        s.conj_in_decomposition = true;
        s.ramified_over_real = v > 0 && c > 2;
    } else {
        long x = 1;
        for (int t = 0; t < s.f; ++t) {
            if (x == rest - 1) s.conj_in_decomposition = true;
            x = x * p % rest;
        }
    }
    return s;
}

enum class NormStatus
{
    IsNorm,
    NotNorm,
    Undetermined
};

inline const char* to_string(NormStatus s)
{
    switch (s) {
    case NormStatus::IsNorm: return "IsNorm";
    case NormStatus::NotNorm: return "NotNorm";
    default: return "Undetermined";
    }
}

struct IdealSymbol
{
    int conductor = 1;
    std::map<int, int> ramified;                             // p -> exponent mod 2
    std::map<int, std::pair<int, NormStatus>> residual;      // q -> (exponent mod 2, status)
    bool ambiguous = false;

    bool trivial() const { return ramified.empty() && residual.empty(); }

    std::string to_string() const
    {
        std::set<int> primes;
        for (const auto& [p, e] : ramified) primes.insert(p);
        for (const auto& [q, e] : residual) primes.insert(q);
        std::string r;
        for (int p : primes) {
            auto it = residual.find(p);
            if (it != residual.end()) {
                r += (r.empty() ? "" : "*") + std::to_string(p);
                if (it->second.second == NormStatus::Undetermined) r += "?";
            }
            if (ramified.count(p)) r += (r.empty() ? "" : "*") + std::string("p") + std::to_string(p);
        }
        return r.empty() ? "1" : r;
    }

    friend bool operator==(const IdealSymbol& a, const IdealSymbol& b)
    {
        return a.conductor == b.conductor && a.ramified == b.ramified && a.residual == b.residual;
    }
};

namespace detail
{

struct EmbeddingTable
{
    std::vector<int> ks;
    std::vector<std::vector<std::complex<long double>>> zeta;  // zeta[j][t] = sigma_{ks[t]}(zeta^j)

    explicit EmbeddingTable(int c)
    {
        ks = embedding_representatives(c);
        const long double tau = 2.0L * 3.14159265358979323846264338327950288L;
        zeta.assign(euler_phi(c), {});
        for (int j = 0; j < euler_phi(c); ++j)
            for (int k : ks) {
                long double ang = tau * static_cast<long double>(mod_floor(static_cast<long>(j) * k, c)) / c;
                zeta[j].push_back({std::cos(ang), std::sin(ang)});
            }
    }
};

// integer vectors of coefficient height <= h, visited in a fixed order
template <class F>
bool enumerate_box(int dim, int h, F&& visit)
{
    std::vector<int> v(dim, -h);
    while (true) {
        if (visit(v)) return true;
        int i = 0;
        while (i < dim && v[i] == h) v[i++] = -h;
        if (i == dim) return false;
        ++v[i];
    }
}

}  // namespace detail

struct NormStatusResult
{
    NormStatus status = NormStatus::Undetermined;
    std::optional<CycElem> w;
    std::string witness;
};

// bounded search for w in Z[zeta_c] with w * conj(w) = q
inline std::optional<CycElem> small_norm_preimage(const Integer& q, int c, int height = 4, double budget = 3e6)
{
    if (q == 1) return CycElem::rational(1, c);
    const int phi = euler_phi(c);
    detail::EmbeddingTable E(c);
    const long double target = q.get_d();
    std::optional<CycElem> found;
    for (int h = 1; h <= height && !found; ++h) {
        if (std::pow(2.0 * h + 1, phi) > budget) break;
        detail::enumerate_box(phi, h, [&](const std::vector<int>& v) {
            for (std::size_t t = 0; t < E.ks.size(); ++t) {
                std::complex<long double> z = 0;
                for (int j = 0; j < phi; ++j)
                    if (v[j]) z += static_cast<long double>(v[j]) * E.zeta[j][t];
                if (std::fabs(std::norm(z) - target) > 1e-9L * target) return false;
            }
            std::vector<Rational> co;
            for (int x : v) co.emplace_back(x);
            CycElem w = CycElem::from_coeffs(c, co);
            if (w * w.conj() == CycElem::rational(Rational(q), c)) {
                found = w;
                return true;
            }
            return false;
        });
    }
    return found;
}

inline NormStatusResult rational_prime_norm_status(int q, int c)
{
    c = canonical_conductor(c);
    NormStatusResult r;
    if (c > 1 && c % q == 0) {
        if (auto w = small_norm_preimage(Integer(q), c)) {
            r.status = NormStatus::IsNorm;
            r.w = w;
        } else {
            r.witness = "ramified";
        }
        return r;
    }
    PrimeShape s = prime_shape(q, c);
    if (s.conj_in_decomposition && c > 2) {
        r.status = NormStatus::NotNorm;
        r.witness = "inert place over " + std::to_string(q) + " with odd valuation";
        return r;
    }
    if (auto w = small_norm_preimage(Integer(q), c)) {
        r.status = NormStatus::IsNorm;
        r.w = w;
        return r;
    }
    return r;
}

inline IdealSymbol det_ideal_symbol(const WeightTuple& mu)
{
    const int d = mu.denominator();
    IdealSymbol S;
    S.conductor = mu.conductor();
    std::map<int, int> ram, res;
    for (int a : mu.numerators()) {
        auto f = classify_factor(d, a);
        if (f.unit) continue;
        if (S.conductor % f.p == 0) {
            ram[f.p] += f.valuation;
            if (prime_shape(f.p, S.conductor).g != 1) S.ambiguous = true;
        } else {
            // d = 2c with c odd and 1 - zeta_d^{d/2} = 2
            res[f.p] += f.valuation;
        }
    }
    for (auto [p, e] : ram) {
        if (e % 2 == 0) continue;
        if (S.ambiguous && prime_shape(p, S.conductor).g != 1)
            S.residual[p] = {1, NormStatus::Undetermined};
        else
            S.ramified[p] = 1;
    }
    for (auto [q, e] : res) {
        if (e % 2 == 0) continue;
        auto st = rational_prime_norm_status(q, S.conductor).status;
        if (st == NormStatus::IsNorm) continue;
        S.residual[q] = {1, st};
    }
    return S;
}

namespace detail
{

inline std::map<int, int> factor_small(Integer n, bool& complete)
{
    std::map<int, int> f;
    complete = true;
    if (n < 0) n = -n;
    for (int p = 2; n > 1 && p < 100000; ++p) {
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
                mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
                ++f[p];
            }
        }
    }
    if (n > 1) {
        if (n.fits_sint_p() && mpz_probab_prime_p(n.get_mpz_t(), 30))
            ++f[static_cast<int>(n.get_si())];
        else
            complete = false;
    }
    return f;
}

}  // namespace detail

// obstruction data for a real element r to be a relative norm from K to F, read off from N_{K/Q}(r)
struct ElementSymbol
{
    std::map<int, int> odd;            // primes with an inert place of odd valuation
    std::set<int> undetermined;
    bool nontrivial() const { return !odd.empty(); }
    std::string to_string() const
    {
        std::string r;
        for (const auto& [p, e] : odd) r += (r.empty() ? "" : "*") + std::to_string(p);
        return r.empty() ? "1" : r;
    }
};

inline ElementSymbol element_symbol(const CycElem& x)
{
    ElementSymbol S;
    const int c = x.conductor();
    Rational N = field_norm(x);
    std::map<int, int> v;
    bool ok1, ok2;
    for (auto [p, e] : detail::factor_small(N.get_num(), ok1)) v[p] += e;
    for (auto [p, e] : detail::factor_small(N.get_den(), ok2)) v[p] -= e;
    for (auto [p, e] : v) {
        if (e == 0) continue;
        PrimeShape s = prime_shape(p, c);
        if (!s.conj_in_decomposition || s.ramified_over_real) continue;
        int total = e / s.f;  // sum of valuations over the primes above p
        if (total % 2) {
            S.odd[p] = 1;
        } else if (s.g > 1) {
            S.undetermined.insert(p);
        }
    }
    return S;
}

enum class Verdict
{
    Equal,
    Distinct,
    Unknown
};

inline const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::Equal: return "Equal";
    case Verdict::Distinct: return "Distinct";
    default: return "Unknown";
    }
}

struct DetClassResult
{
    Verdict verdict = Verdict::Unknown;
    std::optional<CycElem> w;  // x / y = w * conj(w) when Equal
    std::string witness;
};

// w with w * conj(w) = t for a positive rational t, or nothing
inline std::optional<CycElem> rational_norm_preimage(const Rational& t, int c)
{
    if (t <= 0) return std::nullopt;
    CycElem z = CycElem::rational(1, c);
    for (int side = 0; side < 2; ++side) {
        bool complete;
        auto f = detail::factor_small(side == 0 ? t.get_num() : t.get_den(), complete);
        if (!complete) return std::nullopt;
        CycElem zp = CycElem::rational(1, c);
        for (auto [q, e] : f) {
            Integer qe;
            mpz_pow_ui(qe.get_mpz_t(), Integer(q).get_mpz_t(), e / 2);
            zp = Rational(qe) * zp;
            if (e % 2) {
                auto w = small_norm_preimage(Integer(q), c);
                if (!w) return std::nullopt;
                zp = zp * *w;
            }
        }
        z = side == 0 ? z * zp : z / zp;
    }
    return z;
}

inline std::vector<CycElem> default_generators(int c)
{
    std::vector<CycElem> g;
    for (int a = 1; 2 * a <= c; ++a) g.push_back(one_minus_root(c, a));
    return g;
}

// generators 1 - zeta_d^a for the given numerators, plus the multiplier factor 1 - zeta_d^2
inline std::vector<CycElem> tuple_generators(const WeightTuple& mu)
{
    std::vector<CycElem> g;
    const int d = mu.denominator();
    for (int a : mu.numerators()) g.push_back(one_minus_root(d, a));
    if ((2 % d) != 0) g.push_back(one_minus_root(d, 2));
    return g;
}

inline DetClassResult det_class_equal(const CycElem& x, const CycElem& y, std::vector<CycElem> hints = {})
{
    if (x.is_zero() || y.is_zero()) throw ZeroInput();
    CycElem r = x / y;
    const int c = r.conductor();
    DetClassResult res;
    if (!r.is_real()) {
        res.verdict = Verdict::Distinct;
        res.witness = "ratio is not real";
        return res;
    }
    for (int k : embedding_representatives(c)) {
        if (certified_sign(r, k) == Sign::Negative) {
            res.verdict = Verdict::Distinct;
            res.witness = "negative at embedding " + std::to_string(k);
            return res;
        }
    }
    ElementSymbol sym = element_symbol(r);
    if (sym.nontrivial()) {
        res.verdict = Verdict::Distinct;
        res.witness = "odd valuation at inert primes over " + sym.to_string();
        return res;
    }
    if (r.is_rational()) {
        if (auto z = rational_norm_preimage(r.rational_value(), c)) {
            res.verdict = Verdict::Equal;
            res.w = *z;
            return res;
        }
    }

    if (hints.empty()) hints = default_generators(c);
    // relative norms g * conj(g), deduplicated, units of norm 1 dropped
    int C = c;
    for (const auto& g : hints) C = std::lcm(C, g.conductor());
    std::vector<CycElem> gens, norms;
    for (const auto& g : hints) {
        if (g.is_zero()) continue;
        CycElem n = g * g.conj();
        if (n == CycElem::rational(1, n.conductor())) continue;
        bool dup = false;
        for (const auto& m : norms)
            if (m == n) dup = true;
        if (dup) continue;
        gens.push_back(g);
        norms.push_back(n);
    }
    const int t = static_cast<int>(gens.size());
    detail::EmbeddingTable E(C);
    const std::size_t K = E.ks.size();
    auto logs = [&](const CycElem& v) {
        CycElem w = v.lift(C);
        std::vector<long double> l;
        for (int k : E.ks) l.push_back(std::log(std::abs(w.embed(k))));
        return l;
    };
    std::vector<long double> Lr = logs(r);
    std::vector<std::vector<long double>> Lg;
    for (const auto& n : norms) Lg.push_back(logs(n));

    int E_max = 1;
    if (std::pow(7.0, t) <= 2e6) E_max = 3;
    else if (std::pow(5.0, t) <= 2e6) E_max = 2;
    const int span = 2 * E_max + 1;
    auto value = [](int idx) { return idx == 0 ? 0 : (idx % 2 ? (idx + 1) / 2 : -(idx / 2)); };

    std::vector<int> idx(t, 0);
    while (true) {
        std::vector<long double> res_log = Lr;
        for (int i = 0; i < t; ++i) {
            int e = value(idx[i]);
            if (e)
                for (std::size_t k = 0; k < K; ++k) res_log[k] -= e * Lg[i][k];
        }
        long double lo = *std::min_element(res_log.begin(), res_log.end());
        long double hi = *std::max_element(res_log.begin(), res_log.end());
        if (hi - lo < 1e-9L) {
            CycElem P = CycElem::rational(1, C), Np = CycElem::rational(1, C);
            for (int i = 0; i < t; ++i) {
                int e = value(idx[i]);
                if (!e) continue;
                P = P * gens[i].pow(e);
                Np = Np * norms[i].pow(e);
            }
            CycElem q = r / Np;
            if (q.is_rational() && q.rational_value() > 0) {
                if (auto z = rational_norm_preimage(q.rational_value(), C)) {
                    CycElem w = P * *z;
                    if (w * w.conj() == r) {
                        res.verdict = Verdict::Equal;
                        res.w = w;
                        return res;
                    }
                }
            }
        }
        int i = 0;
        while (i < t && idx[i] == span - 1) idx[i++] = 0;
        if (i == t) break;
        ++idx[i];
    }
    res.witness = "no certificate within search bounds";
    if (!sym.undetermined.empty()) res.witness += "; undetermined primes present";
    return res;
}

inline bool is_arithmetic(const WeightTuple& mu)
{
    auto sp = signature_spectrum(dm_hermitian(require_ball(mu)));
    for (const auto& [k, s] : sp.at)
        if (k != 1 && !s.definite()) return false;
    return true;
}

inline int trace_field_conductor(const WeightTuple& mu)
{
    if (mu.n() < 2) throw DimensionTooSmall();
    return mu.conductor();
}

// det S up to the sign (-1)^{m/2}: the class of det H after removing the multiplier power
inline CycElem normalized_det(const WeightTuple& mu)
{
    return determinant(gram_lf(mu).a);
}

enum class Answer
{
    Yes,
    No,
    Unknown
};

inline const char* to_string(Answer a)
{
    switch (a) {
    case Answer::Yes: return "Yes";
    case Answer::No: return "No";
    default: return "Unknown";
    }
}

struct FormComparison
{
    Answer answer = Answer::Unknown;
    std::optional<CycElem> w;
    std::string witness;
};

inline void check_same_field(const HermitianMatrix& H1, const HermitianMatrix& H2)
{
    if (H1.conductor() != H2.conductor() || H1.size() != H2.size()) throw ConductorMismatch();
}

inline FormComparison from_det_class(const DetClassResult& r)
{
    FormComparison f;
    f.w = r.w;
    f.witness = r.witness;
    f.answer = r.verdict == Verdict::Equal ? Answer::Yes : r.verdict == Verdict::Distinct ? Answer::No : Answer::Unknown;
    return f;
}

inline FormComparison isometric(const HermitianMatrix& H1, const HermitianMatrix& H2, std::vector<CycElem> hints = {})
{
    check_same_field(H1, H2);
    auto s1 = signature_spectrum(H1), s2 = signature_spectrum(H2);
    for (const auto& [k, s] : s1.at) {
        if (!(s == s2.at.at(k))) {
            FormComparison f;
            f.answer = Answer::No;
            f.witness = "signatures differ at embedding " + std::to_string(k);
            return f;
        }
    }
    return from_det_class(det_class_equal(determinant(H1), determinant(H2), std::move(hints)));
}

inline FormComparison conformal(const HermitianMatrix& H1, const HermitianMatrix& H2, std::vector<CycElem> hints = {})
{
    check_same_field(H1, H2);
    auto s1 = signature_spectrum(H1), s2 = signature_spectrum(H2);
    for (const auto& [k, s] : s1.at) {
        const auto& t = s2.at.at(k);
        if (!(s == t || s == t.flipped())) {
            FormComparison f;
            f.answer = Answer::No;
            f.witness = "signatures differ up to sign at embedding " + std::to_string(k);
            return f;
        }
    }
    if (H1.size() % 2 == 1) {
        FormComparison f;
        f.answer = Answer::Yes;
        f.witness = "odd rank";
        return f;
    }
    return from_det_class(det_class_equal(determinant(H1), determinant(H2), std::move(hints)));
}

}  // namespace dmc
