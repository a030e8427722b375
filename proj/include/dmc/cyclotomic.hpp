#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dmc
{

using Integer = mpz_class;
using Rational = mpq_class;

struct DivisionByZero : std::domain_error
{
    DivisionByZero() : std::domain_error("division by zero in cyclotomic field") {}
};

struct NonUnitExponent : std::domain_error
{
    explicit NonUnitExponent(long k, int c)
        : std::domain_error("exponent " + std::to_string(k) + " is not a unit mod " + std::to_string(c))
    {
    }
};

struct InvalidConductor : std::invalid_argument
{
    using std::invalid_argument::invalid_argument;
};

enum class Sign
{
    Negative = -1,
    Zero = 0,
    Positive = 1
};

inline const char* to_string(Sign s)
{
    switch (s) {
    case Sign::Negative: return "Negative";
    case Sign::Zero: return "Zero";
    default: return "Positive";
    }
}

inline int canonical_conductor(int d)
{
    if (d < 1) throw InvalidConductor("conductor must be positive");
    return d % 4 == 2 ? d / 2 : d;
}

inline long mod_floor(long a, long m)
{
    long r = a % m;
    return r < 0 ? r + m : r;
}

inline std::vector<int> prime_factors(int n)
{
    std::vector<int> ps;
    for (int p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            ps.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) ps.push_back(n);
    return ps;
}

inline int euler_phi(int n)
{
    int r = n;
    for (int p : prime_factors(n)) r = r / p * (p - 1);
    return r;
}

inline int mobius(int n)
{
    int r = 1;
    for (int p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            n /= p;
            if (n % p == 0) return 0;
            r = -r;
        }
    }
    if (n > 1) r = -r;
    return r;
}

// p-adic valuation of n > 0
inline int vp(long n, int p)
{
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

// multiplicative order of a mod m (gcd(a,m) = 1, m >= 1)
inline int mult_order(long a, long m)
{
    if (m == 1) return 1;
    long x = mod_floor(a, m);
    long y = x;
    int k = 1;
    while (y != 1) {
        y = y * x % m;
        ++k;
    }
    return k;
}

// smallest positive representatives of (Z/c)^x / {+-1}, ascending
inline std::vector<int> embedding_representatives(int c)
{
    std::vector<int> ks;
    if (c <= 2) return {1};
    for (int k = 1; 2 * k <= c; ++k)
        if (std::gcd(k, c) == 1) ks.push_back(k);
    return ks;
}

namespace detail
{

using Poly = std::vector<Rational>;

inline void trim(Poly& p)
{
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline Poly poly_mul(const Poly& a, const Poly& b)
{
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    trim(r);
    return r;
}

inline Poly poly_sub(const Poly& a, const Poly& b)
{
    Poly r(std::max(a.size(), b.size()), Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    trim(r);
    return r;
}

// a = q*b + r
inline void poly_divmod(const Poly& a, const Poly& b, Poly& q, Poly& r)
{
    if (b.empty()) throw DivisionByZero();
    r = a;
    trim(r);
    q.assign(r.size() >= b.size() ? r.size() - b.size() + 1 : 0, Rational(0));
    const Rational& lead = b.back();
    while (!r.empty() && r.size() >= b.size()) {
        std::size_t shift = r.size() - b.size();
        Rational t = r.back() / lead;
        q[shift] = t;
        for (std::size_t j = 0; j < b.size(); ++j) r[shift + j] -= t * b[j];
        trim(r);
    }
    trim(q);
}

inline Poly cyclotomic_poly(int d)
{
    Poly num{Rational(1)}, den{Rational(1)};
    for (int e = 1; e <= d; ++e) {
        if (d % e) continue;
        int mu = mobius(d / e);
        if (mu == 0) continue;
        Poly f(e + 1, Rational(0));
        f[0] = -1;
        f[e] = 1;
        (mu > 0 ? num : den) = poly_mul(mu > 0 ? num : den, f);
    }
    Poly q, r;
    poly_divmod(num, den, q, r);
    if (!r.empty()) throw std::logic_error("cyclotomic polynomial division not exact");
    return q;
}

struct FieldData
{
    int c = 1;
    int phi = 1;
    Poly Phi;                                // monic, degree phi
    std::vector<std::vector<Rational>> power;  // power[e] = zeta^e reduced, e in [0,c)
    std::vector<std::vector<long>> ipower;     // same, integer coefficients
};

inline void reduce_in_place(Poly& p, const FieldData& F)
{
    int phi = F.phi;
    for (int i = static_cast<int>(p.size()) - 1; i >= phi; --i) {
        if (p[i] == 0) continue;
        Rational t = p[i];
        for (int j = 0; j <= phi; ++j) p[i - phi + j] -= t * F.Phi[j];
    }
    p.resize(phi, Rational(0));
}

inline std::unique_ptr<FieldData> build_field(int c)
{
    auto F = std::make_unique<FieldData>();
    F->c = c;
    F->phi = euler_phi(c);
    F->Phi = cyclotomic_poly(c);
    F->power.resize(c);
    F->ipower.resize(c);
    for (int e = 0; e < c; ++e) {
        Poly p(std::max(e + 1, F->phi), Rational(0));
        p[e] = 1;
        reduce_in_place(p, *F);
        F->power[e] = p;
        F->ipower[e].resize(F->phi);
        for (int j = 0; j < F->phi; ++j) F->ipower[e][j] = p[j].get_num().get_si();
    }
    return F;
}

// write-once table per canonical conductor
inline const FieldData& field(int c)
{
    static std::mutex mtx;
    static std::map<int, std::unique_ptr<FieldData>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(c);
    if (it == cache.end()) it = cache.emplace(c, build_field(c)).first;
    return *it->second;
}

inline std::string rational_str(const Rational& q)
{
    return q.get_den() == 1 ? q.get_num().get_str() : q.get_num().get_str() + "/" + q.get_den().get_str();
}

}  // namespace detail

class CycElem
{
public:
    CycElem() : c_(1), v_(1, Rational(0)) {}

    static CycElem rational(const Rational& q, int c = 1)
    {
        c = canonical_conductor(c);
        CycElem x;
        x.c_ = c;
        x.v_.assign(euler_phi(c), Rational(0));
        x.v_[0] = q;
        return x;
    }

    // element sum_j v[j] zeta_c^j for canonical c, v of length phi(c)
    static CycElem from_coeffs(int c, std::vector<Rational> v)
    {
        if (canonical_conductor(c) != c) throw InvalidConductor("coefficients require a canonical conductor");
        if (static_cast<int>(v.size()) != euler_phi(c)) throw std::invalid_argument("coefficient vector has wrong length");
        CycElem x;
        x.c_ = c;
        x.v_ = std::move(v);
        return x;
    }

    // zeta_d^a for any d >= 1
    static CycElem root(int d, long a)
    {
        if (d < 1) throw InvalidConductor("conductor must be positive");
        long e = mod_floor(a, d);
        int c = canonical_conductor(d);
        if (c == d) {
            const auto& F = detail::field(c);
            return from_coeffs(c, F.power[e]);
        }
        // d = 2c with c odd: zeta_d = -zeta_c^((c+1)/2)
        long ec = mod_floor(e * ((c + 1) / 2), c);
        CycElem x = from_coeffs(c, detail::field(c).power[ec]);
        return e % 2 ? -x : x;
    }

    int conductor() const { return c_; }
    const std::vector<Rational>& coeffs() const { return v_; }

    bool is_zero() const
    {
        return std::all_of(v_.begin(), v_.end(), [](const Rational& q) { return q == 0; });
    }

    bool is_rational() const
    {
        return std::all_of(v_.begin() + 1, v_.end(), [](const Rational& q) { return q == 0; });
    }

    Rational rational_value() const
    {
        if (!is_rational()) throw std::domain_error("element is not rational");
        return v_[0];
    }

    CycElem lift(int D) const
    {
        D = canonical_conductor(D);
        if (D == c_) return *this;
        if (D % c_) throw InvalidConductor("lift target is not a multiple of the conductor");
        const auto& F = detail::field(D);
        std::vector<Rational> r(F.phi, Rational(0));
        int step = D / c_;
        for (std::size_t j = 0; j < v_.size(); ++j) {
            if (v_[j] == 0) continue;
            const auto& pw = F.power[(j * step) % D];
            for (int i = 0; i < F.phi; ++i)
                if (pw[i] != 0) r[i] += v_[j] * pw[i];
        }
        return from_coeffs(D, std::move(r));
    }

    CycElem galois(long k) const
    {
        if (std::gcd(mod_floor(k, c_), static_cast<long>(c_)) != 1 && c_ > 1) throw NonUnitExponent(k, c_);
        const auto& F = detail::field(c_);
        std::vector<Rational> r(F.phi, Rational(0));
        for (std::size_t j = 0; j < v_.size(); ++j) {
            if (v_[j] == 0) continue;
            const auto& pw = F.power[mod_floor(static_cast<long>(j) * k, c_)];
            for (int i = 0; i < F.phi; ++i)
                if (pw[i] != 0) r[i] += v_[j] * pw[i];
        }
        return from_coeffs(c_, std::move(r));
    }

    CycElem conj() const { return galois(-1); }

    bool is_real() const { return *this == conj(); }

    CycElem inverse() const
    {
        if (is_zero()) throw DivisionByZero();
        const auto& F = detail::field(c_);
        // extended gcd: s*a + t*Phi = g, g constant
        detail::Poly a = v_;
        detail::trim(a);
        detail::Poly r0 = F.Phi, r1 = a;
        detail::Poly s0{}, s1{Rational(1)};
        while (r1.size() > 1) {
            detail::Poly q, r;
            detail::poly_divmod(r0, r1, q, r);
            detail::Poly s2 = detail::poly_sub(s0, detail::poly_mul(q, s1));
            r0 = std::move(r1);
            r1 = std::move(r);
            s0 = std::move(s1);
            s1 = std::move(s2);
        }
        if (r1.empty()) throw std::logic_error("cyclotomic polynomial shares a factor with a nonzero element");
        Rational g = r1[0];
        std::vector<Rational> out(F.phi, Rational(0));
        detail::Poly s = s1;
        if (static_cast<int>(s.size()) > F.phi) detail::reduce_in_place(s, F);
        for (std::size_t i = 0; i < s.size() && static_cast<int>(i) < F.phi; ++i) out[i] = s[i] / g;
        return from_coeffs(c_, std::move(out));
    }

    friend CycElem operator+(const CycElem& x, const CycElem& y)
    {
        int D = std::lcm(x.c_, y.c_);
        CycElem a = x.lift(D), b = y.lift(D);
        for (std::size_t i = 0; i < a.v_.size(); ++i) a.v_[i] += b.v_[i];
        return a;
    }

    friend CycElem operator-(const CycElem& x, const CycElem& y)
    {
        int D = std::lcm(x.c_, y.c_);
        CycElem a = x.lift(D), b = y.lift(D);
        for (std::size_t i = 0; i < a.v_.size(); ++i) a.v_[i] -= b.v_[i];
        return a;
    }

    CycElem operator-() const
    {
        CycElem a = *this;
        for (auto& q : a.v_) q = -q;
        return a;
    }

    friend CycElem operator*(const CycElem& x, const CycElem& y)
    {
        int D = std::lcm(x.c_, y.c_);
        CycElem a = x.lift(D), b = y.lift(D);
        const auto& F = detail::field(D);
        detail::Poly p(2 * F.phi - 1, Rational(0));
        for (int i = 0; i < F.phi; ++i) {
            if (a.v_[i] == 0) continue;
            for (int j = 0; j < F.phi; ++j)
                if (b.v_[j] != 0) p[i + j] += a.v_[i] * b.v_[j];
        }
        detail::reduce_in_place(p, F);
        return from_coeffs(D, std::move(p));
    }

    friend CycElem operator*(const Rational& q, const CycElem& x)
    {
        CycElem a = x;
        for (auto& v : a.v_) v *= q;
        return a;
    }

    friend CycElem operator/(const CycElem& x, const CycElem& y) { return x * y.inverse(); }

    CycElem& operator+=(const CycElem& y) { return *this = *this + y; }
    CycElem& operator-=(const CycElem& y) { return *this = *this - y; }
    CycElem& operator*=(const CycElem& y) { return *this = *this * y; }

    CycElem pow(long e) const
    {
        CycElem base = e < 0 ? inverse() : *this;
        unsigned long n = e < 0 ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
        CycElem r = rational(1, c_);
        while (n) {
            if (n & 1) r = r * base;
            base = base * base;
            n >>= 1;
        }
        return r;
    }

    friend bool operator==(const CycElem& x, const CycElem& y)
    {
        if (x.c_ == y.c_) return x.v_ == y.v_;
        int D = std::lcm(x.c_, y.c_);
        return x.lift(D).v_ == y.lift(D).v_;
    }
    friend bool operator!=(const CycElem& x, const CycElem& y) { return !(x == y); }

    // complex value under zeta_c -> exp(2 pi i k / c); low precision, for diagnostics and search heuristics
    std::complex<long double> embed(long k = 1) const
    {
        const long double tau = 2.0L * 3.14159265358979323846264338327950288L;
        std::complex<long double> s = 0;
        for (std::size_t j = 0; j < v_.size(); ++j) {
            if (v_[j] == 0) continue;
            long t = mod_floor(static_cast<long>(j) * k, c_);
            long double ang = tau * static_cast<long double>(t) / c_;
            s += static_cast<long double>(v_[j].get_d()) * std::complex<long double>(std::cos(ang), std::sin(ang));
        }
        return s;
    }

    std::string to_string() const
    {
        std::ostringstream os;
        os << c_ << ":[";
        for (std::size_t i = 0; i < v_.size(); ++i) os << (i ? "," : "") << detail::rational_str(v_[i]);
        os << "]";
        return os.str();
    }

    static CycElem parse(const std::string& s)
    {
        auto colon = s.find(':');
        auto lb = s.find('[');
        auto rb = s.rfind(']');
        if (colon == std::string::npos || lb == std::string::npos || rb == std::string::npos || lb > rb)
            throw std::invalid_argument("malformed cyclotomic element: " + s);
        int c = std::stoi(s.substr(0, colon));
        std::vector<Rational> v;
        std::string body = s.substr(lb + 1, rb - lb - 1);
        std::stringstream ss(body);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            Rational q(tok);
            q.canonicalize();
            v.push_back(q);
        }
        return from_coeffs(c, std::move(v));
    }

private:
    int c_;
    std::vector<Rational> v_;
};

inline CycElem cyc(int d, long a)
{
    if (canonical_conductor(d) <= 2) throw InvalidConductor("conductor " + std::to_string(d) + " too small: zeta - zeta^-1 vanishes");
    return CycElem::root(d, a);
}

inline CycElem one_minus_root(int d, long a)
{
    CycElem z = CycElem::root(d, a);
    return CycElem::rational(1, z.conductor()) - z;
}

// N_{K/Q}(x) as the product of all Galois conjugates
inline Rational field_norm(const CycElem& x)
{
    int c = x.conductor();
    CycElem p = CycElem::rational(1, c);
    for (int k = 1; k <= std::max(c, 1); ++k)
        if (std::gcd(k, c) == 1) p = p * x.galois(k);
    return p.rational_value();
}

namespace detail
{

class Interval
{
public:
    explicit Interval(mpfr_prec_t prec)
    {
        mpfr_init2(lo, prec);
        mpfr_init2(hi, prec);
        mpfr_set_zero(lo, 1);
        mpfr_set_zero(hi, 1);
    }
    ~Interval()
    {
        mpfr_clear(lo);
        mpfr_clear(hi);
    }
    Interval(const Interval&) = delete;
    Interval& operator=(const Interval&) = delete;

    mpfr_t lo, hi;
};

// enclosure of cos(2 pi t / c), 0 <= t < c
inline void cos_enclosure(Interval& out, long t, long c, const Interval& pi)
{
    if (t == 0) {
        mpfr_set_si(out.lo, 1, MPFR_RNDD);
        mpfr_set_si(out.hi, 1, MPFR_RNDU);
        return;
    }
    if (2 * t == c) {
        mpfr_set_si(out.lo, -1, MPFR_RNDD);
        mpfr_set_si(out.hi, -1, MPFR_RNDU);
        return;
    }
    if (4 * t == c || 4 * t == 3 * c) {
        mpfr_set_zero(out.lo, 1);
        mpfr_set_zero(out.hi, 1);
        return;
    }
    long s = std::min(t, c - t);
    mpfr_prec_t prec = mpfr_get_prec(out.lo);
    Interval th(prec);
    mpfr_mul_ui(th.lo, pi.lo, 2 * s, MPFR_RNDD);
    mpfr_div_ui(th.lo, th.lo, c, MPFR_RNDD);
    mpfr_mul_ui(th.hi, pi.hi, 2 * s, MPFR_RNDU);
    mpfr_div_ui(th.hi, th.hi, c, MPFR_RNDU);
    // cos decreasing on [0, pi]
    mpfr_cos(out.lo, th.hi, MPFR_RNDD);
    mpfr_cos(out.hi, th.lo, MPFR_RNDU);
}

// out = [q] * x, directed rounding
inline void scale_enclosure(Interval& out, const Rational& q, const Interval& x)
{
    mpfr_prec_t prec = mpfr_get_prec(out.lo);
    Interval qi(prec);
    mpfr_set_q(qi.lo, q.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(qi.hi, q.get_mpq_t(), MPFR_RNDU);
    mpfr_t p;
    mpfr_init2(p, prec);
    bool first = true;
    for (auto a : {qi.lo, qi.hi}) {
        for (auto b : {x.lo, x.hi}) {
            mpfr_mul(p, a, b, MPFR_RNDD);
            if (first || mpfr_less_p(p, out.lo)) mpfr_set(out.lo, p, MPFR_RNDD);
            mpfr_mul(p, a, b, MPFR_RNDU);
            if (first || mpfr_greater_p(p, out.hi)) mpfr_set(out.hi, p, MPFR_RNDU);
            first = false;
        }
    }
    mpfr_clear(p);
}

}  // namespace detail

// enclosure of the real part of sigma_k(x) at the given precision
inline void real_enclosure(detail::Interval& sum, const CycElem& x, long k)
{
    mpfr_prec_t prec = mpfr_get_prec(sum.lo);
    long c = x.conductor();
    detail::Interval pi(prec), cs(prec), term(prec);
    mpfr_const_pi(pi.lo, MPFR_RNDD);
    mpfr_const_pi(pi.hi, MPFR_RNDU);
    mpfr_set_zero(sum.lo, 1);
    mpfr_set_zero(sum.hi, 1);
    const auto& v = x.coeffs();
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (v[j] == 0) continue;
        detail::cos_enclosure(cs, mod_floor(static_cast<long>(j) * k, c), c, pi);
        detail::scale_enclosure(term, v[j], cs);
        mpfr_add(sum.lo, sum.lo, term.lo, MPFR_RNDD);
        mpfr_add(sum.hi, sum.hi, term.hi, MPFR_RNDU);
    }
}

inline Sign certified_sign(const CycElem& x, long k)
{
    int c = x.conductor();
    if (c > 1 && std::gcd(mod_floor(k, c), static_cast<long>(c)) != 1) throw NonUnitExponent(k, c);
    if (x.is_zero()) return Sign::Zero;
    if (!x.is_real()) throw std::domain_error("certified_sign needs a real element");
    for (mpfr_prec_t prec = 64;; prec *= 2) {
        detail::Interval s(prec);
        real_enclosure(s, x, k);
        if (mpfr_sgn(s.lo) > 0) return Sign::Positive;
        if (mpfr_sgn(s.hi) < 0) return Sign::Negative;
    }
}

}  // namespace dmc
