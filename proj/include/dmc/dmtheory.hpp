#pragma once

#include "dmc/hermitian.hpp"

#include <json.hpp>

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace dmc
{

struct InvalidTuple : std::invalid_argument
{
    using std::invalid_argument::invalid_argument;
};
struct DegenerateForm : std::domain_error
{
    DegenerateForm() : std::domain_error("intersection form is degenerate") {}
};
struct IntegralSum : std::domain_error
{
    IntegralSum() : std::domain_error("merged weights have integral sum") {}
};
struct IndexOutOfRange : std::out_of_range
{
    using std::out_of_range::out_of_range;
};
struct ZeroLeadCoefficient : std::domain_error
{
    ZeroLeadCoefficient() : std::domain_error("last relation coefficient vanishes") {}
};
struct TrivialMonodromy : std::domain_error
{
    TrivialMonodromy() : std::domain_error("local monodromy angle is integral") {}
};
struct SumNotTwo : std::domain_error
{
    using std::domain_error::domain_error;
};

// weights a_i/d, stored in lowest terms and in the given order.
// Sum of a_i must be a multiple of d; ball tuples have sum exactly 2d.
class WeightTuple
{
public:
    WeightTuple() = default;

    WeightTuple(std::vector<int> a, int d) : a_(std::move(a)), d_(d)
    {
        if (d_ < 1) throw InvalidTuple("denominator must be positive");
        if (a_.size() < 3) throw InvalidTuple("need at least three weights");
        long sum = 0;
        int g = d_;
        for (int x : a_) {
            if (x <= 0 || x >= d_) throw InvalidTuple("numerator " + std::to_string(x) + " outside (0, d)");
            sum += x;
            g = std::gcd(g, x);
        }
        if (sum % d_) throw InvalidTuple("weights do not sum to an integer");
        for (int& x : a_) x /= g;
        d_ /= g;
        if (d_ < 3) throw InvalidTuple("denominator below 3 after reduction");
    }

    static WeightTuple parse(const std::string& s)
    {
        auto slash = s.find('/');
        if (slash == std::string::npos) throw InvalidTuple("tuple literal needs a1,...,ak/d: " + s);
        std::vector<int> a;
        std::string body = s.substr(0, slash);
        std::replace(body.begin(), body.end(), '-', ',');
        std::stringstream ss(body);
        std::string tok;
        try {
            while (std::getline(ss, tok, ',')) {
                if (tok.empty()) continue;
                a.push_back(std::stoi(tok));
            }
            return WeightTuple(std::move(a), std::stoi(s.substr(slash + 1)));
        } catch (const std::logic_error& e) {
            if (dynamic_cast<const InvalidTuple*>(&e)) throw;
            throw InvalidTuple("malformed tuple literal: " + s);
        }
    }

    const std::vector<int>& numerators() const { return a_; }
    int denominator() const { return d_; }
    int size() const { return static_cast<int>(a_.size()); }
    int n() const { return size() - 3; }
    int conductor() const { return canonical_conductor(d_); }
    long total() const { return std::accumulate(a_.begin(), a_.end(), 0L); }
    bool is_ball() const { return total() == 2L * d_; }
    Rational weight(int i) const { return Rational(a_.at(i), d_); }

    WeightTuple sorted() const
    {
        auto b = a_;
        std::sort(b.begin(), b.end());
        return WeightTuple(b, d_);
    }

    WeightTuple permuted(const std::vector<int>& order) const
    {
        std::vector<int> b;
        for (int i : order) b.push_back(a_.at(i));
        return WeightTuple(b, d_);
    }

    std::string to_string() const
    {
        std::string r;
        for (std::size_t i = 0; i < a_.size(); ++i) r += (i ? "," : "") + std::to_string(a_[i]);
        return r + "/" + std::to_string(d_);
    }

    friend bool operator==(const WeightTuple&, const WeightTuple&) = default;
    friend bool operator<(const WeightTuple& x, const WeightTuple& y)
    {
        return std::tie(x.d_, x.a_) < std::tie(y.d_, y.a_);
    }

private:
    std::vector<int> a_;
    int d_ = 3;
};

inline WeightTuple require_ball(const WeightTuple& mu)
{
    if (!mu.is_ball()) throw InvalidTuple("weights must sum to 2: " + mu.to_string());
    return mu;
}

inline std::vector<CycElem> alphas(const WeightTuple& mu)
{
    std::vector<CycElem> r;
    for (int a : mu.numerators()) r.push_back(CycElem::root(mu.denominator(), a));
    return r;
}

// pairing h(x, y) = x^T S conj(y), linear in the first slot
inline CycElem pairing(const std::vector<CycElem>& x, const Mat& S, const std::vector<CycElem>& y)
{
    CycElem s = CycElem::rational(0, S.empty() ? 1 : S[0][0].conductor());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i].is_zero()) continue;
        for (std::size_t j = 0; j < y.size(); ++j)
            if (!y[j].is_zero() && !S[i][j].is_zero()) s += x[i] * S[i][j] * y[j].conj();
    }
    return s;
}

inline Mat transpose(const Mat& a)
{
    std::size_t n = a.size(), m = n ? a[0].size() : 0;
    Mat r(m, std::vector<CycElem>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) r[j][i] = a[i][j];
    return r;
}

inline Mat conjugate(const Mat& a)
{
    Mat r = a;
    for (auto& row : r)
        for (auto& x : row) x = x.conj();
    return r;
}

// T preserves the form iff T^T S conj(T) = S
inline bool preserves_form(const Mat& T, const Mat& S)
{
    return mat_equal(mat_mul(transpose(T), mat_mul(S, conjugate(T))), S);
}

inline CycElem self_pairing_formula(const CycElem& a, const CycElem& b)
{
    CycElem one = CycElem::rational(1, a.conductor());
    return (one - a * b) / ((one - a) * (one - b));
}

inline CycElem adjacent_pairing_formula(const CycElem& b)
{
    CycElem one = CycElem::rational(1, b.conductor());
    return one / (b - one);
}

inline SkewHermitianMatrix gram_lf(const WeightTuple& mu)
{
    const int m = mu.n() + 1;
    const int c = mu.conductor();
    auto al = alphas(mu);
    SkewHermitianMatrix S{mu.denominator(), zero_matrix(m, c)};
    for (int i = 0; i < m; ++i) {
        S.a[i][i] = self_pairing_formula(al[i], al[i + 1]);
        if (i + 1 < m) {
            S.a[i][i + 1] = adjacent_pairing_formula(al[i + 1]);
            S.a[i + 1][i] = -S.a[i][i + 1].conj();
        }
    }
    if (rank(S.a) < m) throw DegenerateForm();
    return S;
}

inline HermitianMatrix dm_hermitian(const WeightTuple& mu)
{
    return scale_to_hermitian(gram_lf(mu));
}

inline CycElem closed_form_det(const WeightTuple& mu)
{
    CycElem p = CycElem::rational(1, mu.conductor());
    for (const auto& a : alphas(mu)) p *= CycElem::rational(1, mu.conductor()) - a;
    return p.inverse();
}

struct MergeResult
{
    WeightTuple reordered;  // (a_i, a_j, rest...)
    WeightTuple merged;     // (a_i + a_j mod d, rest...)
    CycElem c;              // self-pairing of the split-off vector
};

inline MergeResult merge(const WeightTuple& mu, int i, int j)
{
    const int k = mu.size();
    if (i < 0 || j < 0 || i >= k || j >= k || i == j) throw IndexOutOfRange("merge indices out of range");
    if (mu.n() < 1) throw InvalidTuple("merge needs at least four weights");
    const int d = mu.denominator();
    const auto& a = mu.numerators();
    if ((a[i] + a[j]) % d == 0) throw IntegralSum();
    std::vector<int> order{i, j};
    for (int t = 0; t < k; ++t)
        if (t != i && t != j) order.push_back(t);
    std::vector<int> merged{(a[i] + a[j]) % d};
    for (int t = 2; t < k; ++t) merged.push_back(a[order[t]]);
    CycElem ai = CycElem::root(d, a[i]), aj = CycElem::root(d, a[j]);
    return {mu.permuted(order), WeightTuple(merged, d), self_pairing_formula(ai, aj)};
}

// c_i = 1 - prod_{j <= i} alpha_j^{-1}, i = 0 .. n+1
inline std::vector<CycElem> relation_coefficients(const WeightTuple& mu)
{
    auto al = alphas(mu);
    const int c = mu.conductor();
    std::vector<CycElem> r;
    CycElem p = CycElem::rational(1, c);
    for (int i = 0; i <= mu.n() + 1; ++i) {
        p *= al[i].conj();
        r.push_back(CycElem::rational(1, c) - p);
    }
    if (r.back().is_zero()) throw ZeroLeadCoefficient();
    return r;
}

// coordinates of omega_{n+2} in the basis omega_1 .. omega_{n+1}
inline std::vector<CycElem> dependent_vector(const WeightTuple& mu)
{
    auto cs = relation_coefficients(mu);
    CycElem f = -cs.back().inverse();
    std::vector<CycElem> v;
    for (std::size_t i = 0; i + 1 < cs.size(); ++i) v.push_back(f * cs[i]);
    return v;
}

// T_{i,i+1} for 0 <= i <= n+1; column j holds the image of omega_j
inline Mat adjacent_monodromy(const WeightTuple& mu, int i)
{
    const int m = mu.n() + 1;
    if (i < 0 || i > m) throw IndexOutOfRange("monodromy index out of range");
    const int c = mu.conductor();
    auto al = alphas(mu);
    const CycElem one = CycElem::rational(1, c);
    // images of omega_0 .. omega_m in coordinates of omega_0 .. omega_m (omega_m dependent)
    Mat big = identity_matrix(m + 1, c);
    big[i][i] = al[i] * al[i + 1];
    if (i >= 1) big[i][i - 1] = one - al[i + 1];
    if (i + 1 <= m) big[i][i + 1] = al[i + 1] - al[i] * al[i + 1];
    auto w = dependent_vector(mu);
    Mat T = zero_matrix(m, c);
    for (int col = 0; col < m; ++col) {
        for (int row = 0; row < m; ++row) T[row][col] = big[row][col];
        const CycElem& extra = big[m][col];
        if (extra.is_zero()) continue;
        for (int row = 0; row < m; ++row) T[row][col] += extra * w[row];
    }
    return T;
}

enum class LocalKind
{
    VerticalLine,
    DegreeTwoRamification,
    Nodal,
    VerticalTacnode,
    NonVerticalTacnode
};

struct LocalModel
{
    LocalKind kind = LocalKind::VerticalLine;
    int p = 0;  // a0 or a1 depending on kind
    int q = 0;  // a1 or a2, unused for one-parameter kinds

    Rational angle(int d) const
    {
        switch (kind) {
        case LocalKind::VerticalLine: return Rational(-p, d);
        case LocalKind::DegreeTwoRamification: return Rational(1, 2) - Rational(p, d);
        case LocalKind::Nodal: return Rational(-(p + q), d);
        case LocalKind::VerticalTacnode: return Rational(1, 2) - Rational(p + q, d);
        default: return Rational(-2 * (p + q), d);
        }
    }
};

inline Rational frac(const Rational& x)
{
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    Rational r = x - Rational(f);
    r.canonicalize();
    return r;
}

inline Rational weight_of_angle(const Rational& angle)
{
    Rational w = frac(angle);
    if (w == 0) throw TrivialMonodromy();
    return w;
}

inline Rational local_weight(const LocalModel& model, int d)
{
    return weight_of_angle(model.angle(d));
}

// several local models meeting over one point multiply their monodromies
struct DiscriminantPoint
{
    int count = 1;
    std::vector<LocalModel> models;

    Rational weight(int d) const
    {
        Rational a = 0;
        for (const auto& m : models) a += m.angle(d);
        return weight_of_angle(a);
    }
};

struct Divisor
{
    int p = 0, q = 0, a = 0;
};

struct Configuration
{
    std::string type;
    std::string case_id;
    int d = 0;
    std::vector<Divisor> divisors;
    std::vector<DiscriminantPoint> disc1, disc2;

    void validate() const
    {
        int sp = 0, sq = 0, wp = 0, wq = 0;
        for (const auto& D : divisors) {
            if (D.a <= 0 || D.a >= d) throw std::invalid_argument("divisor weight outside (0, d)");
            sp += D.p;
            sq += D.q;
            wp += D.a * D.p;
            wq += D.a * D.q;
        }
        if (sp != 3 || sq != 3) throw std::invalid_argument("divisor bidegrees do not sum to (3,3)");
        if (wp != d || wq != d) throw std::invalid_argument("weighted bidegrees do not sum to (d,d)");
    }

    static LocalModel model_from_json(const nlohmann::json& j)
    {
        const std::string k = j.at("kind");
        if (k == "VerticalLine") return {LocalKind::VerticalLine, j.at("a0").get<int>(), 0};
        if (k == "DegreeTwoRamification") return {LocalKind::DegreeTwoRamification, j.at("a1").get<int>(), 0};
        if (k == "Nodal") return {LocalKind::Nodal, j.at("a1").get<int>(), j.at("a2").get<int>()};
        if (k == "VerticalTacnode") return {LocalKind::VerticalTacnode, j.at("a0").get<int>(), j.at("a1").get<int>()};
        if (k == "NonVerticalTacnode") return {LocalKind::NonVerticalTacnode, j.at("a0").get<int>(), j.at("a1").get<int>()};
        throw std::invalid_argument("unknown local model " + k);
    }

    static Configuration from_json(const nlohmann::json& j)
    {
        Configuration cfg;
        cfg.type = j.at("type");
        cfg.case_id = j.value("case", cfg.type);
        cfg.d = j.at("d");
        for (const auto& D : j.at("divisors")) {
            auto bd = D.at("bidegree");
            cfg.divisors.push_back({bd.at(0).get<int>(), bd.at(1).get<int>(), D.at("a").get<int>()});
        }
        for (auto [key, dst] : {std::pair{"disc1", &cfg.disc1}, std::pair{"disc2", &cfg.disc2}}) {
            for (const auto& P : j.at(key)) {
                DiscriminantPoint pt;
                pt.count = P.value("count", 1);
                for (const auto& M : P.at("models")) pt.models.push_back(model_from_json(M));
                dst->push_back(pt);
            }
        }
        cfg.validate();
        return cfg;
    }
};

enum class Projection
{
    First,
    Second
};

inline WeightTuple assemble_tuple(const Configuration& cfg, Projection proj)
{
    const auto& pts = proj == Projection::First ? cfg.disc1 : cfg.disc2;
    if (pts.empty()) throw std::invalid_argument("no discriminant data for projection");
    std::vector<int> a;
    Rational sum = 0;
    for (const auto& pt : pts) {
        Rational w = pt.weight(cfg.d);
        Rational num = w * cfg.d;
        if (num.get_den() != 1) throw SumNotTwo("weight not on the denominator grid");
        for (int t = 0; t < pt.count; ++t) {
            a.push_back(static_cast<int>(num.get_num().get_si()));
            sum += w;
        }
    }
    if (sum != 2) throw SumNotTwo("assembled weights sum to " + detail::rational_str(sum));
    std::sort(a.begin(), a.end());
    return WeightTuple(a, cfg.d);
}

}  // namespace dmc
