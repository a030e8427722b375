#pragma once

#include "dmc/dmtheory.hpp"

#include <deque>
#include <map>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace dmc
{

struct NoPairSummingToOne : std::domain_error
{
    NoPairSummingToOne() : std::domain_error("no pair of weights sums to 1") {}
};
struct RankDeficient : std::domain_error
{
    RankDeficient() : std::domain_error("word search found fewer than two independent translations") {}
};
struct NonCM : std::domain_error
{
    NonCM() : std::domain_error("lattice ratio generates a field of degree above 2") {}
};

struct CuspPartition
{
    std::vector<int> S1, S2;  // 0-based indices, ascending; S1 contains index 0
};

struct CuspEnumeration
{
    std::vector<CuspPartition> raw;
    int orbits = 0;
};

inline CuspEnumeration cusp_partitions(const WeightTuple& mu)
{
    require_ball(mu);
    const int k = mu.size(), d = mu.denominator();
    const auto& a = mu.numerators();
    CuspEnumeration out;
    std::set<std::pair<std::vector<int>, std::vector<int>>> shapes;
    for (unsigned mask = 1; mask < (1u << k); mask += 2) {
        CuspPartition P;
        int s = 0;
        for (int i = 0; i < k; ++i) {
            if (mask >> i & 1u) {
                P.S1.push_back(i);
                s += a[i];
            } else {
                P.S2.push_back(i);
            }
        }
        if (s != d || P.S1.size() < 2 || P.S2.size() < 2) continue;
        std::vector<int> w1, w2;
        for (int i : P.S1) w1.push_back(a[i]);
        for (int i : P.S2) w2.push_back(a[i]);
        std::sort(w1.begin(), w1.end());
        std::sort(w2.begin(), w2.end());
        if (w2 < w1) std::swap(w1, w2);
        shapes.insert({w1, w2});
        out.raw.push_back(std::move(P));
    }
    out.orbits = static_cast<int>(shapes.size());
    return out;
}

inline bool is_compact(const WeightTuple& mu) { return cusp_partitions(mu).raw.empty(); }

struct AffineMap
{
    CycElem linear;
    CycElem translation;

    AffineMap compose(const AffineMap& o) const  // (*this) after o
    {
        return {linear * o.linear, linear * o.translation + translation};
    }
    AffineMap inverse() const
    {
        CycElem li = linear.inverse();
        return {li, -(li * translation)};
    }
    CycElem operator()(const CycElem& x) const { return linear * x + translation; }
    std::string key() const { return linear.to_string() + "|" + translation.to_string(); }
};

struct TranslationLattice
{
    std::pair<int, int> pair;  // 0-based indices in the input tuple
    CycElem t1, t2;
    int word_length = 0;
};

// f and g for the tuple ordered with the cusp pair first
inline std::pair<AffineMap, AffineMap> boundary_generators(const WeightTuple& ordered)
{
    auto al = alphas(ordered);
    const int c = ordered.conductor();
    const CycElem one = CycElem::rational(1, c);
    CycElem a3i = al[2].conj(), a5i = al[4].conj();
    AffineMap f{a5i, -((one - al[3]) * (one - al[4]) / (one - a3i))};
    AffineMap g{a3i, CycElem::rational(0, c)};
    return {f, g};
}

namespace detail
{

// Z-basis of the span of integer row vectors (echelon form by gcd elimination)
inline std::vector<std::vector<Integer>> integer_row_basis(std::vector<std::vector<Integer>> rows)
{
    if (rows.empty()) return {};
    const std::size_t n = rows[0].size();
    std::vector<std::vector<Integer>> basis;
    std::size_t r = 0;
    for (std::size_t col = 0; col < n && r < rows.size(); ++col) {
        while (true) {
            std::size_t piv = rows.size();
            for (std::size_t i = r; i < rows.size(); ++i)
                if (rows[i][col] != 0 && (piv == rows.size() || abs(rows[i][col]) < abs(rows[piv][col]))) piv = i;
            if (piv == rows.size()) break;
            std::swap(rows[r], rows[piv]);
            bool clean = true;
            for (std::size_t i = r + 1; i < rows.size(); ++i) {
                if (rows[i][col] == 0) continue;
                Integer q;
                mpz_fdiv_q(q.get_mpz_t(), rows[i][col].get_mpz_t(), rows[r][col].get_mpz_t());
                for (std::size_t j = col; j < n; ++j) rows[i][j] -= q * rows[r][j];
                if (rows[i][col] != 0) clean = false;
            }
            if (clean) {
                ++r;
                break;
            }
        }
    }
    rows.resize(r);
    return rows;
}

}  // namespace detail

inline std::vector<CycElem> collect_translations(const AffineMap& f, const AffineMap& g, int max_len)
{
    const int c = f.linear.conductor();
    std::vector<AffineMap> gens{f, g, f.inverse(), g.inverse()};
    AffineMap id{CycElem::rational(1, c), CycElem::rational(0, c)};
    std::unordered_set<std::string> seen{id.key()};
    std::vector<AffineMap> frontier{id};
    std::vector<CycElem> out;
    std::unordered_set<std::string> tseen;
    for (int len = 1; len <= max_len; ++len) {
        std::vector<AffineMap> next;
        for (const auto& w : frontier)
            for (const auto& s : gens) {
                AffineMap v = s.compose(w);
                if (!seen.insert(v.key()).second) continue;
                if (v.linear == id.linear && !v.translation.is_zero() && tseen.insert(v.translation.to_string()).second)
                    out.push_back(v.translation);
                next.push_back(std::move(v));
            }
        frontier = std::move(next);
    }
    return out;
}

// Z-span of a list of field elements, as a basis
inline std::vector<CycElem> z_span_basis(const std::vector<CycElem>& xs, int c)
{
    std::vector<CycElem> lifted;
    for (const auto& x : xs) lifted.push_back(x.lift(c));
    Integer den = 1;
    for (const auto& x : lifted)
        for (const auto& q : x.coeffs()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den_mpz_t());
    std::vector<std::vector<Integer>> rows;
    for (const auto& x : lifted) {
        std::vector<Integer> r;
        for (const auto& q : x.coeffs()) {
            Rational s = q * Rational(den);
            r.push_back(s.get_num());
        }
        rows.push_back(r);
    }
    std::vector<CycElem> basis;
    for (const auto& row : detail::integer_row_basis(rows)) {
        std::vector<Rational> co;
        for (const auto& z : row) {
            Rational q(z, den);
            q.canonicalize();
            co.push_back(q);
        }
        basis.push_back(CycElem::from_coeffs(c, co));
    }
    return basis;
}

inline TranslationLattice boundary_lattice(const WeightTuple& mu, std::pair<int, int> pair, int max_len = 12)
{
    require_ball(mu);
    if (mu.n() != 2) throw std::invalid_argument("boundary lattice is implemented for five weights");
    auto [i, j] = pair;
    const auto& a = mu.numerators();
    if (i < 0 || j < 0 || i >= mu.size() || j >= mu.size() || i == j || a[i] + a[j] != mu.denominator())
        throw NoPairSummingToOne();
    std::vector<int> order{i, j};
    for (int t = 0; t < mu.size(); ++t)
        if (t != i && t != j) order.push_back(t);
    auto [f, g] = boundary_generators(mu.permuted(order));
    const int c = mu.conductor();
    for (int len = max_len; len <= 4 * max_len; len *= 2) {
        auto basis = z_span_basis(collect_translations(f, g, len), c);
        if (basis.size() > 2) throw std::domain_error("translations do not form a lattice");
        if (basis.size() == 2) return {pair, basis[0], basis[1], len};
    }
    throw RankDeficient();
}

inline TranslationLattice boundary_lattice(const WeightTuple& mu)
{
    const auto& a = mu.numerators();
    for (int i = 0; i < mu.size(); ++i)
        for (int j = i + 1; j < mu.size(); ++j)
            if (a[i] + a[j] == mu.denominator()) return boundary_lattice(mu, {i, j});
    throw NoPairSummingToOne();
}

// minimal polynomial over Q via the first linear dependence among powers
inline std::vector<Rational> minimal_polynomial(const CycElem& x)
{
    const int c = x.conductor();
    const int phi = euler_phi(c);
    std::vector<std::vector<Rational>> powers;
    CycElem p = CycElem::rational(1, c);
    for (int k = 0; k <= phi; ++k) {
        powers.push_back(p.coeffs());
        // solve sum_{i<k} u_i x^i = x^k
        if (k > 0) {
            const int rows = phi, cols = k;
            std::vector<std::vector<Rational>> M(rows, std::vector<Rational>(cols + 1));
            for (int r = 0; r < rows; ++r) {
                for (int i = 0; i < cols; ++i) M[r][i] = powers[i][r];
                M[r][cols] = powers[k][r];
            }
            int rank = 0;
            std::vector<int> pivcol;
            for (int col = 0; col < cols && rank < rows; ++col) {
                int piv = -1;
                for (int r = rank; r < rows; ++r)
                    if (M[r][col] != 0) {
                        piv = r;
                        break;
                    }
                if (piv < 0) continue;
                std::swap(M[piv], M[rank]);
                Rational inv = 1 / M[rank][col];
                for (auto& v : M[rank]) v *= inv;
                for (int r = 0; r < rows; ++r) {
                    if (r == rank || M[r][col] == 0) continue;
                    Rational fct = M[r][col];
                    for (int j = col; j <= cols; ++j) M[r][j] -= fct * M[rank][j];
                }
                pivcol.push_back(col);
                ++rank;
            }
            bool consistent = true;
            for (int r = rank; r < rows; ++r)
                if (M[r][cols] != 0) consistent = false;
            if (consistent && rank == cols) {
                std::vector<Rational> poly(k + 1, Rational(0));
                for (int r = 0; r < rank; ++r) poly[pivcol[r]] = -M[r][cols];
                poly[k] = 1;
                return poly;
            }
        }
        p = p * x;
    }
    throw std::logic_error("no minimal polynomial found");
}

inline Integer squarefree_part(Integer n)
{
    Integer sign = n < 0 ? -1 : 1;
    n = abs(n);
    Integer r = 1;
    for (unsigned long p = 2; p * p <= n; ++p) {
        int e = 0;
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
            ++e;
        }
        if (e % 2) r *= p;
    }
    return sign * r * n;
}

inline Integer fundamental_discriminant(const Integer& D)
{
    Integer d0 = squarefree_part(D);
    Integer m = d0 % 4;
    if (m < 0) m += 4;
    return m == 1 ? d0 : 4 * d0;
}

inline Integer cm_discriminant(const TranslationLattice& lat)
{
    CycElem tau = lat.t2 / lat.t1;
    auto poly = minimal_polynomial(tau);
    if (poly.size() == 2) throw RankDeficient();
    if (poly.size() > 3) throw NonCM();
    Rational disc = poly[1] * poly[1] - 4 * poly[0];
    if (disc >= 0) throw NonCM();
    Integer num = disc.get_num() * disc.get_den();
    return fundamental_discriminant(num);
}

}  // namespace dmc
