#include "dmc/dmc.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

using namespace dmc;

namespace
{

using Split = std::set<std::set<int>>;

// all splits into two parts of weight one, and their orbits under weight-preserving permutations
std::pair<std::set<Split>, int> brute_force(const WeightTuple& mu)
{
    const int k = mu.size(), d = mu.denominator();
    const auto& a = mu.numerators();
    std::set<Split> splits;
    for (unsigned mask = 0; mask < (1u << k); ++mask) {
        std::set<int> s1, s2;
        int s = 0;
        for (int i = 0; i < k; ++i) (mask >> i & 1u ? (s += a[i], s1) : s2).insert(i);
        if (s == d && s1.size() >= 2 && s2.size() >= 2) splits.insert({s1, s2});
    }
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::vector<int>> symmetries;
    do {
        bool ok = true;
        for (int i = 0; i < k; ++i) ok = ok && a[perm[i]] == a[i];
        if (ok) symmetries.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::set<Split> seen;
    int orbits = 0;
    for (const auto& P : splits) {
        if (seen.count(P)) continue;
        ++orbits;
        for (const auto& s : symmetries) {
            Split img;
            for (const auto& part : P) {
                std::set<int> q;
                for (int i : part) q.insert(s[i]);
                img.insert(q);
            }
            seen.insert(img);
        }
    }
    return {splits, orbits};
}

Integer pivot_product(const std::vector<CycElem>& basis, int c)
{
    Integer p = 1;
    for (const auto& b : basis) {
        CycElem l = b.lift(c);
        for (const auto& x : l.coeffs())
            if (x != 0) {
                p *= abs(x.get_num());
                break;
            }
    }
    return p;
}

}  // namespace

TEST(Cusps, Examples)
{
    auto a = cusp_partitions(WeightTuple::parse("3,3,5,6,7/12"));
    ASSERT_EQ(a.raw.size(), 1u);
    EXPECT_EQ(a.raw[0].S1, (std::vector<int>{0, 1, 3}));
    EXPECT_EQ(a.raw[0].S2, (std::vector<int>{2, 4}));
    EXPECT_EQ(a.orbits, 1);
    auto b = cusp_partitions(WeightTuple::parse("2,2,2,2,4/6"));
    EXPECT_EQ(b.raw.size(), 4u);
    EXPECT_EQ(b.orbits, 1);
    EXPECT_EQ(cusp_partitions(WeightTuple::parse("4,4,4,5,7/12")).orbits, 1);
    EXPECT_TRUE(is_compact(WeightTuple::parse("2,2,2,2,2/5")));
}

TEST(Cusps, AgreesWithBruteForce)
{
    std::vector<WeightTuple> tuples;
    for (const auto& r : load_tables().rows)
        if (r.tuple().size() <= 8) tuples.push_back(r.tuple());
    std::mt19937 rng(4);
    while (tuples.size() < 200) {
        int d = std::uniform_int_distribution<int>(3, 12)(rng);
        int k = std::uniform_int_distribution<int>(4, 7)(rng);
        std::vector<int> a(k);
        int s = 0;
        for (int i = 0; i + 1 < k; ++i) s += a[i] = std::uniform_int_distribution<int>(1, d - 1)(rng);
        a[k - 1] = 2 * d - s;
        if (a[k - 1] <= 0 || a[k - 1] >= d) continue;
        try {
            tuples.emplace_back(a, d);
        } catch (const InvalidTuple&) {
        }
    }
    for (const auto& mu : tuples) {
        auto [splits, orbits] = brute_force(mu);
        auto got = cusp_partitions(mu);
        std::set<Split> mine;
        for (const auto& P : got.raw)
            mine.insert({std::set<int>(P.S1.begin(), P.S1.end()), std::set<int>(P.S2.begin(), P.S2.end())});
        ASSERT_EQ(mine, splits) << mu.to_string();
        ASSERT_EQ(got.raw.size(), splits.size()) << mu.to_string();
        ASSERT_EQ(got.orbits, orbits) << mu.to_string();
    }
}

TEST(Boundary, CompositionIdentity)
{
    auto mu = WeightTuple::parse("5,7,3,3,6/12");
    auto [f, g] = boundary_generators(mu);
    auto h = g.compose(g.compose(f));
    EXPECT_EQ(h.linear, CycElem::rational(1, 12));
    EXPECT_EQ(h.translation, Rational(-2) * cyc(4, 1));
}

TEST(Boundary, Discriminants)
{
    auto L1 = boundary_lattice(WeightTuple::parse("5,7,3,3,6/12"));
    auto L2 = boundary_lattice(WeightTuple::parse("5,7,4,4,4/12"));
    EXPECT_EQ(cm_discriminant(L1), -4);
    EXPECT_EQ(cm_discriminant(L2), -3);
    auto tau = L1.t2 / L1.t1;
    EXPECT_EQ(minimal_polynomial(tau).size(), 3u);
}

TEST(Boundary, StableUnderLongerWords)
{
    for (const char* s : {"5,7,3,3,6/12", "5,7,4,4,4/12", "2,2,2,2,4/6"}) {
        auto mu = WeightTuple::parse(s);
        auto L12 = boundary_lattice(mu);
        auto L16 = boundary_lattice(mu, L12.pair, 16);
        const int c = mu.conductor();
        std::vector<CycElem> all{L12.t1, L12.t2, L16.t1, L16.t2};
        auto joint = z_span_basis(all, c);
        ASSERT_EQ(joint.size(), 2u) << s;
        EXPECT_EQ(pivot_product(joint, c), pivot_product(z_span_basis({L12.t1, L12.t2}, c), c)) << s;
        EXPECT_EQ(pivot_product(joint, c), pivot_product(z_span_basis({L16.t1, L16.t2}, c), c)) << s;
    }
}

TEST(Boundary, TableRowsHaveCmLattices)
{
    for (const auto& r : load_tables().rows) {
        if (r.n != 2 || r.compact) continue;
        auto mu = r.tuple();
        const auto& a = mu.numerators();
        for (int i = 0; i < mu.size(); ++i)
            for (int j = i + 1; j < mu.size(); ++j)
                if (a[i] + a[j] == mu.denominator()) EXPECT_LT(cm_discriminant(boundary_lattice(mu, {i, j})), 0) << r.id;
    }
}

TEST(Boundary, Errors)
{
    EXPECT_THROW(boundary_lattice(WeightTuple::parse("2,2,2,2,2/5")), NoPairSummingToOne);
    EXPECT_THROW(boundary_lattice(WeightTuple::parse("5,7,3,3,6/12"), {0, 2}), NoPairSummingToOne);
    TranslationLattice L{{0, 1}, CycElem::rational(1, 8), CycElem::root(8, 1)};
    EXPECT_THROW(cm_discriminant(L), NonCM);
    TranslationLattice flat{{0, 1}, CycElem::rational(1, 8), CycElem::rational(3, 8)};
    EXPECT_THROW(cm_discriminant(flat), RankDeficient);
}

TEST(Discriminant, Fundamental)
{
    EXPECT_EQ(fundamental_discriminant(-16), -4);
    EXPECT_EQ(fundamental_discriminant(-12), -3);
    EXPECT_EQ(fundamental_discriminant(-27), -3);
    EXPECT_EQ(fundamental_discriminant(-8), -8);
    EXPECT_EQ(squarefree_part(-72), -2);
}
