#include "dmc/dmc.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace dmc;

namespace
{

CycElem q(const Rational& a, int c) { return CycElem::rational(a, c); }

WeightTuple random_ball(std::mt19937& rng, int max_d = 24, int max_n = 6)
{
    while (true) {
        int d = std::uniform_int_distribution<int>(3, max_d)(rng);
        int k = std::uniform_int_distribution<int>(4, max_n + 3)(rng);
        std::vector<int> a(k);
        int s = 0;
        for (int i = 0; i + 1 < k; ++i) s += a[i] = std::uniform_int_distribution<int>(1, d - 1)(rng);
        a[k - 1] = 2 * d - s;
        if (a[k - 1] <= 0 || a[k - 1] >= d) continue;
        try {
            WeightTuple mu(a, d);
            gram_lf(mu);
            return mu;
        } catch (const std::exception&) {
        }
    }
}

}  // namespace

TEST(WeightTuple, ParseAndReduce)
{
    auto mu = WeightTuple::parse("2,6,6,6/10");
    EXPECT_EQ(mu.denominator(), 5);
    EXPECT_EQ(mu.numerators(), (std::vector<int>{1, 3, 3, 3}));
    EXPECT_EQ(WeightTuple::parse("1-1-3-3/4"), WeightTuple::parse("1,1,3,3/4"));
    EXPECT_TRUE(mu.is_ball());
    EXPECT_THROW(WeightTuple::parse("1,1,3,3"), InvalidTuple);
    EXPECT_THROW(WeightTuple::parse("1,x,3,3/4"), InvalidTuple);
    EXPECT_THROW(WeightTuple::parse("0,2,3,3/4"), InvalidTuple);
    EXPECT_THROW(WeightTuple::parse("1,2,3,3/4"), InvalidTuple);
    EXPECT_THROW(WeightTuple::parse("2,2,2,2/4"), InvalidTuple);
    EXPECT_THROW(require_ball(WeightTuple::parse("1,1,2/4")), InvalidTuple);
}

TEST(GramLf, SmallExample)
{
    CycElem i = cyc(4, 1);
    auto S = gram_lf(WeightTuple::parse("1,1,3,3/4"));
    Mat expect{{i, Rational(1, 2) * (q(-1, 4) - i)}, {Rational(1, 2) * (q(1, 4) - i), q(0, 4)}};
    EXPECT_TRUE(mat_equal(S.a, expect));
    EXPECT_TRUE(is_skew_hermitian(S.a));
    CycElem H01 = dm_hermitian(WeightTuple::parse("1,1,3,3/4")).a[0][1];
    EXPECT_EQ(H01, q(1, 4) - i);
}

TEST(GramLf, OneDimensional)
{
    auto mu = WeightTuple::parse("2,2,2/3");
    auto S = gram_lf(mu);
    ASSERT_EQ(S.size(), 1u);
    CycElem a = CycElem::root(3, 2), one = q(1, 3);
    EXPECT_EQ(S.a[0][0], (one - a * a) / ((one - a) * (one - a)));
    EXPECT_EQ(S.a[0][0], q(-1, 3) + one / (one - a) + one / (one - a));
}

TEST(GramLf, TridiagonalOnTable)
{
    for (const auto& r : load_tables().rows) {
        auto S = gram_lf(r.tuple());
        for (std::size_t i = 0; i < S.size(); ++i)
            for (std::size_t j = 0; j < S.size(); ++j)
                if (i + 1 < j || j + 1 < i) ASSERT_TRUE(S.a[i][j].is_zero()) << r.id;
        ASSERT_TRUE(is_skew_hermitian(S.a));
    }
}

TEST(ClosedFormDet, Examples)
{
    EXPECT_EQ(closed_form_det(WeightTuple::parse("1,1,3,3/4")), q(Rational(1, 4), 4));
    CycElem one = q(1, 3), z = cyc(3, 1);
    EXPECT_EQ(closed_form_det(WeightTuple::parse("1,1,1,1,2/3")), one / ((one - z).pow(4) * (one - z * z)));
    EXPECT_EQ(determinant(gram_lf(WeightTuple::parse("1,1,3,3/4")).a), q(Rational(1, 2), 4));
}

TEST(Merge, Examples)
{
    auto m = merge(WeightTuple::parse("1,1,3,3/4"), 0, 1);
    CycElem i = cyc(4, 1);
    EXPECT_EQ(m.merged, WeightTuple::parse("2,3,3/4"));
    EXPECT_EQ(m.c, i);
    EXPECT_EQ(determinant(gram_lf(m.merged).a), Rational(-1, 2) * i);
    EXPECT_EQ(determinant(gram_lf(m.reordered).a), determinant(gram_lf(m.merged).a) * m.c);

    auto m2 = merge(WeightTuple::parse("1,1,1,1,4,4/6"), 0, 1);
    EXPECT_EQ(m2.merged.sorted(), WeightTuple::parse("1,1,2,4,4/6"));

    auto m3 = merge(WeightTuple::parse("3,3,3,3,8/10"), 0, 1);
    CycElem one = q(1, 5);
    EXPECT_EQ(m3.c, (one - CycElem::root(10, 6)) / (one - CycElem::root(10, 3)).pow(2));

    EXPECT_THROW(merge(WeightTuple::parse("1,3,2,2/4"), 0, 1), IntegralSum);
    EXPECT_THROW(merge(WeightTuple::parse("1,1,3,3/4"), 0, 4), IndexOutOfRange);
    EXPECT_THROW(merge(WeightTuple::parse("1,1,3,3/4"), 1, 1), IndexOutOfRange);
}

TEST(Merge, NonAdjacentIndices)
{
    auto mu = WeightTuple::parse("1,1,1,1,1,1,2,2,2/6");
    auto m = merge(mu, 2, 7);
    EXPECT_EQ(m.reordered.numerators().front(), 1);
    EXPECT_EQ(m.reordered.numerators()[1], 2);
    EXPECT_EQ(determinant(gram_lf(m.reordered).a), determinant(gram_lf(m.merged).a) * m.c);
}

TEST(Merge, RandomRecursion)
{
    std::mt19937 rng(99);
    int checked = 0;
    while (checked < 500) {
        auto mu = random_ball(rng);
        int i = rng() % mu.size(), j = rng() % mu.size();
        if (i == j || (mu.numerators()[i] + mu.numerators()[j]) % mu.denominator() == 0) continue;
        MergeResult m;
        try {
            m = merge(mu, i, j);
        } catch (const InvalidTuple&) {
            continue;  // merged weights reduce to denominator 2
        }
        ASSERT_EQ(determinant(gram_lf(m.reordered).a), determinant(gram_lf(m.merged).a) * m.c) << mu.to_string();
        ++checked;
    }
}

TEST(Monodromy, FirstGenerator)
{
    auto mu = WeightTuple::parse("1,1,1,1,1,1,2,2,2/6");
    auto al = alphas(mu);
    auto T = adjacent_monodromy(mu, 0);
    EXPECT_EQ(T[0][0], al[0] * al[1]);
    EXPECT_TRUE(T[1][0].is_zero());
    EXPECT_EQ(T[0][1], al[1] - al[0] * al[1]);
    EXPECT_EQ(T[1][1], q(1, 3));
}

TEST(Monodromy, TrivialScalar)
{
    auto mu = WeightTuple::parse("1,3,2,2/4");
    auto T = adjacent_monodromy(mu, 0);
    EXPECT_EQ(T[0][0], q(1, 4));
    EXPECT_TRUE(T[1][0].is_zero());
    EXPECT_THROW(adjacent_monodromy(mu, 3), IndexOutOfRange);
}

TEST(Monodromy, UnitaryOnRandomTuples)
{
    std::mt19937 rng(17);
    for (int t = 0; t < 60; ++t) {
        auto mu = random_ball(rng, 20, 4);
        auto S = gram_lf(mu);
        for (int i = 0; i <= mu.n() + 1; ++i) ASSERT_TRUE(preserves_form(adjacent_monodromy(mu, i), S.a)) << mu.to_string();
    }
}

TEST(Relation, Coefficients)
{
    auto c = relation_coefficients(WeightTuple::parse("1,1,3,3/4"));
    CycElem i = cyc(4, 1), one = q(1, 4);
    ASSERT_EQ(c.size(), 3u);
    EXPECT_EQ(c[0], one + i);
    EXPECT_EQ(c[1], q(2, 4));
    EXPECT_EQ(c[2], one + i);
    for (const auto& r : load_tables().rows) {
        auto mu = r.tuple();
        auto cs = relation_coefficients(mu);
        ASSERT_EQ(cs.back(), q(1, mu.conductor()) - alphas(mu).back());
    }
}

TEST(Relation, DependentVectorPairingsRandom)
{
    std::mt19937 rng(23);
    for (int t = 0; t < 100; ++t) {
        auto mu = random_ball(rng, 24, 5);
        const int m = mu.n() + 1, c = mu.conductor();
        auto S = gram_lf(mu);
        auto al = alphas(mu);
        auto w = dependent_vector(mu);
        std::vector<CycElem> e(m, q(0, c));
        e[m - 1] = q(1, c);
        ASSERT_EQ(pairing(e, S.a, w), adjacent_pairing_formula(al[m]));
        ASSERT_EQ(pairing(w, S.a, w), self_pairing_formula(al[m], al[m + 1]));
    }
}

TEST(LocalWeight, Examples)
{
    EXPECT_EQ(local_weight({LocalKind::DegreeTwoRamification, 2, 0}, 6), Rational(1, 6));
    EXPECT_EQ(local_weight({LocalKind::VerticalLine, 4, 0}, 6), Rational(1, 3));
    EXPECT_EQ(local_weight({LocalKind::Nodal, 1, 2}, 6), Rational(1, 2));
    EXPECT_EQ(local_weight({LocalKind::VerticalTacnode, 1, 1}, 12), Rational(1, 3));
    EXPECT_EQ(local_weight({LocalKind::NonVerticalTacnode, 1, 2}, 10), Rational(2, 5));
    EXPECT_THROW(local_weight({LocalKind::Nodal, 2, 4}, 6), TrivialMonodromy);
}

TEST(Assembly, ShippedConfigurations)
{
    auto ds = embedded_data();
    std::map<std::string, Configuration> cfg;
    for (const auto& c : shipped_configurations(ds)) cfg.emplace(c.case_id, c);
    ASSERT_EQ(cfg.size(), 3u);
    EXPECT_EQ(assemble_tuple(cfg.at("8.1.1"), Projection::First), WeightTuple::parse("2,2,2,2,4/6"));
    EXPECT_EQ(assemble_tuple(cfg.at("8.1.1"), Projection::Second), WeightTuple::parse("1,1,2,4,4/6"));
    EXPECT_EQ(assemble_tuple(cfg.at("3.1.1"), Projection::First), WeightTuple::parse("2,2,2,2,2,2/6"));
    EXPECT_EQ(assemble_tuple(cfg.at("3.1.1"), Projection::Second), WeightTuple::parse("1,1,1,1,4,4/6"));
    EXPECT_EQ(assemble_tuple(cfg.at("5.3.2"), Projection::First), WeightTuple::parse("2,3,3,3,9/10"));
    EXPECT_EQ(assemble_tuple(cfg.at("5.3.2"), Projection::Second), WeightTuple::parse("3,3,3,3,8/10"));
}

TEST(Assembly, CorruptedConfiguration)
{
    auto j = nlohmann::json::parse(embedded_data().configs.at("8.1.1"));
    auto broken = j;
    broken["disc1"][0]["count"] = broken["disc1"][0].value("count", 1) + 1;
    EXPECT_THROW(assemble_tuple(Configuration::from_json(broken), Projection::First), SumNotTwo);
    auto bad_degree = j;
    bad_degree["divisors"][0]["bidegree"][0] = 5;
    EXPECT_THROW(Configuration::from_json(bad_degree), std::invalid_argument);
    auto bad_kind = j;
    bad_kind["disc1"][0]["models"][0]["kind"] = "Cusp";
    EXPECT_THROW(Configuration::from_json(bad_kind), std::invalid_argument);
}
