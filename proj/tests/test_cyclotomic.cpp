#include "dmc/cyclotomic.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace dmc;

namespace
{

CycElem one(int c) { return CycElem::rational(1, c); }

CycElem random_elem(std::mt19937& rng, int c)
{
    std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
    std::vector<Rational> v;
    for (int i = 0; i < euler_phi(canonical_conductor(c)); ++i) {
        Rational q(num(rng), den(rng));
        q.canonicalize();
        v.push_back(q);
    }
    return CycElem::from_coeffs(canonical_conductor(c), v);
}

// sign of sum v_j cos(2 pi j k / c) in 200-bit round-to-nearest arithmetic
int mpfr_sign_oracle(const CycElem& x, long k)
{
    mpfr_t acc, t, pi;
    mpfr_inits2(200, acc, t, pi, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_zero(acc, 1);
    mpfr_const_pi(pi, MPFR_RNDN);
    const auto& v = x.coeffs();
    for (std::size_t j = 0; j < v.size(); ++j) {
        mpfr_mul_si(t, pi, 2 * static_cast<long>(j) * k, MPFR_RNDN);
        mpfr_div_si(t, t, x.conductor(), MPFR_RNDN);
        mpfr_cos(t, t, MPFR_RNDN);
        mpfr_mul_q(t, t, v[j].get_mpq_t(), MPFR_RNDN);
        mpfr_add(acc, acc, t, MPFR_RNDN);
    }
    int s = mpfr_sgn(acc);
    mpfr_clears(acc, t, pi, static_cast<mpfr_ptr>(nullptr));
    return s;
}

}  // namespace

TEST(Conductor, CanonicalForm)
{
    EXPECT_EQ(canonical_conductor(10), 5);
    EXPECT_EQ(canonical_conductor(12), 12);
    EXPECT_EQ(canonical_conductor(18), 9);
    EXPECT_EQ(canonical_conductor(4), 4);
}

TEST(Conductor, EmbeddingRepresentatives)
{
    EXPECT_EQ(embedding_representatives(12), (std::vector<int>{1, 5}));
    EXPECT_EQ(embedding_representatives(5), (std::vector<int>{1, 2}));
    EXPECT_EQ(embedding_representatives(20), (std::vector<int>{1, 3, 7, 9}));
}

TEST(Cyc, Reduction)
{
    EXPECT_EQ(cyc(6, 2), cyc(6, 1) - one(6));
    EXPECT_EQ(cyc(6, 5), one(6) - cyc(6, 1));
    EXPECT_EQ(cyc(12, 6), CycElem::rational(-1, 12));
    EXPECT_THROW(cyc(2, 1), InvalidConductor);
    EXPECT_THROW(cyc(1, 0), InvalidConductor);
}

TEST(Cyc, OddTwiceConductor)
{
    CycElem z10 = CycElem::root(10, 1);
    EXPECT_EQ(z10.conductor(), 5);
    EXPECT_EQ(z10.pow(10), one(5));
    EXPECT_EQ(z10.pow(5), CycElem::rational(-1, 5));
    EXPECT_EQ(z10 * z10, CycElem::root(5, 1));
}

TEST(Cyc, Arithmetic)
{
    CycElem i = cyc(4, 1), o = one(4);
    EXPECT_EQ(cyc(6, 1) * cyc(6, 1), cyc(6, 1) - one(6));
    EXPECT_EQ((o - i) * (o + i), CycElem::rational(2, 4));
    EXPECT_EQ(o / (o - i), Rational(1, 2) * (o + i));
    EXPECT_THROW(o / CycElem::rational(0, 4), DivisionByZero);
}

TEST(Cyc, MixedConductors)
{
    CycElem s = cyc(3, 1) + cyc(4, 1);
    EXPECT_EQ(s.conductor(), 12);
    EXPECT_EQ(s - cyc(4, 1), cyc(3, 1));
}

TEST(Galois, Examples)
{
    EXPECT_EQ(cyc(20, 1).galois(3), cyc(20, 3));
    EXPECT_EQ((cyc(6, 1) - one(6)).galois(-1), -cyc(6, 1));
    EXPECT_THROW(cyc(12, 1).galois(2), NonUnitExponent);
}

TEST(Galois, RandomHomomorphism)
{
    std::mt19937 rng(7);
    const std::vector<int> conductors{3, 4, 5, 7, 8, 9, 12, 15, 16, 20, 24};
    for (int t = 0; t < 1000; ++t) {
        int c = conductors[t % conductors.size()];
        CycElem x = random_elem(rng, c), y = random_elem(rng, c);
        std::vector<int> units;
        for (int k = 1; k < c; ++k)
            if (std::gcd(k, c) == 1) units.push_back(k);
        int k = units[rng() % units.size()];
        ASSERT_EQ((x * y).galois(k), x.galois(k) * y.galois(k));
        ASSERT_EQ((x + y).galois(k), x.galois(k) + y.galois(k));
        auto ex = x.embed(k), ey = y.embed(k), exy = (x * y).embed(1);
        auto gk = (x * y).galois(k).embed(1);
        ASSERT_LT(std::abs(gk - ex * ey), 1e-9L * (1 + std::abs(ex * ey)));
        ASSERT_LT(std::abs(exy - x.embed(1) * y.embed(1)), 1e-9L * (1 + std::abs(exy)));
        if (!x.is_zero()) ASSERT_EQ(x * x.inverse(), one(c));
    }
}

TEST(Norm, PrimePowerAndUnits)
{
    EXPECT_EQ(field_norm(one_minus_root(5, 1)), 5);
    EXPECT_EQ(field_norm(one_minus_root(9, 1)), 3);
    EXPECT_EQ(field_norm(one_minus_root(8, 3)), 2);
    EXPECT_EQ(abs(field_norm(one_minus_root(12, 1))), 1);
    EXPECT_EQ(field_norm(CycElem::rational(3, 12)), 81);
}

TEST(Serialization, RoundTrip)
{
    std::mt19937 rng(3);
    for (int c : {3, 5, 12, 20}) {
        CycElem x = random_elem(rng, c);
        EXPECT_EQ(CycElem::parse(x.to_string()), x);
    }
    EXPECT_THROW(CycElem::parse("12[1]"), std::invalid_argument);
}

TEST(Sign, Examples)
{
    CycElem x = cyc(5, 1) + cyc(5, -1);
    EXPECT_EQ(certified_sign(x, 1), Sign::Positive);
    EXPECT_EQ(certified_sign(x, 2), Sign::Negative);
    EXPECT_EQ(certified_sign(CycElem::rational(0, 5), 1), Sign::Zero);
    EXPECT_THROW(certified_sign(cyc(5, 1), 1), std::domain_error);
    EXPECT_THROW(certified_sign(x, 5), NonUnitExponent);
}

TEST(Sign, TinyValues)
{
    // 2cos(2pi/7) approximated by a rational with error around 1e-30
    CycElem x = cyc(7, 1) + cyc(7, -1);
    mpfr_t t;
    mpfr_init2(t, 256);
    mpfr_const_pi(t, MPFR_RNDN);
    mpfr_mul_ui(t, t, 2, MPFR_RNDN);
    mpfr_div_ui(t, t, 7, MPFR_RNDN);
    mpfr_cos(t, t, MPFR_RNDN);
    mpfr_mul_ui(t, t, 2, MPFR_RNDN);
    mpfr_mul_2si(t, t, 100, MPFR_RNDN);
    mpz_class z;
    mpfr_get_z(z.get_mpz_t(), t, MPFR_RNDD);
    mpfr_clear(t);
    Rational below(z, Integer(1) << 100);
    below.canonicalize();
    EXPECT_EQ(certified_sign(x - CycElem::rational(below, 7), 1), Sign::Positive);
    EXPECT_EQ(certified_sign(x - CycElem::rational(below + Rational(1, Integer(1) << 100), 7), 1), Sign::Negative);
}

TEST(Sign, AgreesWithHighPrecisionOracle)
{
    std::mt19937 rng(11);
    for (int t = 0; t < 300; ++t) {
        int c = std::vector<int>{5, 7, 8, 9, 12, 15, 20, 24}[t % 8];
        CycElem y = random_elem(rng, c);
        CycElem x = y + y.conj();
        for (int k : embedding_representatives(c)) {
            int s = mpfr_sign_oracle(x, k);
            ASSERT_EQ(static_cast<int>(certified_sign(x, k)), s) << x.to_string() << " k=" << k;
        }
    }
}
