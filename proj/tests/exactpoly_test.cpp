#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "higgsfix/exactpoly.hpp"

using namespace higgsfix;

namespace {

SparseLaurent poly(std::initializer_list<std::pair<Rational, long>> terms)
{
    std::vector<SparseLaurent::Term> v;
    for (const auto& [e, c] : terms)
        v.push_back({e, BigInt(c)});
    return SparseLaurent::from_terms(std::move(v));
}

SparseLaurent one_plus_t() { return poly({{0, 1}, {1, 1}}); }

// Random integer-exponent polynomial with a nonzero constant term.
SparseLaurent random_poly(std::mt19937_64& rng, int max_degree, bool rational_exponents = false)
{
    std::uniform_int_distribution<int> deg(0, max_degree);
    std::uniform_int_distribution<long> coeff(-5, 5);
    std::uniform_int_distribution<int> den(1, 3);
    const std::int64_t d = rational_exponents ? den(rng) : 1;
    std::vector<SparseLaurent::Term> terms;
    long c0 = 0;
    while (c0 == 0)
        c0 = coeff(rng);
    terms.push_back({Rational(0), BigInt(c0)});
    const int n = deg(rng);
    for (int e = 1; e <= n; ++e)
        terms.push_back({Rational(e, d), BigInt(coeff(rng))});
    return SparseLaurent::from_terms(std::move(terms));
}

} // namespace

TEST(QInt, SmallValues)
{
    EXPECT_EQ(q_int(1), SparseLaurent(1L));
    EXPECT_EQ(q_int(2), one_plus_t());
    EXPECT_EQ(q_int(4).value_at_one(), 4);
    EXPECT_THROW(q_int(0), std::invalid_argument);
    EXPECT_THROW(q_int(-3), std::invalid_argument);
}

TEST(SparseLaurent, CanonicalForm)
{
    auto p = poly({{Rational(1, 2), 3}, {Rational(2, 4), -3}, {Rational(1), 2}});
    EXPECT_EQ(p, poly({{1, 2}}));
    EXPECT_EQ(p.denominator(), 1);
    EXPECT_TRUE(poly({{1, 0}}).is_zero());
    auto h = poly({{Rational(3, 2), 1}, {Rational(0), 1}});
    EXPECT_EQ(h.denominator(), 2);
    EXPECT_EQ(h.exponent(0), Rational(0));
    EXPECT_EQ(h.exponent(1), Rational(3, 2));
    EXPECT_EQ(h.to_string(), "1+t^(3/2)");
    EXPECT_EQ(poly({{0, 1}, {2, -1}, {-1, 4}}).to_string(), "4t^-1+1-t^2");
}

TEST(Mul, Examples)
{
    EXPECT_EQ(mul(one_plus_t(), poly({{0, 1}, {1, -1}})), poly({{0, 1}, {2, -1}}));
    EXPECT_EQ(mul(q_int(2), q_int(2)), poly({{0, 1}, {1, 2}, {2, 1}}));
    auto root = SparseLaurent::monomial(Rational(1, 2));
    EXPECT_EQ(mul(root, root), SparseLaurent::t());
    EXPECT_EQ(mul(root, root).denominator(), 1);
    EXPECT_TRUE(mul(SparseLaurent(), q_int(5)).is_zero());
}

TEST(Mul, WideSpanUsesSparsePath)
{
    auto p = poly({{0, 1}, {20000000, 1}});
    EXPECT_EQ(mul(p, p), poly({{0, 1}, {20000000, 2}, {40000000, 1}}));
}

TEST(ExactDiv, Examples)
{
    EXPECT_EQ(exact_div(poly({{0, 1}, {2, -1}}), one_plus_t()), poly({{0, 1}, {1, -1}}));
    EXPECT_EQ(exact_div(q_int(4), q_int(2)), poly({{0, 1}, {2, 1}}));
    // 1+t+t^2 = (1+t)t + 1
    EXPECT_FALSE(exact_div(q_int(3), one_plus_t()).has_value());
    EXPECT_THROW(exact_div(q_int(3), SparseLaurent()), std::domain_error);
}

TEST(ExactDiv, LaurentAndRationalExponents)
{
    // (1 - t) / (1 - t^{1/2}) = 1 + t^{1/2}
    auto q = exact_div(poly({{0, 1}, {1, -1}}), poly({{0, 1}, {Rational(1, 2), -1}}));
    ASSERT_TRUE(q.has_value());
    EXPECT_EQ(*q, poly({{0, 1}, {Rational(1, 2), 1}}));
    // t^-2 (1+t)^2 / (t^3 (1+t)) = t^-5 (1+t)
    auto a = mul(SparseLaurent::monomial(Rational(-2)), mul(one_plus_t(), one_plus_t()));
    auto b = mul(SparseLaurent::monomial(Rational(3)), one_plus_t());
    EXPECT_EQ(exact_div(a, b), poly({{-5, 1}, {-4, 1}}));
}

TEST(ExactDiv, RejectsNonIntegralQuotient)
{
    EXPECT_FALSE(exact_div(one_plus_t(), poly({{0, 2}, {1, 2}})).has_value());
    EXPECT_EQ(exact_div(poly({{0, 2}, {1, 2}}), one_plus_t()), SparseLaurent(2L));
    EXPECT_FALSE(exact_div(SparseLaurent(1L), one_plus_t()).has_value());
}

TEST(ExactDiv, WideSpanUsesSparsePath)
{
    auto a = poly({{0, -1}, {30000000, 1}});
    auto b = poly({{0, -1}, {10000000, 1}});
    EXPECT_EQ(exact_div(a, b), poly({{0, 1}, {10000000, 1}, {20000000, 1}}));
    EXPECT_FALSE(exact_div(poly({{0, 1}, {30000000, 1}}), b).has_value());
}

TEST(Factored, Normalization)
{
    FactoredExpression f(Rational(0), {{poly({{1, 2}, {2, 2}}), 1}, {SparseLaurent::monomial(Rational(3)), 2}});
    EXPECT_EQ(f.prefix_exponent(), Rational(7));
    ASSERT_EQ(f.factors().size(), 1u);
    EXPECT_EQ(f.factors()[0].base, poly({{0, 2}, {1, 2}}));

    FactoredExpression merged(Rational(0), {{q_int(3), 2}, {one_plus_t(), 1}, {q_int(3), -2}});
    ASSERT_EQ(merged.factors().size(), 1u);
    EXPECT_EQ(merged.factors()[0].base, one_plus_t());

    EXPECT_THROW(FactoredExpression(Rational(0), {{SparseLaurent(), 1}}), std::invalid_argument);
    EXPECT_TRUE((FactoredExpression::power_of(q_int(5), 3) / FactoredExpression::power_of(q_int(5), 3)).is_one());
}

TEST(Factored, Rendering)
{
    FactoredExpression f(Rational(0), {{q_int(3), 5}, {one_plus_t(), -1}});
    EXPECT_EQ(f.to_string(), "(1+t)^-1·[3]^5");
    EXPECT_EQ(f, FactoredExpression(Rational(0), {{one_plus_t(), -1}, {q_int(3), 5}}));
    EXPECT_EQ(FactoredExpression().to_string(), "1");
    FactoredExpression g(Rational(7, 2), {{poly({{0, 3}, {1, 1}}), 2}});
    EXPECT_EQ(g.to_string(), "t^(7/2)·(3+t)^2");
}

TEST(Expand, Examples)
{
    auto r1 = expand(FactoredExpression::power_of(one_plus_t(), 2));
    ASSERT_TRUE(std::holds_alternative<Expanded>(r1));
    EXPECT_EQ(std::get<Expanded>(r1).prefix, Rational(0));
    EXPECT_EQ(std::get<Expanded>(r1).body, poly({{0, 1}, {1, 2}, {2, 1}}));

    FactoredExpression f2(Rational(0), {{poly({{0, 1}, {2, -1}}), 1}, {one_plus_t(), -1}});
    auto r2 = expand(f2);
    ASSERT_TRUE(std::holds_alternative<Expanded>(r2));
    EXPECT_EQ(std::get<Expanded>(r2).body, poly({{0, 1}, {1, -1}}));

    // 1+t has no common root with 1+t+t^2, so never divides a power of it.
    FactoredExpression f3(Rational(0), {{q_int(3), 5}, {one_plus_t(), -1}});
    auto r3 = expand(f3);
    ASSERT_TRUE(std::holds_alternative<NotPolynomialBody>(r3));
    EXPECT_EQ(std::get<NotPolynomialBody>(r3).failing_base, one_plus_t());
}

TEST(IsPolynomial, Examples)
{
    EXPECT_TRUE(is_polynomial(FactoredExpression::power_of(one_plus_t(), 3)));
    EXPECT_FALSE(is_polynomial(FactoredExpression(Rational(0), {{one_plus_t(), -1}, {q_int(3), 5}})));
    EXPECT_FALSE(is_polynomial(FactoredExpression(Rational(1, 2), {{one_plus_t(), 1}})));
    EXPECT_FALSE(is_polynomial(FactoredExpression(Rational(-1), {{one_plus_t(), 1}})));
    EXPECT_FALSE(is_polynomial(FactoredExpression(Rational(0), {{poly({{0, 1}, {Rational(1, 2), 1}}), 1}})));
    // (1 - t^{1/2})(1 + t^{1/2}) = 1 - t
    EXPECT_TRUE(is_polynomial(FactoredExpression(Rational(0), {{poly({{0, 1}, {Rational(1, 2), 1}}), 1},
                                                               {poly({{0, 1}, {Rational(1, 2), -1}}), 1}})));
}

TEST(EvalAtOne, Examples)
{
    EXPECT_EQ(eval_at_one(FactoredExpression::power_of(q_int(3), 5)), BigRational(243));
    EXPECT_EQ(eval_at_one(FactoredExpression::power_of(one_plus_t(), 1)), BigRational(2));
    EXPECT_FALSE(eval_at_one(FactoredExpression::power_of(one_minus_t_pow(1), -1)).has_value());
}

TEST(EvalAtOne, CancelsRootsAtOne)
{
    // (1-t^2)/(1-t) -> 2 and (1-t)^2/(1-t^2) -> 0
    FactoredExpression a(Rational(0), {{one_minus_t_pow(2), 1}, {one_minus_t_pow(1), -1}});
    EXPECT_EQ(eval_at_one(a), BigRational(2));
    FactoredExpression b(Rational(0), {{one_minus_t_pow(1), 2}, {one_minus_t_pow(2), -1}});
    EXPECT_EQ(eval_at_one(b), BigRational(0));
    // (1 - t^{1/2}) / (1 - t) = 1 / (1 + t^{1/2}) -> 1/2
    FactoredExpression c(Rational(5, 3), {{poly({{0, 1}, {Rational(1, 2), -1}}), 1}, {one_minus_t_pow(1), -1}});
    EXPECT_EQ(eval_at_one(c), BigRational(1, 2));
}

TEST(CancelDivisible, Examples)
{
    auto a = cancel_divisible(FactoredExpression(Rational(0), {{one_minus_t_pow(8), 2}, {one_minus_t_pow(1), -3}}));
    EXPECT_EQ(a, FactoredExpression(Rational(0), {{q_int(8), 2}, {one_minus_t_pow(1), -1}}));
    auto b = cancel_divisible(
        FactoredExpression(Rational(0), {{one_minus_t_pow(1), 1}, {q_int(2), 1}, {one_minus_t_pow(2), -1}}));
    EXPECT_TRUE(b.is_one());
    auto c = cancel_divisible(FactoredExpression(Rational(1), {{q_int(3), 2}, {q_int(2), -1}}));
    EXPECT_EQ(c, FactoredExpression(Rational(1), {{q_int(3), 2}, {q_int(2), -1}}));
}

TEST(Equivalent, DifferentFactorings)
{
    FactoredExpression a(Rational(0), {{q_int(4), 1}});
    FactoredExpression b(Rational(0), {{one_plus_t(), 1}, {poly({{0, 1}, {2, 1}}), 1}});
    EXPECT_TRUE(equivalent(a, b));
    EXPECT_FALSE(equivalent(a, b * FactoredExpression::monomial(Rational(1, 3))));
    FactoredExpression c(Rational(0), {{q_int(3), 1}, {one_plus_t(), -1}});
    FactoredExpression d(Rational(0), {{q_int(3), 2}, {one_plus_t(), -1}, {q_int(3), -1}});
    EXPECT_TRUE(equivalent(c, d));
    EXPECT_FALSE(equivalent(c, a));
}

// ---- properties ----------------------------------------------------------

TEST(Properties, RingLawsAndDivision)
{
    std::mt19937_64 rng(20260101);
    for (int trial = 0; trial < 200; ++trial) {
        const bool rational = trial % 3 == 0;
        auto a = random_poly(rng, 8, rational);
        auto b = random_poly(rng, 6, rational);
        auto c = random_poly(rng, 5, rational);
        EXPECT_EQ(mul(a, b), mul(b, a));
        EXPECT_EQ(mul(mul(a, b), c), mul(a, mul(b, c)));
        EXPECT_EQ(mul(a, b + c), mul(a, b) + mul(a, c));
        auto shifted = b.shifted(Rational(trial % 5 - 2, 1 + trial % 2));
        EXPECT_EQ(exact_div(mul(a, shifted), shifted), a);
    }
}

TEST(Properties, RescaleRoundTrip)
{
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        auto a = random_poly(rng, 10, true);
        for (std::int64_t k : {1, 2, 6}) {
            const std::int64_t den = a.denominator() * k;
            EXPECT_EQ(SparseLaurent::from_scaled(den, a.scaled_terms(den)), a);
        }
    }
    EXPECT_THROW(SparseLaurent::monomial(Rational(1, 3)).scaled_terms(2), std::invalid_argument);
}

TEST(Properties, ExpandIndependentOfFactorOrder)
{
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<FactoredExpression::Factor> factors;
        std::vector<FactoredExpression::Factor> divisors;
        for (int i = 0; i < 4; ++i) {
            auto b = random_poly(rng, 3, trial % 4 == 0);
            const std::int64_t p = 1 + static_cast<std::int64_t>(rng() % 3);
            factors.push_back({b, p});
            if (i % 2 == 0)
                divisors.push_back({b, -std::int64_t(rng() % (p + 1))});
        }
        factors.push_back({q_int(3 + trial % 3), 2});
        factors.push_back({one_plus_t(), trial % 2 == 0 ? -1 : 1});
        factors.insert(factors.end(), divisors.begin(), divisors.end());
        auto reference = expand(FactoredExpression(Rational(trial, 3), factors));
        for (int shuffle = 0; shuffle < 4; ++shuffle) {
            std::shuffle(factors.begin(), factors.end(), rng);
            auto r = expand(FactoredExpression(Rational(trial, 3), factors));
            ASSERT_EQ(r.index(), reference.index());
            if (auto* e = std::get_if<Expanded>(&r)) {
                EXPECT_EQ(e->prefix, std::get<Expanded>(reference).prefix);
                EXPECT_EQ(e->body, std::get<Expanded>(reference).body);
            }
        }
    }
}

TEST(Properties, QIntMultiplicativity)
{
    for (std::int64_t m = 1; m <= 9; ++m)
        for (std::int64_t k = 1; k <= 9; ++k)
            EXPECT_EQ(q_int(m * k), mul(q_int(m), q_int(k).substitute_power(m))) << m << "," << k;
}

TEST(Properties, OneMinusTPowFactorization)
{
    for (std::int64_t m = 1; m <= 40; ++m)
        EXPECT_EQ(one_minus_t_pow(m), mul(one_minus_t_pow(1), q_int(m)));
}

TEST(Properties, DenseDivisionAgreesWithMultiplication)
{
    // q_int bases take the (1 - s^m)/(1 - s) path; check it against plain products.
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 60; ++trial) {
        auto a = random_poly(rng, 12);
        const std::int64_t m = 2 + trial % 6;
        auto prod = mul(a, q_int(m));
        EXPECT_EQ(exact_div(prod, q_int(m)), a);
        auto off = prod + SparseLaurent::monomial(Rational(trial % 7));
        EXPECT_FALSE(exact_div(off, q_int(m)).has_value());
    }
}

namespace {

BigRational value_at_two(const FactoredExpression& f)
{
    BigRational v = 1;
    for (const auto& factor : f.factors()) {
        BigInt x = 0;
        for (std::size_t i = 0; i < factor.base.size(); ++i) {
            BigInt p = 1;
            p <<= static_cast<mp_bitcnt_t>(factor.base.exponent(i).numerator());
            x += factor.base.coeff(i) * p;
        }
        for (std::int64_t k = 0; k < (factor.power < 0 ? -factor.power : factor.power); ++k)
            v = factor.power < 0 ? BigRational(v / x) : BigRational(v * x);
    }
    return v;
}

} // namespace

TEST(Properties, CancellationPreservesValue)
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> pick(1, 6);
    std::uniform_int_distribution<int> power(-4, 4);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<FactoredExpression::Factor> factors;
        for (int k = 0; k < 4; ++k) {
            const int m = pick(rng);
            factors.push_back({trial % 2 ? q_int(m + 1) : one_minus_t_pow(m), power(rng)});
        }
        FactoredExpression f(Rational(0), factors);
        const auto g = cancel_divisible(f);
        EXPECT_EQ(value_at_two(f), value_at_two(g));
        EXPECT_EQ(f.prefix_exponent(), g.prefix_exponent());
    }
}
