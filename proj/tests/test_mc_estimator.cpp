#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "ssfcap/closed_form_bounds.hpp"
#include "ssfcap/mc_estimator.hpp"

using namespace ssfcap;

namespace {

ChannelParams small_link(int k = 8, int len = 64) { return build_channel(reference_link(), k, len); }

ChannelParams linear_link(int k = 8, int len = 64)
{
    ChannelParams c = small_link(k, len);
    c.gamma = 0.0;
    return c;
}

// E for the dispersion-only channel: a_K = Lambda^K a0 + n with
// |(Lambda^K a0)_i|^2 ~ Exp(mean P), so E[(X + Pn)^2] = 2P^2 + 2 P Pn + Pn^2.
double linear_channel_E(double p, double pn) { return 2.0 * p * p + 2.0 * p * pn + pn * pn; }

MonteCarloConfig config(double p, std::uint64_t seed, int outer = 20, int inner = 200)
{
    MonteCarloConfig mc;
    mc.n_outer = outer;
    mc.n_inner = inner;
    mc.seed = seed;
    mc.input_power = p;
    return mc;
}

} // namespace

TEST(LinearOracle, ClosedFormAgreesWithLowPowerApprox)
{
    const double pn = 4.1e-6;
    for (double p_dbm = -40.0; p_dbm <= 40.0; p_dbm += 2.5) {
        const double p = dbm_to_watts(p_dbm);
        EXPECT_NEAR(lower_bound_L1(linear_channel_E(p, pn), p, pn), low_power_approx(p, pn), 1e-9) << p_dbm;
    }
}

TEST(EstimateE, ZeroInputGivesNoisePowerSquared)
{
    const ChannelParams c = small_link();
    const double pn = c.noise_power;
    for (auto form : {EstimatorForm::conditional_variance, EstimatorForm::squared_inner_mean}) {
        MonteCarloConfig mc = config(0.0, 5);
        mc.form = form;
        mc.bias_correction = form == EstimatorForm::squared_inner_mean;
        const Estimate e = estimate_E(c, mc);
        EXPECT_GT(e.std_error, 0.0);
        EXPECT_NEAR(e.value, pn * pn, 3.0 * e.std_error) << static_cast<int>(form);
    }
}

TEST(EstimateE, LinearChannelMatchesAnalyticValue)
{
    const ChannelParams c = linear_link();
    for (double p_dbm : {-10.0, 0.0, 10.0}) {
        const double p = dbm_to_watts(p_dbm);
        const double expected = linear_channel_E(p, c.noise_power);
        for (auto form : {EstimatorForm::conditional_variance, EstimatorForm::squared_inner_mean}) {
            MonteCarloConfig mc = config(p, 17);
            mc.form = form;
            mc.bias_correction = true;
            const Estimate e = estimate_E(c, mc);
            EXPECT_NEAR(e.value, expected, 3.0 * e.std_error) << p_dbm << " form " << static_cast<int>(form);
        }
    }
}

TEST(EstimateE, ConditionalVarianceFormIsTightOnLinearChannel)
{
    const ChannelParams c = linear_link();
    const double p = dbm_to_watts(0.0);
    const L1Estimate l1 = estimate_L1(SsfChannel(c), config(p, 21));
    EXPECT_LT(l1.stderr_bits, 0.05);
    EXPECT_NEAR(l1.value_bits, low_power_approx(p, c.noise_power), 3.0 * l1.stderr_bits);
}

TEST(EstimateE, StdErrorScalesAsInverseRootOuter)
{
    const ChannelParams c = small_link(4, 64);
    double se2_small = 0.0, se2_large = 0.0;
    for (int rep = 0; rep < 40; ++rep) {
        se2_small += std::pow(estimate_E(c, config(1e-3, 1000 + rep, 8, 20)).std_error, 2);
        se2_large += std::pow(estimate_E(c, config(1e-3, 2000 + rep, 32, 20)).std_error, 2);
    }
    const double ratio = se2_small / se2_large;
    EXPECT_GT(ratio, 2.5);
    EXPECT_LT(ratio, 6.0);
}

TEST(EstimateE, ResultIndependentOfWorkerCount)
{
    const ChannelParams c = small_link(8, 32);
    MonteCarloConfig mc = config(dbm_to_watts(5.0), 3, 4, 60);
    mc.workers = 1;
    const Estimate one = estimate_E(c, mc);
    mc.workers = 3;
    const Estimate three = estimate_E(c, mc);
    mc.workers = 8;
    const Estimate eight = estimate_E(c, mc);
    EXPECT_EQ(one.value, three.value);
    EXPECT_EQ(one.value, eight.value);
    EXPECT_EQ(one.std_error, eight.std_error);
}

TEST(EstimateE, RejectsBadConfigs)
{
    const ChannelParams c = small_link();
    EXPECT_THROW(estimate_E(c, config(-1e-3, 1)), std::invalid_argument);
    EXPECT_THROW(estimate_E(c, config(1e-3, 1, 1, 10)), std::invalid_argument);
    EXPECT_THROW(estimate_E(c, config(1e-3, 1, 10, 1)), std::invalid_argument);
    EXPECT_THROW(estimate_E(c, config(1e-3, 1, 10, 0)), std::invalid_argument);
}

TEST(OuterStatistic, BiasCorrectionSubtractsInnerVarianceOverN)
{
    InnerMoments mom(3);
    const std::vector<std::vector<double>> rows{{1.0, 2.0, 3.0}, {2.0, 2.0, 5.0}, {4.0, 2.0, 1.0}, {1.0, 2.0, 3.0}};
    for (const auto& r : rows) mom.add(std::span<const double>(r));
    const double plain = outer_statistic(mom, 0.0, 0.0, EstimatorForm::squared_inner_mean, false);
    const double corrected = outer_statistic(mom, 0.0, 0.0, EstimatorForm::squared_inner_mean, true);
    // means 2, 2, 3; unbiased variances 2, 0, 8/3
    EXPECT_NEAR(plain, (4.0 + 4.0 + 9.0) / 3.0, 1e-14);
    EXPECT_NEAR(plain - corrected, (2.0 + 0.0 + 8.0 / 3.0) / 4.0 / 3.0, 1e-14);
    const double cv = outer_statistic(mom, 1.0, 0.5, EstimatorForm::conditional_variance, false);
    EXPECT_NEAR(cv, 2.0 * 1.5 * 1.5 - (2.0 + 0.0 + 8.0 / 3.0) / 3.0, 1e-14);
}

TEST(InnerMoments, MergeMatchesSequentialAccumulation)
{
    std::mt19937_64 rng(4);
    std::exponential_distribution<double> ex(3.0);
    InnerMoments all(5), left(5), right(5);
    for (int i = 0; i < 37; ++i) {
        std::vector<double> x(5);
        for (auto& v : x) v = ex(rng);
        all.add(std::span<const double>(x));
        (i < 20 ? left : right).add(std::span<const double>(x));
    }
    left.merge(right);
    ASSERT_EQ(left.count, all.count);
    for (int i = 0; i < 5; ++i) {
        EXPECT_NEAR(left.mean[i], all.mean[i], 1e-14);
        EXPECT_NEAR(left.variance(i), all.variance(i), 1e-13);
    }
}

// Adding signal-independent zero-mean noise of variance Pt to every |a_K,i|^2
// raises kappa by L * Pt.
TEST(Kappa, AmplitudeNoiseRaisesKappaByLTimesVariance)
{
    const int len = 16, inner = 20000;
    const ChannelParams c = small_link(8, len);
    const SsfChannel ch(c);
    const double p = dbm_to_watts(5.0);
    const ComplexField a0 = gaussian_field(len, p, NoiseSource{8, input_stream(0)});
    const double extra_var = 0.25 * p * p;

    std::mt19937_64 rng(123);
    std::normal_distribution<double> nd(0.0, std::sqrt(extra_var));
    InnerMoments base(len), perturbed(len);
    std::vector<double> q(len), qp(len);
    ComplexField a;
    for (int s = 0; s < inner; ++s) {
        a = a0;
        ch.propagate(a, NoiseSource{8, inner_stream(0, s)});
        for (int i = 0; i < len; ++i) {
            q[i] = std::norm(a[i]);
            qp[i] = q[i] + nd(rng);
        }
        base.add(std::span<const double>(q));
        perturbed.add(std::span<const double>(qp));
    }
    const double pn = c.noise_power;
    const double k0 = kappa_from_E(outer_statistic(base, p, pn, EstimatorForm::conditional_variance, false), p, pn, len);
    const double k1 =
        kappa_from_E(outer_statistic(perturbed, p, pn, EstimatorForm::conditional_variance, false), p, pn, len);
    // sample variance of the added noise has relative sd sqrt(2/inner) per sample
    EXPECT_NEAR(k1 - k0, len * extra_var, 4.0 * len * extra_var * std::sqrt(2.0 / (inner * len)) + 0.02 * len * extra_var);
}

TEST(Kappa, ExamplesAndArtifactDetection)
{
    const double p = 2e-3, pn = 4e-6;
    const double total = p + pn;
    EXPECT_EQ(kappa_from_E(2.0 * total * total, p, pn, 7), 0.0);
    EXPECT_NEAR(kappa_from_E(total * total, p, pn, 1), total * total, 1e-20);
    EXPECT_NEAR(kappa_from_E(linear_channel_E(p, pn), p, pn, 256), (2.0 * p * pn + pn * pn) * 256, 1e-18);
    EXPECT_THROW(kappa_from_E(2.0 * total * total * (1 + 1e-12), p, pn, 4), EstimationArtifact);
}

TEST(LowerBoundL1, Examples)
{
    const double p = 1e-3, pn = 4.1e-6, total = p + pn;
    EXPECT_NEAR(lower_bound_L1(total * total, p, pn), 0.5 * std::log2(std::numbers::e / (2.0 * std::numbers::pi)), 1e-14);
    EXPECT_NEAR(lower_bound_L1(total * total, p, pn), -0.6043, 2e-4);
    EXPECT_THROW(lower_bound_L1(2.0 * total * total, p, pn), EstimationArtifact);
    EXPECT_THROW(lower_bound_L1(3.0 * total * total, p, pn), EstimationArtifact);
}

TEST(LowerBoundL1, DeltaMethodStdError)
{
    const double p = 1e-3, pn = 4.1e-6, total = p + pn;
    const double e = 1.9 * total * total, se = 1e-3 * total * total;
    const double h = 1e-6 * total * total;
    const double slope = (lower_bound_L1(e + h, p, pn) - lower_bound_L1(e - h, p, pn)) / (2 * h);
    EXPECT_NEAR(lower_bound_L1_stderr(e, se, p, pn), std::abs(slope) * se, 1e-6 * std::abs(slope) * se);
}

TEST(SweepL1, RowPerPowerAndLinearOracle)
{
    const ChannelParams c = linear_link(4, 32);
    const std::vector<double> powers{-10.0, 0.0};
    const SweepResult rows = sweep_L1(c, powers, config(0.0, 9, 10, 100));
    ASSERT_EQ(rows.size(), powers.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        ASSERT_TRUE(rows[i].ok()) << rows[i].error;
        EXPECT_EQ(rows[i].bound, BoundName::L1);
        EXPECT_EQ(rows[i].power_dbm, powers[i]);
        const double lp = low_power_approx(dbm_to_watts(powers[i]), c.noise_power);
        EXPECT_NEAR(rows[i].value_bits, lp, 3.0 * rows[i].stderr_bits);
    }
}

TEST(SweepL1, PreconditionsAndPerRowFailures)
{
    const ChannelParams c = linear_link(4, 32);
    const std::vector<double> none;
    EXPECT_THROW(sweep_L1(c, none, config(0.0, 1)), std::invalid_argument);
    const std::vector<double> one{0.0};
    EXPECT_THROW(sweep_L1(c, one, config(0.0, 1, 10, 0)), std::invalid_argument);

    // Pn = 0 makes the conditional variance vanish for gamma = 0: row flagged, sweep continues.
    const ChannelParams noiseless = with_noise_power(c, 0.0);
    const std::vector<double> two{-10.0, 0.0};
    const SweepResult rows = sweep_L1(noiseless, two, config(0.0, 1, 4, 10));
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_FALSE(rows[0].ok());
    EXPECT_TRUE(std::isnan(rows[0].value_bits));
    EXPECT_FALSE(rows[1].ok());
}

TEST(SweepL1, SeedDependsOnlyOnPoint)
{
    const ChannelParams c = small_link(4, 32);
    const std::vector<double> a{0.0, 5.0}, b{5.0};
    const SweepResult ra = sweep_L1(c, a, config(0.0, 77, 4, 20));
    const SweepResult rb = sweep_L1(c, b, config(0.0, 77, 4, 20));
    EXPECT_EQ(ra[1].value_bits, rb[0].value_bits);
}

// L1 rises with power, peaks near 0 dBm and falls as nonlinear phase noise
// turns into amplitude noise.
TEST(SweepL1, CurvePeaksNearZeroDbm)
{
    const ChannelParams c = small_link(64, 64);
    const std::vector<double> powers{-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0};
    const SweepResult rows = sweep_L1(c, powers, config(0.0, 4, 10, 100));
    std::size_t best = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        ASSERT_TRUE(rows[i].ok()) << rows[i].error;
        if (rows[i].value_bits > rows[best].value_bits) best = i;
    }
    EXPECT_GE(powers[best], -5.0);
    EXPECT_LE(powers[best], 5.0);
    EXPECT_GT(rows[best].value_bits, rows.front().value_bits);
    EXPECT_GT(rows[best].value_bits, rows.back().value_bits);
}
