#pragma once

// Nested Monte Carlo estimation of
//   E = (1/L) sum_i E_{a0}[ E[|a_K,i|^2 | a0]^2 ]
// and the simulation-based capacity lower bound
//   L1 = (1/2) log2( (e/2pi) (P+Pn)^2 / (2(P+Pn)^2 - E) ).
//
// Two per-outer-draw statistics are available:
//   conditional_variance  E_o = 2(P+Pn)^2 - (1/L) sum_i s_i^2
//   squared_inner_mean    E_o = (1/L) sum_i m_i^2   (optionally m_i^2 - s_i^2/n)
// where m_i and s_i^2 are the inner-loop mean and unbiased variance of
// |a_K,i|^2. Both have the same expectation (up to the O(1/n_inner) bias of
// the uncorrected squared mean) because a_K,i ~ CN(0, P+Pn) gives
// E|a_K,i|^4 = 2(P+Pn)^2. The conditional-variance form estimates the
// small difference 2(P+Pn)^2 - E directly and is the default.

#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "parallel.hpp"
#include "ssf_channel.hpp"
#include "sweep_result.hpp"
#include "units.hpp"

namespace ssfcap {

enum class EstimatorForm { conditional_variance, squared_inner_mean };

struct MonteCarloConfig {
    int n_outer = 20;
    int n_inner = 200;
    std::uint64_t seed = 1;
    double input_power = 0.0;  // W
    bool bias_correction = false;  // squared_inner_mean only
    EstimatorForm form = EstimatorForm::conditional_variance;
    unsigned workers = 0;  // 0 = all cores; never affects results
};

/// Monte Carlo scalar with its standard error.
struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
    int n_outer = 0;
    int n_inner = 0;
};

/// Raised when a Monte Carlo estimate of E lands on or above its theoretical
/// ceiling 2(P+Pn)^2, which makes kappa non-positive.
class EstimationArtifact : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Per-sample running mean and sum of squared deviations of |a_K,i|^2 over
/// inner realizations (Welford / Chan et al. merge).
struct InnerMoments {
    long count = 0;
    std::vector<double> mean;
    std::vector<double> m2;

    explicit InnerMoments(std::size_t len = 0) : mean(len, 0.0), m2(len, 0.0) {}

    void add(std::span<const double> intensity)
    {
        ++count;
        const double inv = 1.0 / static_cast<double>(count);
        for (std::size_t i = 0; i < mean.size(); ++i) {
            const double d = intensity[i] - mean[i];
            mean[i] += d * inv;
            m2[i] += d * (intensity[i] - mean[i]);
        }
    }

    void add(std::span<const std::complex<double>> field)
    {
        std::vector<double> intensity(field.size());
        for (std::size_t i = 0; i < field.size(); ++i) intensity[i] = std::norm(field[i]);
        add(intensity);
    }

    void merge(const InnerMoments& other)
    {
        if (other.count == 0) return;
        if (count == 0) {
            *this = other;
            return;
        }
        const double na = static_cast<double>(count), nb = static_cast<double>(other.count);
        const double n = na + nb;
        for (std::size_t i = 0; i < mean.size(); ++i) {
            const double delta = other.mean[i] - mean[i];
            mean[i] += delta * nb / n;
            m2[i] += other.m2[i] + delta * delta * na * nb / n;
        }
        count += other.count;
    }

    double variance(std::size_t i) const { return m2[i] / static_cast<double>(count - 1); }
};

/// Contribution of one outer draw a0 to the estimate of E.
inline double outer_statistic(const InnerMoments& mom, double power, double noise_power, EstimatorForm form,
                              bool bias_correction)
{
    if (mom.count < 2) throw std::invalid_argument("outer_statistic needs at least two inner realizations");
    const std::size_t len = mom.mean.size();
    double acc = 0.0;
    if (form == EstimatorForm::conditional_variance) {
        for (std::size_t i = 0; i < len; ++i) acc += mom.variance(i);
        const double total = power + noise_power;
        return 2.0 * total * total - acc / static_cast<double>(len);
    }
    const double n = static_cast<double>(mom.count);
    for (std::size_t i = 0; i < len; ++i) {
        double sq = mom.mean[i] * mom.mean[i];
        if (bias_correction) sq -= mom.variance(i) / n;
        acc += sq;
    }
    return acc / static_cast<double>(len);
}

/// Stream of outer draw `outer`; inner realization `inner` uses its own stream.
/// Inner index 0xFFFFFFFF is reserved for the input block a0.
constexpr std::uint64_t input_stream(int outer) { return (static_cast<std::uint64_t>(outer) << 32) | 0xFFFFFFFFull; }
constexpr std::uint64_t inner_stream(int outer, int inner)
{
    return (static_cast<std::uint64_t>(outer) << 32) | static_cast<std::uint32_t>(inner);
}

/// Inner realizations per parallel work unit. Fixed so the reduction tree, and
/// therefore the floating-point result, is independent of the worker count.
inline constexpr int kInnerBlock = 25;

/// Conditional moments of |a_K|^2 for one outer draw.
inline InnerMoments simulate_outer(const SsfChannel& channel, const MonteCarloConfig& mc, int outer)
{
    const ChannelParams& c = channel.params();
    const ComplexField a0 = gaussian_field(c.block_len, mc.input_power, NoiseSource{mc.seed, input_stream(outer)});
    const int nblocks = (mc.n_inner + kInnerBlock - 1) / kInnerBlock;
    std::vector<InnerMoments> blocks(static_cast<std::size_t>(nblocks));
    parallel_for(static_cast<std::size_t>(nblocks), mc.workers, [&](std::size_t b) {
        InnerMoments mom(a0.size());
        ComplexField a(a0.size());
        std::vector<double> intensity(a0.size());
        const int begin = static_cast<int>(b) * kInnerBlock;
        const int end = std::min(mc.n_inner, begin + kInnerBlock);
        for (int inner = begin; inner < end; ++inner) {
            a = a0;
            channel.propagate(a, NoiseSource{mc.seed, inner_stream(outer, inner)});
            for (std::size_t i = 0; i < a.size(); ++i) intensity[i] = std::norm(a[i]);
            mom.add(intensity);
        }
        blocks[b] = std::move(mom);
    });
    InnerMoments total(a0.size());
    for (const auto& b : blocks) total.merge(b);
    return total;
}

inline void validate(const MonteCarloConfig& mc)
{
    if (mc.n_outer < 2) throw std::invalid_argument("n_outer must be >= 2");
    if (mc.n_inner < 2) throw std::invalid_argument("n_inner must be >= 2");
    if (!(mc.input_power >= 0.0) || !std::isfinite(mc.input_power))
        throw std::invalid_argument("input power must be finite and >= 0");
}

inline Estimate estimate_E(const SsfChannel& channel, const MonteCarloConfig& mc)
{
    validate(mc);
    const ChannelParams& c = channel.params();
    std::vector<double> per_outer(static_cast<std::size_t>(mc.n_outer));
    for (int o = 0; o < mc.n_outer; ++o) {
        const InnerMoments mom = simulate_outer(channel, mc, o);
        per_outer[o] = outer_statistic(mom, mc.input_power, c.noise_power, mc.form, mc.bias_correction);
    }
    double mean = 0.0;
    for (double x : per_outer) mean += x;
    mean /= mc.n_outer;
    double ss = 0.0;
    for (double x : per_outer) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / (mc.n_outer - 1));
    return Estimate{mean, sd / std::sqrt(static_cast<double>(mc.n_outer)), mc.n_outer, mc.n_inner};
}

inline Estimate estimate_E(const ChannelParams& c, const MonteCarloConfig& mc) { return estimate_E(SsfChannel(c), mc); }

/// kappa = (2(P+Pn)^2 - E) L.
inline double kappa_from_E(double e, double power, double noise_power, int block_len)
{
    const double total = power + noise_power;
    const double ceiling = 2.0 * total * total;
    if (e > ceiling) throw EstimationArtifact("E exceeds 2(P+Pn)^2; kappa would be negative");
    return (ceiling - e) * block_len;
}

inline double lower_bound_L1(double e, double power, double noise_power)
{
    const double total = power + noise_power;
    const double gap = 2.0 * total * total - e;
    if (!(gap > 0.0)) throw EstimationArtifact("E >= 2(P+Pn)^2; L1 is unbounded (estimation artifact)");
    return 0.5 * std::log2(std::numbers::e / (2.0 * std::numbers::pi) * total * total / gap);
}

/// Delta-method standard error of L1: |dL1/dE| * se(E). Approximate; only
/// meaningful when se(E) is small relative to 2(P+Pn)^2 - E.
inline double lower_bound_L1_stderr(double e, double e_stderr, double power, double noise_power)
{
    const double total = power + noise_power;
    const double gap = 2.0 * total * total - e;
    if (!(gap > 0.0)) throw EstimationArtifact("E >= 2(P+Pn)^2; L1 is unbounded (estimation artifact)");
    return e_stderr / (2.0 * std::numbers::ln2 * gap);
}

struct L1Estimate {
    double value_bits = 0.0;
    double stderr_bits = 0.0;
    Estimate e;
};

inline L1Estimate estimate_L1(const SsfChannel& channel, const MonteCarloConfig& mc)
{
    const Estimate e = estimate_E(channel, mc);
    const double pn = channel.params().noise_power;
    return L1Estimate{lower_bound_L1(e.value, mc.input_power, pn),
                      lower_bound_L1_stderr(e.value, e.std_error, mc.input_power, pn), e};
}

/// Seed used for one (K, power) point of a sweep. Depends only on the point,
/// not on the composition or order of the sweep lists.
inline std::uint64_t point_seed(std::uint64_t seed, int segments, double power_dbm)
{
    return derive_seed(derive_seed(seed, static_cast<std::uint64_t>(segments)), std::bit_cast<std::uint64_t>(power_dbm));
}

/// One L1 row per power. Per-point failures are recorded in the row and the
/// sweep continues.
inline SweepResult sweep_L1(const ChannelParams& c, std::span<const double> powers_dbm, const MonteCarloConfig& mc)
{
    if (powers_dbm.empty()) throw std::invalid_argument("sweep_L1: empty power list");
    MonteCarloConfig base = mc;
    base.input_power = 0.0;
    validate(base);
    const SsfChannel channel(c);
    SweepResult rows;
    rows.reserve(powers_dbm.size());
    for (double p_dbm : powers_dbm) {
        SweepRow row{.power_dbm = p_dbm, .segments = c.segments, .bound = BoundName::L1,
                     .n_outer = mc.n_outer, .n_inner = mc.n_inner, .seed = mc.seed, .error = {}};
        try {
            MonteCarloConfig point = mc;
            point.input_power = dbm_to_watts(p_dbm);
            point.seed = point_seed(mc.seed, c.segments, p_dbm);
            const L1Estimate l1 = estimate_L1(channel, point);
            row.value_bits = l1.value_bits;
            row.stderr_bits = l1.stderr_bits;
        } catch (const std::exception& ex) {
            row.value_bits = std::nan("");
            row.stderr_bits = std::nan("");
            row.error = ex.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace ssfcap
