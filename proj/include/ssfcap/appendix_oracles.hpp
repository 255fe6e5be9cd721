#pragma once

// Closed forms behind the cross-moment bound: the noncentral chi-squared
// MGF, the expectations of Kerr-rotated noisy samples, and a Monte Carlo
// verifier of the conditional cross-moment bound itself.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>

#include "closed_form_bounds.hpp"
#include "philox.hpp"
#include "ssf_channel.hpp"

namespace ssfcap {

/// Fixed signal sample c, noise variance sigma2 = E|n|^2 and Kerr coefficient
/// theta = gamma * dz.
struct KerrMomentInput {
    std::complex<double> c;
    double sigma2 = 1.0;
    double theta = 0.0;
};

/// MGF of a noncentral chi-squared variable with two degrees of freedom,
/// (1/(1-2t)) exp(lambda t/(1-2t)), for Re(t) < 1/2.
inline std::complex<double> noncentral_chi2_mgf(std::complex<double> t, double lambda)
{
    if (!(t.real() < 0.5)) throw std::domain_error("noncentral_chi2_mgf requires Re(t) < 1/2");
    const std::complex<double> d = 1.0 - 2.0 * t;
    return std::exp(lambda * t / d) / d;
}

/// E[exp(j theta |c+n|^2)] for n ~ CN(0, sigma2), via the MGF of
/// w = 2|c+n|^2/sigma2 at t = j theta sigma2 / 2.
inline std::complex<double> expected_kerr_phase(const KerrMomentInput& in)
{
    if (!(in.sigma2 > 0.0)) throw std::invalid_argument("sigma2 must be > 0");
    const double lambda = 2.0 * std::norm(in.c) / in.sigma2;
    return noncentral_chi2_mgf({0.0, 0.5 * in.theta * in.sigma2}, lambda);
}

/// E[n exp(j theta (|n|^2 + 2 Re(c n^*)))] for n ~ CN(0, sigma2).
inline std::complex<double> expected_noise_kerr(const KerrMomentInput& in)
{
    if (!(in.sigma2 > 0.0)) throw std::invalid_argument("sigma2 must be > 0");
    const std::complex<double> j{0.0, 1.0};
    const std::complex<double> d = 1.0 - j * in.sigma2 * in.theta;
    const double s_theta_c = std::sqrt(in.sigma2) * in.theta * std::abs(in.c);
    return j * in.sigma2 * in.theta / (d * d) * in.c * std::exp(-s_theta_c * s_theta_c / d);
}

/// |expected_noise_kerr| in real arithmetic.
inline double expected_noise_kerr_magnitude(const KerrMomentInput& in)
{
    const double q = in.sigma2 * in.sigma2 * in.theta * in.theta;
    const double r = std::abs(in.c);
    return in.sigma2 * std::abs(in.theta) / (1.0 + q) * r * std::exp(-in.sigma2 * in.theta * in.theta * r * r / (1.0 + q));
}

/// sup over |c| of |expected_noise_kerr|: sigma / sqrt(2 e (1 + sigma^4 theta^2)),
/// from max_x x exp(-a x^2) = 1/sqrt(2 e a). Exactly 0 at theta = 0, where the
/// expectation vanishes identically; the theta -> 0+ limit is sigma/sqrt(2e)
/// because the maximizing |c| diverges.
inline double max_noise_kerr_magnitude(double sigma2, double theta)
{
    if (!(sigma2 > 0.0)) throw std::invalid_argument("sigma2 must be > 0");
    if (theta == 0.0) return 0.0;
    return std::sqrt(sigma2) / std::sqrt(2.0 * std::numbers::e * (1.0 + sigma2 * sigma2 * theta * theta));
}

struct CrossMomentReport {
    int m = 0;
    int n = 0;
    std::complex<double> estimate;  // E[u_{k+1,m} u_{k+1,n}^* | a0]
    double std_error = 0.0;
    double bound = 0.0;
    int samples = 0;
    bool pass = false;  // |estimate| + 3 std_error <= bound
};

/// Monte Carlo check of |E[u_{k+1,m} u*_{k+1,n} | a0]| <= cross_moment_bound(c)
/// for one input draw a0 ~ CN(0, P I) and a seed-chosen pair m != n.
/// u_{k+1} is the field after k full segments followed by the Kerr step of
/// segment k+1; requires 1 <= k <= K-1.
inline CrossMomentReport cross_moment_bound_check(const ChannelParams& c, double power, int k, int samples,
                                                  std::uint64_t seed)
{
    if (!(c.gamma > 0.0)) throw std::domain_error("cross-moment check requires gamma > 0");
    if (k < 1 || k > c.segments - 1) throw std::invalid_argument("cross-moment check requires 1 <= k <= K-1");
    if (samples < 2) throw std::invalid_argument("cross-moment check requires samples >= 2");

    CrossMomentReport rep;
    rep.samples = samples;
    rep.bound = cross_moment_bound(c);
    const std::uint64_t pick = mix64(seed ^ 0xC0FFEEull);
    rep.m = static_cast<int>(pick % static_cast<std::uint64_t>(c.block_len));
    rep.n = static_cast<int>((rep.m + 1 + (pick >> 32) % static_cast<std::uint64_t>(c.block_len - 1)) % c.block_len);

    ChannelParams first_k = c;
    first_k.segments = k;  // same dz and sigma_n^2, fewer segments
    const SsfChannel prefix(first_k);
    const SsfChannel full(c);
    const ComplexField a0 = gaussian_field(c.block_len, power, NoiseSource{seed, ~0ull});

    std::complex<double> sum{0.0, 0.0};
    double sum_sq = 0.0;
    ComplexField a(a0.size());
    for (int s = 0; s < samples; ++s) {
        a = a0;
        prefix.propagate(a, NoiseSource{seed, static_cast<std::uint64_t>(s)});
        full.nonlinear_step(a);
        const std::complex<double> x = a[rep.m] * std::conj(a[rep.n]);
        sum += x;
        sum_sq += std::norm(x);
    }
    rep.estimate = sum / static_cast<double>(samples);
    const double var = (sum_sq - samples * std::norm(rep.estimate)) / (samples - 1);
    rep.std_error = std::sqrt(std::max(0.0, var) / samples);
    rep.pass = std::abs(rep.estimate) + 3.0 * rep.std_error <= rep.bound;
    return rep;
}

} // namespace ssfcap
