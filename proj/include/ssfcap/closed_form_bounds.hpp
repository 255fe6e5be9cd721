#pragma once

// Closed-form capacity bounds for the SSF channel. All outputs are in bits.
//
// |A00|^{2(K-1)} and its relatives are handled in log space: for realistic
// links 1 - |A00|^2 is ~1e-5 while the exponent is ~1e3, so the naive power
// loses nearly all precision.

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "ssf_channel.hpp"
#include "unitary_dft.hpp"
#include "units.hpp"

namespace ssfcap {

/// A_{0,m} = (1/L) sum_l exp(j dz f(l)) exp(-j 2 pi l m / L), evaluated directly.
inline std::complex<double> a_coeff(int m, const ChannelParams& c)
{
    if (m < 0 || m >= c.block_len) throw std::out_of_range("a_coeff: index out of range");
    const int len = c.block_len;
    std::complex<double> acc{0.0, 0.0};
    for (int l = 0; l < len; ++l) {
        const long lm = (static_cast<long>(l) * m) % len;
        const double phase = c.dz * dispersion_profile(l, c) - 2.0 * std::numbers::pi * static_cast<double>(lm) / len;
        acc += std::polar(1.0, phase);
    }
    return acc / static_cast<double>(len);
}

/// All A_{0,m}, m = 0..L-1, via one FFT.
inline std::vector<std::complex<double>> a_coeffs(const ChannelParams& c)
{
    std::vector<std::complex<double>> a(static_cast<std::size_t>(c.block_len));
    for (int l = 0; l < c.block_len; ++l) a[l] = std::polar(1.0, c.dz * dispersion_profile(l, c));
    UnitaryDft(c.block_len).forward_unscaled(a);
    for (auto& v : a) v /= static_cast<double>(c.block_len);
    return a;
}

/// 1 - |A00|^2 without cancellation: with A00 = (1 - cbar) + j sbar where
/// cbar = mean(2 sin^2(phi/2)) and sbar = mean(sin phi),
/// 1 - |A00|^2 = 2 cbar - cbar^2 - sbar^2.
inline double one_minus_a00_sq(const ChannelParams& c)
{
    double cbar = 0.0, sbar = 0.0;
    for (int l = 0; l < c.block_len; ++l) {
        const double phi = c.dz * dispersion_profile(l, c);
        const double h = std::sin(0.5 * phi);
        cbar += 2.0 * h * h;
        sbar += std::sin(phi);
    }
    cbar /= c.block_len;
    sbar /= c.block_len;
    return std::max(0.0, 2.0 * cbar - cbar * cbar - sbar * sbar);
}

/// alpha = (sum_m |A0m|)^2 - sum_m |A0m|^2.
inline double alpha_from_coeffs(const std::vector<std::complex<double>>& a)
{
    double s1 = 0.0, s2 = 0.0;
    for (const auto& v : a) {
        const double r = std::abs(v);
        s1 += r;
        s2 += r * r;
    }
    return std::max(0.0, s1 * s1 - s2);
}

inline double alpha_coefficient(const ChannelParams& c) { return alpha_from_coeffs(a_coeffs(c)); }

/// K^3/(2 e gamma^2 Pn Z^2) + K/(e Z gamma) + Pn/(2 e K): the bound on the
/// conditional cross-moment |E[u_m u_n^* | a0]| of the Kerr-rotated samples.
inline double cross_moment_bound(const ChannelParams& c)
{
    if (!(c.gamma > 0.0)) throw std::domain_error("cross-moment bound requires gamma > 0");
    if (!(c.noise_power > 0.0)) throw std::domain_error("cross-moment bound requires Pn > 0");
    const double k = c.segments, e = std::numbers::e, g = c.gamma, pn = c.noise_power, z = c.z_total;
    return k * k * k / (2.0 * e * g * g * pn * z * z) + k / (e * z * g) + pn / (2.0 * e * k);
}

inline double m_k(const ChannelParams& c, double alpha) { return alpha * c.segments * cross_moment_bound(c); }
inline double m_k(const ChannelParams& c) { return m_k(c, alpha_coefficient(c)); }

/// C1 = (Z^2/L) sum_l f(l)^2.
inline double c1(const ChannelParams& c)
{
    double s = 0.0;
    for (int l = 0; l < c.block_len; ++l) {
        const double f = dispersion_profile(l, c);
        s += f * f;
    }
    return c.z_total * c.z_total * s / c.block_len;
}

/// C2 = sqrt(6) Z sum_l f(l); carries the sign of beta2.
inline double c2(const ChannelParams& c)
{
    double s = 0.0;
    for (int l = 0; l < c.block_len; ++l) s += dispersion_profile(l, c);
    return std::sqrt(6.0) * c.z_total * s;
}

/// G = C2 (C2/(4K) + 1) * cross_moment_bound, with C2 taken as written (signed).
inline double g_const(const ChannelParams& c, double c2_value)
{
    return c2_value * (c2_value / (4.0 * c.segments) + 1.0) * cross_moment_bound(c);
}
inline double g_const(const ChannelParams& c) { return g_const(c, c2(c)); }

/// Everything the closed-form bounds need, computed once per channel.
struct BoundConstants {
    std::vector<std::complex<double>> a_coeffs;
    double one_minus_a00_sq = 0.0;  // 1 - |A00|^2, accurate
    double alpha_coef = 0.0;
    double m_k = 0.0;  // NaN when gamma = 0 or Pn = 0
    double c1 = 0.0;
    double c2 = 0.0;
    double g = 0.0;  // NaN when gamma = 0 or Pn = 0

    /// log|A00|^2
    double log_a00_sq() const { return std::log1p(-one_minus_a00_sq); }
};

inline BoundConstants bound_constants(const ChannelParams& c)
{
    BoundConstants b;
    b.a_coeffs = a_coeffs(c);
    b.one_minus_a00_sq = one_minus_a00_sq(c);
    b.alpha_coef = alpha_from_coeffs(b.a_coeffs);
    b.c1 = ssfcap::c1(c);
    b.c2 = ssfcap::c2(c);
    if (c.gamma > 0.0 && c.noise_power > 0.0) {
        b.m_k = ssfcap::m_k(c, b.alpha_coef);
        b.g = g_const(c, b.c2);
    } else {
        b.m_k = std::numeric_limits<double>::quiet_NaN();
        b.g = std::numeric_limits<double>::quiet_NaN();
    }
    return b;
}

/// log zeta = 2(K-1) log|A00|^2 - M_K / (P |A00|^{2(K-1)}).
inline double log_zeta(double power, const ChannelParams& c, const BoundConstants& b)
{
    if (!(power > 0.0)) throw std::invalid_argument("zeta requires P > 0");
    const double km1 = c.segments - 1;
    const double log_a = b.log_a00_sq();  // log|A00|^2
    const double mk = b.alpha_coef == 0.0 ? 0.0 : b.m_k;
    if (std::isnan(mk)) throw std::domain_error("zeta requires gamma > 0 and Pn > 0 unless alpha = 0");
    return 2.0 * km1 * log_a - mk / (power * std::exp(km1 * log_a));
}

inline double zeta(double power, const ChannelParams& c, const BoundConstants& b)
{
    return std::exp(log_zeta(power, c, b));
}
inline double zeta(double power, const ChannelParams& c) { return zeta(power, c, bound_constants(c)); }

/// Closed-form lower bound L2 for a given zeta; exposed for the zeta = 0 edge.
inline double lower_bound_L2_from_zeta_log(double power, double noise_power, double log_zeta_value)
{
    const double total = power + noise_power;
    const double one_minus_zeta = -std::expm1(log_zeta_value);
    const double denom = one_minus_zeta * power * power + 2.0 * power * noise_power + noise_power * noise_power;
    return 0.5 * std::log2(std::numbers::e / (4.0 * std::numbers::pi) * total * total / denom);
}

inline double lower_bound_L2(double power, const ChannelParams& c, const BoundConstants& b)
{
    return lower_bound_L2_from_zeta_log(power, c.noise_power, log_zeta(power, c, b));
}
inline double lower_bound_L2(double power, const ChannelParams& c)
{
    return lower_bound_L2(power, c, bound_constants(c));
}

/// High-power limit of L2: -(1/2) log2((4 pi/e)(1 - |A00|^{4(K-1)})).
/// +infinity when |A00|^{4(K-1)} = 1 (K = 1 or beta2 = 0).
inline double asymptote_L2(const ChannelParams& c, const BoundConstants& b)
{
    const double one_minus = -std::expm1(2.0 * (c.segments - 1) * b.log_a00_sq());
    if (one_minus <= 0.0) return std::numeric_limits<double>::infinity();
    return -0.5 * std::log2(4.0 * std::numbers::pi / std::numbers::e * one_minus);
}
inline double asymptote_L2(const ChannelParams& c) { return asymptote_L2(c, bound_constants(c)); }

/// Thrown when L3 is requested outside the K region where it is proven.
class OutsideValidityRegion : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

inline double lower_bound_L3(double power, const ChannelParams& c, const BoundConstants& b)
{
    if (!(power > 0.0)) throw std::invalid_argument("L3 requires P > 0");
    if (!(b.c1 > 0.0)) throw OutsideValidityRegion("L3 requires C1 > 0 (beta2 != 0)");
    const double threshold = k_validity_threshold(c, b.c1);
    if (!(c.segments > threshold))
        throw OutsideValidityRegion("L3 requires K > " + std::to_string(threshold) + ", got " +
                                    std::to_string(c.segments));
    if (std::isnan(b.g)) throw std::domain_error("L3 requires gamma > 0 and Pn > 0");
    const double pn = c.noise_power;
    const double total = power + pn;
    const double denom = 2.0 * b.c1 * power * power / c.segments + 2.0 * power * pn + power * b.g + pn * pn;
    return 0.5 * std::log2(std::numbers::e / (4.0 * std::numbers::pi) * total * total / denom);
}
inline double lower_bound_L3(double power, const ChannelParams& c)
{
    return lower_bound_L3(power, c, bound_constants(c));
}

/// High-power limit of L3: (1/2) log2(e K / (8 pi C1)).
inline double asymptote_L3(const ChannelParams& c, double c1_value)
{
    if (!(c1_value > 0.0)) throw std::domain_error("asymptote_L3 requires C1 > 0");
    return 0.5 * std::log2(std::numbers::e * c.segments / (8.0 * std::numbers::pi * c1_value));
}
inline double asymptote_L3(const ChannelParams& c) { return asymptote_L3(c, ssfcap::c1(c)); }

/// AWGN upper bound log2(1 + P/Pn), valid for every K.
inline double awgn_upper(double power, double noise_power)
{
    if (!(noise_power > 0.0)) throw std::invalid_argument("awgn_upper requires Pn > 0");
    return std::log2(1.0 + power / noise_power);
}

/// L1 of the dispersion-only (gamma = 0) channel:
/// (1/2) log2((e/2pi)(1 + P^2/((2P+Pn)Pn))).
inline double low_power_approx(double power, double noise_power)
{
    if (!(noise_power > 0.0)) throw std::invalid_argument("low_power_approx requires Pn > 0");
    return 0.5 * std::log2(std::numbers::e / (2.0 * std::numbers::pi) *
                           (1.0 + power * power / ((2.0 * power + noise_power) * noise_power)));
}

} // namespace ssfcap
