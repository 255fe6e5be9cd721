#pragma once

// Split-step Fourier channel: K repetitions of
//   Kerr rotation  u_l = a_l exp(j gamma |a_l|^2 dz)
//   dispersion     b   = F^H diag(exp(j dz f(l))) F u
//   noise          a   = b + n,  n ~ CN(0, sigma_n^2 I)
// applied in exactly that order (no symmetrized splitting).

#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "philox.hpp"
#include "unitary_dft.hpp"
#include "units.hpp"

namespace ssfcap {

/// One block of L complex samples (sqrt(W) per sample).
using ComplexField = std::vector<std::complex<double>>;

/// Dispersion profile f(l) = (beta2/2)(2 pi/T)^2 (L/2 - |L/2 - l|)^2, in 1/km.
inline double dispersion_profile(int l, const ChannelParams& c)
{
    if (l < 0 || l >= c.block_len) throw std::out_of_range("dispersion_profile: index out of range");
    const double half = 0.5 * static_cast<double>(c.block_len);
    const double dist = half - std::abs(half - static_cast<double>(l));
    const double w = 2.0 * std::numbers::pi / c.block_duration();
    return 0.5 * c.beta2 * w * w * dist * dist;
}

/// Circularly symmetric Gaussian block with per-sample variance `power`,
/// drawn from row `segment` of the given stream.
inline ComplexField gaussian_field(int block_len, double power, const NoiseSource& ns, std::uint32_t segment = 0)
{
    if (!(power >= 0.0)) throw std::invalid_argument("gaussian_field: power must be >= 0");
    ComplexField a(static_cast<std::size_t>(block_len));
    for (int l = 0; l < block_len; ++l) a[l] = ns.complex_normal(segment, static_cast<std::uint32_t>(l), power);
    return a;
}

inline double squared_norm(std::span<const std::complex<double>> a)
{
    double s = 0.0;
    for (const auto& v : a) s += std::norm(v);
    return s;
}

/// Precomputed per-channel state (dispersion phases and FFT plans). Immutable
/// after construction; all step functions are safe to call concurrently on
/// distinct fields.
class SsfChannel {
public:
    explicit SsfChannel(const ChannelParams& c) : params_(c), dft_(std::make_shared<UnitaryDft>(c.block_len))
    {
        if (c.block_len < 2) throw std::invalid_argument("block_len must be >= 2");
        if (c.segments < 1) throw std::invalid_argument("segments must be >= 1");
        const double inv_len = 1.0 / static_cast<double>(c.block_len);
        phases_.resize(static_cast<std::size_t>(c.block_len));
        for (int l = 0; l < c.block_len; ++l)
            phases_[l] = std::polar(inv_len, c.dz * dispersion_profile(l, c));
    }

    const ChannelParams& params() const { return params_; }

    void nonlinear_step(std::span<std::complex<double>> a) const
    {
        check_length(a.size());
        const double theta = params_.gamma * params_.dz;
        if (theta == 0.0) return;
        for (auto& v : a) v *= std::polar(1.0, theta * std::norm(v));
    }

    void linear_step(std::span<std::complex<double>> a) const
    {
        check_length(a.size());
        if (params_.beta2 == 0.0) return;
        dft_->forward_unscaled(a);
        for (std::size_t l = 0; l < a.size(); ++l) a[l] *= phases_[l];
        dft_->backward_unscaled(a);
    }

    void add_noise(std::span<std::complex<double>> a, const NoiseSource& ns, std::uint32_t segment) const
    {
        check_length(a.size());
        const double var = params_.segment_noise_var;
        if (var == 0.0) return;
        for (std::size_t l = 0; l < a.size(); ++l)
            a[l] += ns.complex_normal(segment, static_cast<std::uint32_t>(l), var);
    }

    /// Runs all K segments in place; segment k draws noise from row k of `ns`.
    void propagate(std::span<std::complex<double>> a, const NoiseSource& ns) const
    {
        for (int k = 0; k < params_.segments; ++k) {
            nonlinear_step(a);
            linear_step(a);
            add_noise(a, ns, static_cast<std::uint32_t>(k));
        }
    }

private:
    void check_length(std::size_t n) const
    {
        if (n != static_cast<std::size_t>(params_.block_len))
            throw std::invalid_argument("field length does not match block_len");
    }

    ChannelParams params_;
    std::shared_ptr<const UnitaryDft> dft_;
    ComplexField phases_;  // exp(j dz f(l)) / L
};

inline ComplexField nonlinear_step(ComplexField a, const ChannelParams& c)
{
    SsfChannel(c).nonlinear_step(a);
    return a;
}

inline ComplexField linear_step(ComplexField a, const ChannelParams& c)
{
    SsfChannel(c).linear_step(a);
    return a;
}

inline ComplexField add_noise(ComplexField a, const ChannelParams& c, const NoiseSource& ns,
                              std::uint32_t segment = 0)
{
    SsfChannel(c).add_noise(a, ns, segment);
    return a;
}

inline ComplexField propagate(ComplexField a0, const ChannelParams& c, const NoiseSource& ns)
{
    SsfChannel(c).propagate(a0, ns);
    return a0;
}

} // namespace ssfcap
