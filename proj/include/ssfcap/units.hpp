#pragma once

// Physical link parameters, unit conversion and the derived per-segment
// simulation constants.
//
// Internal unit system: watts, seconds, kilometers. With these units both
// gamma * P * dz and dz * dispersion_profile(l) are dimensionless.

#include <cmath>
#include <cstddef>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace ssfcap {

/// Raw fiber and amplifier constants in the units carried by the field names.
struct PhysicalParams {
    double fiber_length_km = 0.0;
    double attenuation_db_per_km = 0.0;
    double dispersion_ps2_per_km = 0.0;  // beta2, may be negative
    double nonlinearity_per_w_km = 0.0;
    double symbol_time_ps = 0.0;
    double photon_energy_j = 0.0;
    double spontaneous_emission = 1.0;
    double filter_bandwidth_hz = 0.0;
};

/// Single-mode link used throughout the numerical examples
/// (850 km, 0.2 dB/km, -21.7 ps^2/km, 1.27 /W/km, 100 ps, 1.3e-19 J, n_sp 4, 200 GHz).
inline PhysicalParams reference_link()
{
    return PhysicalParams{
        .fiber_length_km = 850.0,
        .attenuation_db_per_km = 0.2,
        .dispersion_ps2_per_km = -21.7,
        .nonlinearity_per_w_km = 1.27,
        .symbol_time_ps = 100.0,
        .photon_energy_j = 1.3e-19,
        .spontaneous_emission = 4.0,
        .filter_bandwidth_hz = 200e9,
    };
}

inline void validate(const PhysicalParams& p)
{
    auto require = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(std::string("invalid physical parameter: ") + what);
    };
    require(std::isfinite(p.fiber_length_km) && p.fiber_length_km > 0.0, "fiber_length_km must be > 0");
    require(std::isfinite(p.symbol_time_ps) && p.symbol_time_ps > 0.0, "symbol_time_ps must be > 0");
    require(std::isfinite(p.nonlinearity_per_w_km) && p.nonlinearity_per_w_km >= 0.0,
            "nonlinearity_per_w_km must be >= 0");
    require(std::isfinite(p.filter_bandwidth_hz) && p.filter_bandwidth_hz > 0.0, "filter_bandwidth_hz must be > 0");
    require(std::isfinite(p.spontaneous_emission) && p.spontaneous_emission >= 1.0,
            "spontaneous_emission must be >= 1");
    require(std::isfinite(p.attenuation_db_per_km) && p.attenuation_db_per_km >= 0.0,
            "attenuation_db_per_km must be >= 0");
    require(std::isfinite(p.dispersion_ps2_per_km), "dispersion_ps2_per_km must be finite");
    require(std::isfinite(p.photon_energy_j) && p.photon_energy_j >= 0.0, "photon_energy_j must be >= 0");
}

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(PhysicalParams, fiber_length_km, attenuation_db_per_km, dispersion_ps2_per_km,
                                   nonlinearity_per_w_km, symbol_time_ps, photon_energy_j, spontaneous_emission,
                                   filter_bandwidth_hz)

/// Parses a flat JSON object carrying all eight PhysicalParams keys.
/// Throws std::invalid_argument on missing keys, wrong types or invalid values.
inline PhysicalParams physical_params_from_json(const nlohmann::json& j)
{
    if (!j.is_object()) throw std::invalid_argument("parameter document must be a JSON object");
    PhysicalParams p;
    try {
        p = j.get<PhysicalParams>();
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("parameter document: ") + e.what());
    }
    validate(p);
    return p;
}

inline PhysicalParams load_physical_params(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open parameter file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("malformed parameter file " + path + ": " + e.what());
    }
    return physical_params_from_json(j);
}

/// dB/km to nepers-style linear power attenuation (1/km).
inline double attenuation_linear_per_km(double db_per_km) { return db_per_km * std::numbers::ln10 / 10.0; }

/// Accumulated amplifier noise power per sample, h*nu * Z * alpha * n_sp * B_n (W).
inline double noise_power(const PhysicalParams& p)
{
    return p.photon_energy_j * p.fiber_length_km * attenuation_linear_per_km(p.attenuation_db_per_km) *
           p.spontaneous_emission * p.filter_bandwidth_hz;
}

/// Normalized simulation constants for a K-segment, L-sample discretization.
struct ChannelParams {
    double gamma = 0.0;             // 1/(W km)
    double beta2 = 0.0;             // s^2/km
    double z_total = 0.0;           // km
    int segments = 1;               // K
    double dz = 0.0;                // km, z_total / K
    double dt = 0.0;                // s
    int block_len = 2;              // L
    double noise_power = 0.0;       // W, P_n
    double segment_noise_var = 0.0; // W, P_n / K

    /// Block duration T = L * dt (s).
    double block_duration() const { return static_cast<double>(block_len) * dt; }
};

/// Re-derives dz and the per-segment noise variance for a new segment count.
inline ChannelParams with_segments(ChannelParams c, int segments)
{
    if (segments < 1) throw std::invalid_argument("segments must be >= 1");
    c.segments = segments;
    c.dz = c.z_total / segments;
    c.segment_noise_var = c.noise_power / segments;
    return c;
}

inline ChannelParams with_noise_power(ChannelParams c, double noise_power_w)
{
    if (!(noise_power_w >= 0.0)) throw std::invalid_argument("noise power must be >= 0");
    c.noise_power = noise_power_w;
    c.segment_noise_var = noise_power_w / c.segments;
    return c;
}

inline ChannelParams build_channel(const PhysicalParams& p, int segments, int block_len)
{
    validate(p);
    if (segments < 1) throw std::invalid_argument("segments must be >= 1");
    if (block_len < 2) throw std::invalid_argument("block_len must be >= 2");
    ChannelParams c;
    c.gamma = p.nonlinearity_per_w_km;
    c.beta2 = p.dispersion_ps2_per_km * 1e-24;
    c.z_total = p.fiber_length_km;
    c.dt = p.symbol_time_ps * 1e-12;
    c.block_len = block_len;
    c.noise_power = noise_power(p);
    return with_segments(c, segments);
}

/// Lower limit on K above which the closed-form L3 bound is proven:
/// max(|beta2| Z pi^2 / (2 sqrt2 dt^2), sqrt(c1)).
inline double k_validity_threshold(const ChannelParams& c, double c1)
{
    if (!(c1 >= 0.0)) throw std::invalid_argument("c1 must be >= 0");
    const double dispersion_term =
        std::abs(c.beta2) * c.z_total * std::numbers::pi * std::numbers::pi / (2.0 * std::numbers::sqrt2 * c.dt * c.dt);
    return std::max(dispersion_term, std::sqrt(c1));
}

inline double dbm_to_watts(double p_dbm) { return 1e-3 * std::pow(10.0, p_dbm / 10.0); }

inline double watts_to_dbm(double p_watts)
{
    if (!(p_watts > 0.0)) throw std::invalid_argument("watts_to_dbm requires p > 0");
    return 10.0 * std::log10(p_watts / 1e-3);
}

} // namespace ssfcap
