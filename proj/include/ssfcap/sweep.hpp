#pragma once

// Bound sweeps over input power and segment count, with CSV output.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "closed_form_bounds.hpp"
#include "mc_estimator.hpp"
#include "sweep_result.hpp"
#include "units.hpp"

namespace ssfcap {

/// Named Monte Carlo sizes: "desk" for quick runs, "paper" for the
/// 200 x 1000 x L=2000 configuration of the published curves.
struct Profile {
    int n_outer = 0;
    int n_inner = 0;
    int block_len = 0;
};

inline Profile profile(std::string_view name)
{
    if (name == "desk") return Profile{20, 200, 256};
    if (name == "paper") return Profile{200, 1000, 2000};
    throw std::invalid_argument("unknown profile: " + std::string(name));
}

/// Parses "start:stop:step" (dBm, stop included within half a step) or a
/// single value. Throws std::invalid_argument on malformed or empty ranges.
inline std::vector<double> parse_power_range(std::string_view text)
{
    auto to_double = [](std::string_view s) {
        const std::string str(s);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(str, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad number in power range: '" + str + "'");
        }
        if (used != str.size() || !std::isfinite(v)) throw std::invalid_argument("bad number in power range: '" + str + "'");
        return v;
    };
    if (text.empty()) throw std::invalid_argument("empty power range");
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (true) {
        const std::size_t colon = text.find(':', pos);
        parts.push_back(text.substr(pos, colon == std::string_view::npos ? std::string_view::npos : colon - pos));
        if (colon == std::string_view::npos) break;
        pos = colon + 1;
    }
    if (parts.size() == 1) return {to_double(parts[0])};
    if (parts.size() != 3) throw std::invalid_argument("power range must be start:stop:step");
    const double start = to_double(parts[0]), stop = to_double(parts[1]), step = to_double(parts[2]);
    if (!(step > 0.0)) throw std::invalid_argument("power range step must be > 0");
    if (stop < start - 0.5 * step) throw std::invalid_argument("empty power range");
    std::vector<double> out;
    for (long i = 0;; ++i) {
        const double p = start + static_cast<double>(i) * step;
        if (p > stop + 0.5 * step) break;
        out.push_back(p);
        if (out.size() > 100000) throw std::invalid_argument("power range too long");
    }
    return out;
}

inline std::vector<int> parse_int_list(std::string_view text, std::string_view what)
{
    std::vector<int> out;
    std::stringstream ss{std::string(text)};
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(item, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad " + std::string(what) + " entry: '" + item + "'");
        }
        if (used != item.size()) throw std::invalid_argument("bad " + std::string(what) + " entry: '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("empty " + std::string(what) + " list");
    return out;
}

inline std::vector<BoundName> parse_bound_list(std::string_view text)
{
    std::vector<BoundName> out;
    std::stringstream ss{std::string(text)};
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "all") {
            out.insert(out.end(), std::begin(kAllBounds), std::end(kAllBounds));
            continue;
        }
        const auto b = parse_bound_name(item);
        if (!b) throw std::invalid_argument("unknown bound name: '" + item + "'");
        out.push_back(*b);
    }
    if (out.empty()) throw std::invalid_argument("empty bound list");
    return out;
}

struct SweepConfig {
    PhysicalParams physical = reference_link();
    std::vector<BoundName> bounds;
    std::vector<double> powers_dbm;
    std::vector<int> segments;
    int block_len = 256;
    MonteCarloConfig mc;  // input_power is ignored, set per point
};

/// Evaluates every (K, power, bound) combination. Rows are ordered by K, then
/// power, then bound in request order. Closed-form rows report n_outer =
/// n_inner = 0 and zero stderr. A failing row carries NaN values and an error
/// message; the sweep continues.
inline SweepResult run_sweep(const SweepConfig& cfg)
{
    validate(cfg.physical);
    if (cfg.bounds.empty()) throw std::invalid_argument("no bounds requested");
    if (cfg.powers_dbm.empty()) throw std::invalid_argument("empty power range");
    if (cfg.segments.empty()) throw std::invalid_argument("no segment counts given");
    for (int k : cfg.segments)
        if (k < 1) throw std::invalid_argument("segment counts must be >= 1");
    if (cfg.block_len < 2) throw std::invalid_argument("block length must be >= 2");

    bool wants_mc = false;
    for (auto b : cfg.bounds) wants_mc |= b == BoundName::L1;
    if (wants_mc) {
        MonteCarloConfig check = cfg.mc;
        check.input_power = 0.0;
        validate(check);
    }

    SweepResult rows;
    rows.reserve(cfg.bounds.size() * cfg.powers_dbm.size() * cfg.segments.size());
    for (int k : cfg.segments) {
        const ChannelParams c = build_channel(cfg.physical, k, cfg.block_len);
        const SsfChannel channel(c);
        const BoundConstants bc = bound_constants(c);
        for (double p_dbm : cfg.powers_dbm) {
            const double p = dbm_to_watts(p_dbm);
            for (BoundName b : cfg.bounds) {
                SweepRow row{.power_dbm = p_dbm, .segments = k, .bound = b, .seed = cfg.mc.seed, .error = {}};
                try {
                    switch (b) {
                    case BoundName::L1: {
                        MonteCarloConfig point = cfg.mc;
                        point.input_power = p;
                        point.seed = point_seed(cfg.mc.seed, k, p_dbm);
                        const L1Estimate l1 = estimate_L1(channel, point);
                        row.value_bits = l1.value_bits;
                        row.stderr_bits = l1.stderr_bits;
                        row.n_outer = cfg.mc.n_outer;
                        row.n_inner = cfg.mc.n_inner;
                        break;
                    }
                    case BoundName::L2: row.value_bits = lower_bound_L2(p, c, bc); break;
                    case BoundName::L3: row.value_bits = lower_bound_L3(p, c, bc); break;
                    case BoundName::L2_asym: row.value_bits = asymptote_L2(c, bc); break;
                    case BoundName::L3_asym: row.value_bits = asymptote_L3(c, bc.c1); break;
                    case BoundName::AWGN_UB: row.value_bits = awgn_upper(p, c.noise_power); break;
                    case BoundName::LP: row.value_bits = low_power_approx(p, c.noise_power); break;
                    }
                } catch (const std::exception& ex) {
                    row.value_bits = std::nan("");
                    row.stderr_bits = std::nan("");
                    row.error = ex.what();
                }
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

inline constexpr std::string_view kCsvHeader = "power_dbm,K,bound,value_bits,stderr_bits,n_outer,n_inner,seed";

inline std::string format_number(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline void write_csv(std::ostream& out, const SweepResult& rows)
{
    out << kCsvHeader << '\n';
    for (const auto& r : rows) {
        out << format_number(r.power_dbm) << ',' << r.segments << ',' << to_string(r.bound) << ','
            << format_number(r.value_bits) << ',' << format_number(r.stderr_bits) << ',' << r.n_outer << ','
            << r.n_inner << ',' << r.seed << '\n';
    }
}

} // namespace ssfcap
