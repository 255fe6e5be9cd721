#pragma once

#include <cctype>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ssfcap {

enum class BoundName { L1, L2, L3, L2_asym, L3_asym, AWGN_UB, LP };

inline constexpr BoundName kAllBounds[] = {BoundName::L1,      BoundName::L2,      BoundName::L3, BoundName::L2_asym,
                                           BoundName::L3_asym, BoundName::AWGN_UB, BoundName::LP};

/// Name used in the CSV `bound` column.
inline std::string_view to_string(BoundName b)
{
    switch (b) {
    case BoundName::L1: return "L1";
    case BoundName::L2: return "L2";
    case BoundName::L3: return "L3";
    case BoundName::L2_asym: return "L2_asym";
    case BoundName::L3_asym: return "L3_asym";
    case BoundName::AWGN_UB: return "AWGN_UB";
    case BoundName::LP: return "LP";
    }
    return "?";
}

/// Accepts both the CSV spelling ("L2_asym") and the CLI spelling ("l2-asym", "awgn", "lp").
inline std::optional<BoundName> parse_bound_name(std::string_view s)
{
    std::string t;
    for (char ch : s) t.push_back(ch == '-' ? '_' : static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    if (t == "l1") return BoundName::L1;
    if (t == "l2") return BoundName::L2;
    if (t == "l3") return BoundName::L3;
    if (t == "l2_asym") return BoundName::L2_asym;
    if (t == "l3_asym") return BoundName::L3_asym;
    if (t == "awgn" || t == "awgn_ub") return BoundName::AWGN_UB;
    if (t == "lp") return BoundName::LP;
    return std::nullopt;
}

struct SweepRow {
    double power_dbm = 0.0;
    int segments = 0;
    BoundName bound = BoundName::L1;
    double value_bits = 0.0;
    double stderr_bits = 0.0;  // 0 for closed forms
    int n_outer = 0;
    int n_inner = 0;
    std::uint64_t seed = 0;
    std::string error;  // non-empty when this row failed

    bool ok() const { return error.empty(); }
};

using SweepResult = std::vector<SweepRow>;

} // namespace ssfcap
