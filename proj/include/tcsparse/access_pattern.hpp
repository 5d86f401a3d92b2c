#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "tcsparse/errors.hpp"
#include "tcsparse/precision.hpp"

namespace tcsparse {

enum class ThreadMapping { direct, coalesced };

inline const char* to_string(ThreadMapping m) {
    return m == ThreadMapping::direct ? "direct" : "coalesced";
}

struct LaneAccess {
    std::uint32_t lane;
    std::uint64_t addr;
    std::uint32_t width;  // bytes

    bool operator==(const LaneAccess&) const = default;
};

/// Loads issued by a warp, grouped into steps. Every access in one step is
/// issued together; coalescing never spans steps.
struct AccessPattern {
    std::vector<std::vector<LaneAccess>> steps;

    std::size_t useful_bytes() const {
        std::size_t total = 0;
        for (const auto& step : steps)
            for (const auto& a : step) total += a.width;
        return total;
    }

    void validate() const {
        for (const auto& step : steps) {
            for (const auto& a : step) {
                if (a.lane >= 32) throw ArgumentError("lane id out of range");
                if (a.width != 1 && a.width != 2 && a.width != 4 && a.width != 8 && a.width != 16)
                    throw ArgumentError("access width must be one of 1,2,4,8,16");
                if (a.addr % a.width != 0) throw ArgumentError("access address must be width-aligned");
            }
        }
    }

    nlohmann::json to_json() const {
        nlohmann::json steps_json = nlohmann::json::array();
        for (const auto& step : steps) {
            nlohmann::json s = nlohmann::json::array();
            for (const auto& a : step)
                s.push_back({{"lane", a.lane}, {"addr", a.addr}, {"width", a.width}});
            steps_json.push_back(std::move(s));
        }
        return {{"steps", std::move(steps_json)}};
    }
};

/// Warp-wide load pattern for a k x 16 dense block gathered from `row_addrs`
/// (byte address of each block row; negative marks an absent residue row,
/// whose registers are zeroed instead of loaded). Element width 2 emulates
/// FP16, 4 TF32.
///
/// Direct mapping mirrors the transposed left-operand register layout: each
/// FP16 lane touches columns {lane/4, lane/4+8}, so a thread group covers
/// only 16 bytes per row. The coalesced mapping shuffles columns into
/// {2*(lane/4), 2*(lane/4)+1} and fuses each column pair into one 4-byte
/// load, which makes a thread group span a full 32-byte segment. 4-byte
/// elements already coalesce naturally, so both modes agree for TF32.
inline AccessPattern map_threads_rows(std::span<const std::int64_t> row_addrs,
                                      ThreadMapping mode, std::size_t elem_width) {
    AccessPattern ap;
    auto push = [&row_addrs](std::vector<LaneAccess>& step, std::uint32_t lane, std::size_t row,
                             std::size_t byte_off, std::uint32_t width) {
        if (row_addrs[row] < 0) return;
        step.push_back({lane, static_cast<std::uint64_t>(row_addrs[row]) + byte_off, width});
    };
    if (elem_width == 2) {
        if (row_addrs.size() != 8) throw ArgumentError("FP16 block requires 8 rows");
        if (mode == ThreadMapping::direct) {
            // One step per register slot; lane (g,t) reads (row 2t+dr, col g+dc).
            for (const auto& [dr, dc] : {std::pair{0, 0}, {1, 0}, {0, 8}, {1, 8}}) {
                auto& step = ap.steps.emplace_back();
                for (std::uint32_t lane = 0; lane < 32; ++lane) {
                    const std::size_t row = 2 * (lane % 4) + static_cast<std::size_t>(dr);
                    const std::size_t col = lane / 4 + static_cast<std::size_t>(dc);
                    push(step, lane, row, col * 2, 2);
                }
            }
        } else {
            // Lane (g,t) reads the 2x2 block at (rows 2t..2t+1, cols 2g..2g+1),
            // each row pair as a single 4-byte load.
            for (const int dr : {0, 1}) {
                auto& step = ap.steps.emplace_back();
                for (std::uint32_t lane = 0; lane < 32; ++lane) {
                    const std::size_t row = 2 * (lane % 4) + static_cast<std::size_t>(dr);
                    const std::size_t col = 2 * (lane / 4);
                    push(step, lane, row, col * 2, 4);
                }
            }
        }
    } else if (elem_width == 4) {
        if (row_addrs.size() != 4) throw ArgumentError("TF32 block requires 4 rows");
        for (const std::size_t dc : {std::size_t{0}, std::size_t{8}}) {
            auto& step = ap.steps.emplace_back();
            for (std::uint32_t lane = 0; lane < 32; ++lane) {
                const std::size_t row = lane % 4;
                const std::size_t col = lane / 4 + dc;
                push(step, lane, row, col * 4, 4);
            }
        }
    } else {
        throw ArgumentError("element width must be 2 or 4");
    }
    return ap;
}

/// Spec'd FP16 entry point: block rows r = 0..7 live at base + r*row_stride.
inline AccessPattern map_threads(ThreadMapping mode, std::uint64_t base,
                                 std::uint64_t row_stride) {
    std::vector<std::int64_t> rows(8);
    for (std::size_t r = 0; r < 8; ++r)
        rows[r] = static_cast<std::int64_t>(base + r * row_stride);
    return map_threads_rows(rows, mode, 2);
}

struct TransactionSummary {
    std::size_t transactions = 0;
    std::size_t bytes = 0;

    bool operator==(const TransactionSummary&) const = default;
};

/// Counts memory transactions: per step, the touched 32-byte segments are
/// collected and adjacent ones merge greedily into naturally aligned 64- or
/// 128-byte transactions. Steps never merge with each other.
inline TransactionSummary count_transactions(const AccessPattern& ap) {
    ap.validate();
    TransactionSummary sum;
    std::vector<std::uint64_t> segs;
    for (const auto& step : ap.steps) {
        segs.clear();
        for (const auto& a : step) {
            const std::uint64_t first = a.addr / 32;
            const std::uint64_t last = (a.addr + a.width - 1) / 32;
            for (std::uint64_t s = first; s <= last; ++s) segs.push_back(s);
        }
        std::sort(segs.begin(), segs.end());
        segs.erase(std::unique(segs.begin(), segs.end()), segs.end());

        auto touched = [&](std::uint64_t s) {
            return std::binary_search(segs.begin(), segs.end(), s);
        };
        for (std::size_t i = 0; i < segs.size();) {
            const std::uint64_t s = segs[i];
            std::size_t span = 1;
            if (s % 4 == 0 && touched(s + 1) && touched(s + 2) && touched(s + 3))
                span = 4;
            else if (s % 2 == 0 && touched(s + 1))
                span = 2;
            sum.transactions += 1;
            sum.bytes += span * 32;
            // skip everything the transaction covered
            while (i < segs.size() && segs[i] < s + span) ++i;
        }
    }
    return sum;
}

}  // namespace tcsparse
