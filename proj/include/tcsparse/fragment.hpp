#pragma once

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "tcsparse/mma.hpp"

namespace tcsparse {

inline constexpr std::size_t kWarpSize = 32;

enum class Operand { left_a, right_b, accum_c };

/// Which (row, col) of an operand tile each lane holds in its register
/// slots. The 32 lanes' coordinates tile the operand exactly once.
struct WarpTileLayout {
    MmaShape shape;
    Operand operand;
    std::size_t tile_rows = 0;
    std::size_t tile_cols = 0;
    std::size_t slots = 0;
    // coords[lane][slot] in register order (a0.., b0.., c0..)
    std::array<std::vector<std::pair<std::size_t, std::size_t>>, kWarpSize> coords;
};

/// Coordinate formulas follow the vendor ISA layouts for mma.m16n8k8 (FP16)
/// and mma.m16n8k4 (TF32). Lanes are grouped in fours: group = lane/4 walks
/// rows, lane%4 walks columns.
inline WarpTileLayout fragment_layout(MmaShape shape, Operand operand, Precision p) {
    if (shape != shape_for(p))
        throw ArgumentError("unsupported shape/precision combination");

    WarpTileLayout layout;
    layout.shape = shape;
    layout.operand = operand;
    const bool fp16 = p == Precision::fp16;

    for (std::size_t lane = 0; lane < kWarpSize; ++lane) {
        const std::size_t g = lane / 4;
        const std::size_t t = lane % 4;
        auto& slots = layout.coords[lane];
        switch (operand) {
            case Operand::left_a:
                layout.tile_rows = shape.m;
                layout.tile_cols = shape.k;
                if (fp16)
                    slots = {{g, 2 * t}, {g, 2 * t + 1}, {g + 8, 2 * t}, {g + 8, 2 * t + 1}};
                else
                    slots = {{g, t}, {g + 8, t}};
                break;
            case Operand::right_b:
                layout.tile_rows = shape.k;
                layout.tile_cols = shape.n;
                if (fp16)
                    slots = {{2 * t, g}, {2 * t + 1, g}};
                else
                    slots = {{t, g}};
                break;
            case Operand::accum_c:
                layout.tile_rows = shape.m;
                layout.tile_cols = shape.n;
                slots = {{g, 2 * t}, {g, 2 * t + 1}, {g + 8, 2 * t}, {g + 8, 2 * t + 1}};
                break;
        }
    }
    layout.slots = layout.coords[0].size();
    return layout;
}

}  // namespace tcsparse
