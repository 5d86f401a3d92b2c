#pragma once

// Umbrella header.

#include "tcsparse/access_pattern.hpp"
#include "tcsparse/analysis.hpp"
#include "tcsparse/container_io.hpp"
#include "tcsparse/errors.hpp"
#include "tcsparse/footprint.hpp"
#include "tcsparse/fragment.hpp"
#include "tcsparse/generate.hpp"
#include "tcsparse/matrix.hpp"
#include "tcsparse/matrix_market.hpp"
#include "tcsparse/mebcrs.hpp"
#include "tcsparse/mma.hpp"
#include "tcsparse/partition.hpp"
#include "tcsparse/precision.hpp"
#include "tcsparse/sddmm.hpp"
#include "tcsparse/spmm.hpp"
#include "tcsparse/srbcrs.hpp"
