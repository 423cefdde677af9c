/// @file ptk.hpp
/// @brief Umbrella header.
#pragma once

#include "ptk/arith_table.hpp"
#include "ptk/common.hpp"
#include "ptk/explicit_formula.hpp"
#include "ptk/hl_density.hpp"
#include "ptk/int_math.hpp"
#include "ptk/lattice_count.hpp"
#include "ptk/quadrature.hpp"
#include "ptk/rational.hpp"
#include "ptk/special.hpp"
#include "ptk/tuple_core.hpp"
#include "ptk/zeros.hpp"
