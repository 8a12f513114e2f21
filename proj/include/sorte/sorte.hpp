#pragma once

// Umbrella header for the systemic optimal risk transfer equilibrium library.

#include "sorte/constraints.hpp"
#include "sorte/dual_solver.hpp"
#include "sorte/errors.hpp"
#include "sorte/exp_closed_form.hpp"
#include "sorte/io.hpp"
#include "sorte/market.hpp"
#include "sorte/numerics.hpp"
#include "sorte/utility.hpp"
#include "sorte/verification.hpp"
