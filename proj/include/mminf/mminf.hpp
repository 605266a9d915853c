#pragma once

// Umbrella header: survival rate, quasi-stationary distributions, and
// absorption-time transform of the M/M/inf queue absorbed at zero, with a
// Monte Carlo validator.

#include "mminf/errors.hpp"
#include "mminf/laplace.hpp"
#include "mminf/model.hpp"
#include "mminf/qsd.hpp"
#include "mminf/quadrature.hpp"
#include "mminf/rng.hpp"
#include "mminf/sim.hpp"
#include "mminf/solver.hpp"
#include "mminf/special.hpp"
#include "mminf/version.hpp"
