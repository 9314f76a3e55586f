#pragma once

// Static, isotropic lattice model of relativistic fermions and the
// variational principle minimizing its action.

#include "latfermion/action.hpp"
#include "latfermion/compensated_sum.hpp"
#include "latfermion/configuration.hpp"
#include "latfermion/dirac_sea.hpp"
#include "latfermion/error.hpp"
#include "latfermion/invariants.hpp"
#include "latfermion/lattice.hpp"
#include "latfermion/nelder_mead.hpp"
#include "latfermion/optimize.hpp"
#include "latfermion/projector.hpp"
#include "latfermion/scan.hpp"
#include "latfermion/spin_matrix.hpp"
