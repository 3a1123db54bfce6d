// SPDX-License-Identifier: Apache-2.0
//
// iflab - integer-forcing outage laboratory
// ------------------------------------------------------------------------
//
// Umbrella header.

#pragma once

#include "iflab/errors.hpp"
#include "iflab/matrix_core.hpp"
#include "iflab/ensembles.hpp"
#include "iflab/special_functions.hpp"
#include "iflab/integer_forcing.hpp"
#include "iflab/bounds.hpp"
#include "iflab/precoders.hpp"
#include "iflab/montecarlo.hpp"
#include "iflab/mac.hpp"
