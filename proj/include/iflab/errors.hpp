// SPDX-License-Identifier: Apache-2.0
//
// iflab - integer-forcing outage laboratory
// ------------------------------------------------------------------------

#pragma once

#include <stdexcept>
#include <string>

namespace iflab {

// Argument outside the mathematical domain of a function (bad ranges,
// unordered eigenvalues, dimension < 2 where M >= 2 is required, ...).
struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Matrix handed to a Cholesky factorization is not (numerically) positive definite.
struct definiteness_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Incompatible matrix / precoder dimensions.
struct shape_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Integer-matrix search did not terminate within its iteration budget.
struct search_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An enumeration would exceed its resource cap.
struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace iflab
