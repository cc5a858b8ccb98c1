#pragma once

#include <stdexcept>
#include <string>

namespace btq {

// Error taxonomy shared by the library and the CLI exit codes.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A series or elimination step ran out of known digits.
struct PrecisionError : Error {
    using Error::Error;
};

// Run configuration rejected before any computation.
struct ConfigError : Error {
    using Error::Error;
};

// A dimension/count failed to stabilize across window radii.
struct InstabilityError : Error {
    using Error::Error;
};

// A certificate could not be produced (patch not collapsible,
// identification search inconclusive, cusp list not certified).
struct CertificationError : Error {
    using Error::Error;
};

} // namespace btq
