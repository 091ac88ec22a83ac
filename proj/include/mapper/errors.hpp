#pragma once

#include <stdexcept>
#include <string>

namespace mapper {

// Error taxonomy used across the library. All derive from Error so callers
// can catch the whole family at the CLI boundary.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Grid shape problems: mismatched lengths, sizes below minimum.
struct DimensionError : Error {
    using Error::Error;
};

// Bad sample data: NaN/inf values.
struct DataError : Error {
    using Error::Error;
};

// Unreadable or unsupported file contents.
struct FormatError : Error {
    using Error::Error;
};

// Out-of-range parameters (overlap fraction, slice counts, orderings).
struct ParameterError : Error {
    using Error::Error;
};

// Pixel index outside the grid.
struct BoundsError : Error {
    using Error::Error;
};

// A field value lies outside the union of both cover parts.
struct CoverMismatchError : Error {
    using Error::Error;
};

// Operation applied to a cover style it does not support.
struct UnsupportedStyleError : Error {
    using Error::Error;
};

} // namespace mapper
