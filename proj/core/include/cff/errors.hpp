#pragma once

#include <stdexcept>
#include <string>

namespace cff {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Projection requested for a point with non-positive camera-frame z.
struct BehindCameraError : Error {
    using Error::Error;
};

/// Back-projection requested with depth <= 0.
struct NonPositiveDepthError : Error {
    using Error::Error;
};

/// Two grids or tensors that must share dimensions do not.
struct DimensionMismatchError : Error {
    using Error::Error;
};

/// Depth completion invoked on a map with no valid samples.
struct EmptyDepthError : Error {
    using Error::Error;
};

/// A point handed to the BEV grid falls outside its extent.
struct PointOutOfRangeError : Error {
    using Error::Error;
};

/// A parameter or sampling range is outside its legal domain.
struct InvalidRangeError : Error {
    using Error::Error;
};

/// A text or binary input could not be parsed; message names the file
/// and, for text inputs, the line.
struct ParseError : Error {
    using Error::Error;
};

/// Filesystem-level failure (open/read/write).
struct IoError : Error {
    using Error::Error;
};

}  // namespace cff
