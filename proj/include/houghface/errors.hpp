// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace houghface {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Filesystem-level failures: missing files, unreadable paths, write errors.
/// The CLI maps these to exit code 2.
struct IoError : Error {
    using Error::Error;
};

/// Malformed file content (bad magic, truncated data, bad tokens).
/// Messages carry a line number where one is known. Exit code 1.
struct ParseError : Error {
    using Error::Error;
};

/// Invalid parameters or inconsistent configuration. Exit code 1.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace houghface
