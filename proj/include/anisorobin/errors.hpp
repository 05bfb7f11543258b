// Copyright (c) 2026 anisorobin contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace anisorobin {

/// Caller handed us something malformed: bad polygon, p out of range,
/// unparsable config.  Maps to CLI exit code 1.
struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An iteration failed to converge or a computed quantity left its
/// admissible range.  Carries enough text to diagnose without a debugger.
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Requested combination (dimension, family, feature) is outside what the
/// library implements, as opposed to being wrong.
struct unsupported_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A broken internal invariant; seeing one of these is a bug here, not in
/// caller code.
struct internal_error : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace anisorobin
