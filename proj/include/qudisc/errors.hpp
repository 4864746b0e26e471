// Copyright 2026 The qudisc Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace qudisc {

/// Invalid problem parameters (dimension, copy counts, priors).
class ConfigError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A well-formed request whose operation-specific precondition fails,
/// e.g. the equal-copies reduction on a config with n_A != n_C.
class PreconditionError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

/// Dense operator would exceed the configured dimension cap.
class CapExceeded : public std::length_error {
  public:
    using std::length_error::length_error;
};

class ConvergenceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace qudisc
