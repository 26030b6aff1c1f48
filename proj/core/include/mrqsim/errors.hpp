// Copyright 2026 The mrqsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace mrqsim {

/// Invalid configuration: bad geometry, timing constraints, unknown keys,
/// malformed programs. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical invariant did not hold (non-unitary gate, trace drift,
/// fidelity below threshold). Maps to CLI exit code 3.
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A pulse program could not be lowered to unitaries.
class CompilationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A Bell assembly was missing a branch term or produced an invalid state.
class AssemblyError : public CompilationError {
 public:
  using CompilationError::CompilationError;
};

}  // namespace mrqsim
