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

// Downstream build against the installed package.

#include <mrqsim/pulse_compiler.hpp>

int main() {
  const auto report = mrqsim::pulse::verify_compiled(mrqsim::pulse::compile_bell_sequence({}));
  return report.passed ? 0 : 1;
}
