// Copyright 2026 The Terracurric Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace terracurric {

// Raster or window dimensions incompatible with the requested operation.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Malformed or truncated file contents.
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Genome violates its range or structural invariants.
struct GenomeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Scalar argument outside its mathematical domain.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Pearson correlation requested on a zero-variance column.
struct CorrelationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Incompatible experiment configuration (e.g. archives with different axes).
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Linear algebra failure, e.g. a kernel matrix that is not positive definite.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A difficulty evaluator failed or returned an out-of-range value.
struct EvaluatorError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// select_next was called with no terrains left.
struct CurriculumExhausted : std::runtime_error {
  CurriculumExhausted() : std::runtime_error("curriculum exhausted: no remaining terrains") {}
};

}  // namespace terracurric
