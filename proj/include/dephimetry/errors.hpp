// Copyright 2026 The Dephimetry Authors
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

namespace dephimetry {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad size, out-of-range
/// parameter, dimension mismatch, malformed POVM...).
class InvalidArgument : public Error {
  public:
    using Error::Error;
};

/// The covariance matrix is singular and not of the supported collective form.
class SingularCovariance : public Error {
  public:
    using Error::Error;
};

/// A computed quantity broke an invariant it should hold by construction.
class NumericalError : public Error {
  public:
    using Error::Error;
};

/// Every outcome of the measurement has negligible probability.
class DegenerateMeasurement : public Error {
  public:
    using Error::Error;
};

/// The measurement carries no information about the phase.
class UninformativeMeasurement : public Error {
  public:
    using Error::Error;
};

} // namespace dephimetry
