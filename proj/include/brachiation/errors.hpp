/*
 Copyright 2026 The Brachiation Toolkit Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

     http://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#ifndef BRACHIATION_ERRORS_HPP
#define BRACHIATION_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace brachiation {

/// Base class for every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Robot or problem parameters violate a documented invariant.
struct InvalidParams : Error {
  using Error::Error;
};

/// A linear solve against the mass matrix failed (numerically singular).
struct LinearSolveFailure : Error {
  using Error::Error;
};

/// A state or input stopped being finite during integration.
struct NonFiniteState : Error {
  using Error::Error;
};

/// Requested hand target lies outside the reachable annulus.
struct Unreachable : Error {
  using Error::Error;
};

/// Target bearing is degenerate for the closed-form catch expression.
struct DegenerateBearing : Error {
  using Error::Error;
};

/// Free-swing search found no hand-height minimum within the time cap.
struct NoMinimumFound : Error {
  using Error::Error;
};

/// Regularized control Hessian was not positive definite.
struct NotPositiveDefinite : Error {
  using Error::Error;
};

/// Optimizer could not decrease the cost with regularization at its cap.
struct Diverged : Error {
  using Error::Error;
};

/// Role swap requested although the catch test failed.
struct NotCaught : Error {
  using Error::Error;
};

/// Query outside the domain of a reference signal.
struct OutOfRange : Error {
  using Error::Error;
};

/// Malformed or inconsistent run configuration.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace brachiation

#endif  // BRACHIATION_ERRORS_HPP
