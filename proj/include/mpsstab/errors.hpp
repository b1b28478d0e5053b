// Copyright 2026 The mpsstab Authors
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

namespace mpsstab {

// Base of every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Caller supplied something outside an operation's contract.
struct InvalidInput : Error {
    using Error::Error;
};

// A state with zero norm cannot be normalized.
struct DegenerateState : Error {
    using Error::Error;
};

// A floating point identity drifted past its tolerance.
struct NumericalError : Error {
    using Error::Error;
};

// A size limit (oracle qubit count, bond dimension cap) was exceeded.
struct CapacityError : Error {
    using Error::Error;
};

// Two generators that should commute do not, or signs contradict each other.
struct InconsistencyError : Error {
    using Error::Error;
};

// An internal invariant that holds for every valid input was broken.
struct InvariantViolation : Error {
    using Error::Error;
};

// A tableau row is no longer a stabilizer of the state it is checked against.
struct StaleRowError : Error {
    using Error::Error;
};

}  // namespace mpsstab
