// Copyright 2026 The polarcvx Authors
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

#ifndef POLARCVX_ERRORS_HPP_
#define POLARCVX_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace polarcvx {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OutOfBoxError : Error {
  using Error::Error;
};
struct NotDifferentiableError : Error {
  using Error::Error;
};
struct BoxExcludesOriginError : Error {
  using Error::Error;
};
struct EmptyDomainError : Error {
  using Error::Error;
};
struct DegenerateEpigraphError : Error {
  using Error::Error;
};
struct TruncationError : Error {
  using Error::Error;
};
struct SingularHessianError : Error {
  using Error::Error;
};
struct EmptyPolarGradientError : Error {
  using Error::Error;
};
struct FrameOutOfRangeError : Error {
  using Error::Error;
};
struct RayLinearAtPointError : Error {
  using Error::Error;
};
struct AdvisoryFailureError : Error {
  using Error::Error;
};
struct TimesOutOfRangeError : Error {
  using Error::Error;
};
struct BeyondMaximalTimeError : Error {
  using Error::Error;
};
struct NoFeasiblePairError : Error {
  using Error::Error;
};

}  // namespace polarcvx

#endif  // POLARCVX_ERRORS_HPP_
