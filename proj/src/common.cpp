// Copyright 2026 The crackfreq Authors
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

#include "crackfreq/common.hpp"

namespace crackfreq
{

const char * to_string(ErrorKind kind)
{
  switch (kind) {
    case ErrorKind::domain: return "domain error";
    case ErrorKind::construction: return "construction error";
    case ErrorKind::singularity: return "singularity error";
    case ErrorKind::unsupported_dimension: return "unsupported-dimension error";
    case ErrorKind::convergence: return "convergence error";
    case ErrorKind::geometry: return "geometry error";
    case ErrorKind::meshing: return "meshing error";
    case ErrorKind::precondition: return "precondition error";
    case ErrorKind::well_posedness: return "well-posedness error";
    case ErrorKind::solver: return "solver error";
    case ErrorKind::resolution: return "resolution error";
    case ErrorKind::underflow: return "underflow error";
    case ErrorKind::ill_conditioned: return "ill-conditioned fit error";
    case ErrorKind::integrability: return "integrability error";
    case ErrorKind::triviality: return "triviality error";
    case ErrorKind::radius_too_large: return "radius-too-large error";
    case ErrorKind::io: return "I/O error";
    case ErrorKind::invalid_config: return "invalid config";
  }
  return "error";
}

Error::Error(ErrorKind kind, const std::string & message)
: std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind)
{
}

}  // namespace crackfreq
