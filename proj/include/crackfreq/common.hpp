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

#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace crackfreq
{

// Ambient dimension N+1 is a runtime value; storage stays on the stack.
inline constexpr int kMaxAmbient = 6;

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1, 0, kMaxAmbient, 1>;
template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxAmbient, kMaxAmbient>;

using Vecd = Vec<double>;
using Matd = Mat<double>;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

enum class ErrorKind {
  domain,
  construction,
  singularity,
  unsupported_dimension,
  convergence,
  geometry,
  meshing,
  precondition,
  well_posedness,
  solver,
  resolution,
  underflow,
  ill_conditioned,
  integrability,
  triviality,
  radius_too_large,
  io,
  invalid_config,
};

const char * to_string(ErrorKind kind);

class Error : public std::runtime_error
{
public:
  Error(ErrorKind kind, const std::string & message);
  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

inline Vecd to_vecd(const Vec3 & v)
{
  Vecd out(3);
  out << v[0], v[1], v[2];
  return out;
}

inline Vec3 to_vec3(const Vecd & v) { return Vec3(v[0], v[1], v[2]); }

}  // namespace crackfreq
