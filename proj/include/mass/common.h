// Copyright 2026 The MASS Authors
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
#include <string_view>
#include <vector>

namespace mass {

// Vector storage aligned for Eigen's widest packets. Eigen peels leading
// elements of unaligned maps before vectorised reductions, so plain
// std::vector storage would make sums depend on the allocation address.
using AlignedVector = std::vector<double, Eigen::aligned_allocator<double>>;

// Frame-major feature matrix: one row per frame.
using FrameMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Number of mel-cepstral coefficients per frame.
inline constexpr int kMccDim = 36;

enum class ErrorKind {
  kInput,
  kParameter,
  kFormat,
  kVersion,
  kDataset,
  kInsufficientData,
  kNumerical,
  kStage,
  kIo,
};

std::string_view ErrorKindName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class InputError : public Error {
 public:
  explicit InputError(const std::string& m) : Error(ErrorKind::kInput, m) {}
};

class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& m) : Error(ErrorKind::kParameter, m) {}
};

class FormatError : public Error {
 public:
  explicit FormatError(const std::string& m) : Error(ErrorKind::kFormat, m) {}
};

class VersionError : public Error {
 public:
  explicit VersionError(const std::string& m) : Error(ErrorKind::kVersion, m) {}
};

class DatasetError : public Error {
 public:
  explicit DatasetError(const std::string& m) : Error(ErrorKind::kDataset, m) {}
};

class InsufficientDataError : public Error {
 public:
  explicit InsufficientDataError(const std::string& m)
      : Error(ErrorKind::kInsufficientData, m) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& m) : Error(ErrorKind::kNumerical, m) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& m) : Error(ErrorKind::kIo, m) {}
};

// Raised by the pipeline; the message is prefixed with the failing stage.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& m)
      : Error(ErrorKind::kStage, stage + ": " + m), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

}  // namespace mass
