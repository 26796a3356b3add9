// Copyright 2026 The mqo-anneal Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace mqo {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An exhaustive search was asked to enumerate more candidates than allowed.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent input file.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// An embedding pattern does not fit the qubit grid, or an embedding does not
/// realize a QUBO. `cluster` names the first cluster that failed to place.
class EmbeddingInfeasible : public Error {
 public:
  explicit EmbeddingInfeasible(const std::string& what,
                               std::optional<std::size_t> cluster = std::nullopt)
      : Error(what), cluster_(cluster) {}

  std::optional<std::size_t> cluster() const noexcept { return cluster_; }

 private:
  std::optional<std::size_t> cluster_;
};

}  // namespace mqo
