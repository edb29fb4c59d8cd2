// Copyright 2026 The oqs Authors
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

namespace oqs {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Raised when a dense construction would exceed the configured memory budget.
class CapacityError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class DefectiveLiouvillianError : public NumericalError {
 public:
  DefectiveLiouvillianError(const std::string& what, std::string cluster_report)
      : NumericalError(what), report_(std::move(cluster_report)) {}
  const std::string& cluster_report() const { return report_; }

 private:
  std::string report_;
};

class NotCompletelyPositiveError : public Error {
 public:
  NotCompletelyPositiveError(const std::string& what, double witness)
      : Error(what), witness_(witness) {}
  double witness() const { return witness_; }

 private:
  double witness_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace oqs
