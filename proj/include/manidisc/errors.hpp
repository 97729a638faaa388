// Copyright 2026 the manidisc authors
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

namespace manidisc {

/// A parameter vector or transform leaves the admissible domain.
class DomainError : public std::domain_error {
 public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Malformed arguments: empty sets, mismatched sizes, bad configuration.
class UsageError : public std::invalid_argument {
 public:
    explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

/// Invalid or inconsistent experiment configuration.
class ConfigError : public UsageError {
 public:
    explicit ConfigError(const std::string& what) : UsageError(what) {}
};

}  // namespace manidisc
