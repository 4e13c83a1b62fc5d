// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace swipesim {

/// Argument outside the mathematical domain of an operation (e.g. a
/// non-positive distance).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Time or index outside the valid range of a trajectory or series.
class RangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Invalid or inconsistent configuration. `key()` names the offending
/// setting as a dotted path when one is known.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what, std::string key = {})
        : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// Malformed framing: misaligned ciphertext, bad half frame, record length
/// mismatch or failed record-format validation.
class FramingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A second-half interlock frame arrived before the first-half phase was
/// complete on the receiving side.
class OrderingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid peer public key or failed ECDH derivation.
class KeyAgreementError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An operation was invoked outside the situation it is defined for.
class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace swipesim
