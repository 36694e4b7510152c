/**
 * Copyright 2026 The ZO2 Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef ZO2_COMMON_ERRORS_H_
#define ZO2_COMMON_ERRORS_H_

#include <stdexcept>
#include <string>

namespace zo2 {

// Invalid arguments and shape mismatches use std::invalid_argument directly.

class ResourceExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a task observes a slot or dependency state that the scheduler
// contract forbids. Always indicates a scheduling bug.
class SchedulingError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class StateCorruption : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class NonFiniteLoss : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& key, const std::string& what)
      : std::invalid_argument(what), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

}  // namespace zo2

#endif  // ZO2_COMMON_ERRORS_H_
