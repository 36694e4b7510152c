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

#ifndef ZO2_HARNESS_DIGEST_H_
#define ZO2_HARNESS_DIGEST_H_

#include <cstddef>
#include <span>
#include <string>

#include "zo2/model/params.h"

namespace zo2::harness {

// Lowercase hex SHA-256.
std::string sha256_hex(std::span<const std::byte> bytes);

// Digest of the canonical parameter bytes.
std::string params_digest(const model::ModelParams& params);

}  // namespace zo2::harness

#endif  // ZO2_HARNESS_DIGEST_H_
