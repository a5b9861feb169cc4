/*
 * Copyright 2026 The Propex Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include "propex/common/error.hpp"

#include <fmt/format.h>

namespace propex {

VersionError::VersionError(int found, int supported)
    : DataError(fmt::format("index format version {} is not supported (this build reads version {})",
                            found, supported)),
      found_(found),
      supported_(supported) {}

ChecksumError::ChecksumError(const std::string& file)
    : DataError(fmt::format("checksum mismatch in index file '{}'", file)), file_(file) {}

int exit_code(const Error& e) noexcept { return static_cast<int>(e.kind()); }

}  // namespace propex
