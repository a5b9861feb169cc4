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


#pragma once

#include <spdlog/spdlog.h>

#include <memory>
#include <string_view>

namespace propex {

/// Shared stderr logger. Colour is disabled when NO_COLOR is set.
std::shared_ptr<spdlog::logger> logger();

void set_log_level(std::string_view level);

}  // namespace propex
