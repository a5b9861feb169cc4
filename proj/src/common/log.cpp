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


#include "propex/common/log.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/sinks/stdout_sinks.h>

#include <cstdlib>

#include "propex/common/error.hpp"

namespace propex {

std::shared_ptr<spdlog::logger> logger() {
    static std::shared_ptr<spdlog::logger> instance = [] {
        std::shared_ptr<spdlog::logger> l;
        if (std::getenv("NO_COLOR") != nullptr) {
            l = std::make_shared<spdlog::logger>("propex", std::make_shared<spdlog::sinks::stderr_sink_mt>());
        } else {
            l = std::make_shared<spdlog::logger>("propex",
                                                 std::make_shared<spdlog::sinks::stderr_color_sink_mt>());
        }
        l->set_pattern("[%l] %v");
        l->set_level(spdlog::level::warn);
        return l;
    }();
    return instance;
}

void set_log_level(std::string_view level) {
    auto parsed = spdlog::level::from_str(std::string(level));
    if (parsed == spdlog::level::off && level != "off") {
        throw UsageError("unknown log level '" + std::string(level) + "'");
    }
    logger()->set_level(parsed);
}

}  // namespace propex
