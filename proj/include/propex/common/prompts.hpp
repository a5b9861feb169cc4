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

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace propex {

/// A prompt template file: a `version:` line followed by `[section]` blocks.
/// Section bodies may contain `{{name}}` placeholders.
class PromptTemplate {
public:
    static PromptTemplate parse(std::string_view source, const std::string& origin);
    static PromptTemplate load(const std::filesystem::path& file);

    const std::string& name() const { return name_; }
    const std::string& version() const { return version_; }
    bool has_section(const std::string& section) const { return sections_.contains(section); }
    const std::string& section(const std::string& section) const;

    /// Substitutes every `{{key}}` in the named section. Unknown placeholders are an error.
    std::string render(const std::string& section, const std::map<std::string, std::string>& values) const;

private:
    std::string name_;
    std::string version_;
    std::map<std::string, std::string> sections_;
};

struct PromptSet {
    PromptTemplate extract_entities;
    PromptTemplate extract_triples;
    PromptTemplate filter_facts;
    PromptTemplate answer;

    static PromptSet defaults();
    /// Files named `<template>.txt` in `dir` replace the built-in defaults.
    static PromptSet load(const std::filesystem::path& dir);
};

/// Built-in template text, keyed by template name.
std::string_view default_template_source(std::string_view name);

}  // namespace propex
