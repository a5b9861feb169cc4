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

#include <stdexcept>
#include <string>

namespace propex {

/// Error classes map one-to-one onto CLI exit codes.
enum class ErrorKind {
    Usage = 1,
    Data = 2,
    Provider = 3,
    Internal = 4,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class UsageError : public Error {
public:
    explicit UsageError(const std::string& message) : Error(ErrorKind::Usage, message) {}
};

/// Malformed input, failed validation, corrupt or incompatible index files.
class DataError : public Error {
public:
    explicit DataError(const std::string& message) : Error(ErrorKind::Data, message) {}
};

class IndexCorruptionError : public DataError {
public:
    explicit IndexCorruptionError(const std::string& message) : DataError(message) {}
};

class VersionError : public DataError {
public:
    VersionError(int found, int supported);

    int found() const noexcept { return found_; }
    int supported() const noexcept { return supported_; }

private:
    int found_;
    int supported_;
};

class ChecksumError : public DataError {
public:
    explicit ChecksumError(const std::string& file);

    const std::string& file() const noexcept { return file_; }

private:
    std::string file_;
};

/// Transport or protocol failure talking to a model provider.
class ProviderError : public Error {
public:
    ProviderError(const std::string& message, bool retriable, int attempts = 0)
        : Error(ErrorKind::Provider, message), retriable_(retriable), attempts_(attempts) {}

    bool retriable() const noexcept { return retriable_; }
    int attempts() const noexcept { return attempts_; }

private:
    bool retriable_;
    int attempts_;
};

/// The provider answered, but with no text.
class EmptyOutputError : public ProviderError {
public:
    explicit EmptyOutputError(const std::string& message) : ProviderError(message, false) {}
};

class NumericalError : public Error {
public:
    NumericalError(const std::string& message, int iteration)
        : Error(ErrorKind::Internal, message), iteration_(iteration) {}

    int iteration() const noexcept { return iteration_; }

private:
    int iteration_;
};

int exit_code(const Error& e) noexcept;

}  // namespace propex
