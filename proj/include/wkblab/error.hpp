/* Copyright 2026 The WKB Lab Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
        limitations under the License.
==============================================================================*/

#ifndef WKBLAB_ERROR_HPP
#define WKBLAB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace wkb {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the documented domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

class NonFinite : public Error {
public:
    using Error::Error;
};

class StepUnderflow : public Error {
public:
    using Error::Error;
};

class MaxStepsExceeded : public Error {
public:
    using Error::Error;
};

class SizeMismatch : public Error {
public:
    using Error::Error;
};

class VersionMismatch : public Error {
public:
    using Error::Error;
};

class CorruptFile : public Error {
public:
    using Error::Error;
};

class ArchitectureMismatch : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, long line)
        : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}

    long line() const { return line_; }

private:
    long line_;
};

}  // namespace wkb

#endif  // WKBLAB_ERROR_HPP
