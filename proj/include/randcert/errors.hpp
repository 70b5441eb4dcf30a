#pragma once
//------------------------------------------------------------------------------
//
//   Copyright 2026 The randcert Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#include <stdexcept>
#include <string>

namespace randcert {

// Inputs of incompatible shape (distribution sizes, vector dimensions).
class DimensionError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

// A parameter outside the range where the formula is defined.
class DomainError : public std::domain_error
{
public:
  using std::domain_error::domain_error;
};

// Malformed user input: files, configs, datasets.
class ValidationError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

// The request is well-formed but this configuration is not supported
// (e.g. exact evaluation without a closed form, exhaustive cover on n > 12).
class CapabilityError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

}  // namespace randcert
