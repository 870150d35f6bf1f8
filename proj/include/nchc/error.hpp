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
// ------------------------------------------------------------------------

#ifndef NCHC_ERROR_HPP
#define NCHC_ERROR_HPP

#include <stdexcept>
#include <string>

namespace nchc
{

// Malformed or non-finite arguments, violated preconditions.
class InputError : public std::invalid_argument
{
public:
    explicit InputError(const std::string &what) : std::invalid_argument(what) {}
};

// Argument outside the region where a transform is defined.
class DomainError : public std::domain_error
{
public:
    explicit DomainError(const std::string &what) : std::domain_error(what) {}
};

// Problem too large for an exhaustive oracle.
class SizeError : public std::length_error
{
public:
    explicit SizeError(const std::string &what) : std::length_error(what) {}
};

class IoError : public std::runtime_error
{
public:
    explicit IoError(const std::string &what) : std::runtime_error(what) {}
};

} // namespace nchc

#endif
