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

#ifndef NCHC_IO_HPP
#define NCHC_IO_HPP

#include <string>
#include <string_view>
#include <vector>

namespace nchc
{

// Shortest round-trip text for a double ("%.17g"); nan and inf spelled as such.
std::string format_double(double x);

std::string sha256_hex(std::string_view data);

// Whole-file helpers; failures throw IoError naming the path.
std::string read_file(const std::string &path);
void write_file(const std::string &path, std::string_view content);

// Minimal CSV for the files this library writes and the bundled tables:
// comma separated, no quoting, first line is the header.
struct CsvTable
{
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // Column index by name; throws InputError if absent.
    std::size_t column(std::string_view name) const;
};

CsvTable parse_csv(std::string_view text);

} // namespace nchc

#endif
