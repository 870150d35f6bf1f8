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

#ifndef NCHC_REFERENCE_HPP
#define NCHC_REFERENCE_HPP

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nchc
{

enum class ReferenceSource
{
    fig3_numeric,
    fig3_replica,
    fig4_numeric,
    fig4_replica,
    fig5_numeric,
    fig5_replica
};

ReferenceSource parse_reference_source(std::string_view name);
std::string_view to_string(ReferenceSource s);

// Aggregate column the table is compared against.
std::string_view reference_metric(ReferenceSource s);

enum class ReferenceAxis
{
    sigma2,
    inv_sigma2
};

struct ReferenceRow
{
    double x = 0.0;          // sigma2 or 1 / sigma2, see ReferenceTable::axis
    long M = 0;
    double alpha = 0.0;
    double value = 0.0;
    std::string provenance;
};

struct ReferenceTable
{
    ReferenceSource source = ReferenceSource::fig3_numeric;
    ReferenceAxis axis = ReferenceAxis::sigma2;
    std::vector<ReferenceRow> rows;
};

// Tables are compiled into the library from data/reference/*.csv.
ReferenceTable load_reference(ReferenceSource source);
std::string_view reference_csv_text(ReferenceSource source);

struct ResultPoint
{
    long M = 0;
    double alpha = 0.0;
    double sigma2 = 0.0;
    double value = 0.0;
};

// Reads the metric column of an aggregate.csv.
std::vector<ResultPoint> read_results(const std::string &aggregate_csv_path, std::string_view metric);

struct DeviationRow
{
    long M = 0;
    double alpha = 0.0;
    double x = 0.0;
    double reference = 0.0;
    double result = 0.0;
    double abs_dev = 0.0;
    double rel_dev = 0.0;     // abs_dev / |reference|; inf when reference is 0 and abs_dev > 0
    bool flagged = false;
};

struct DeviationReport
{
    ReferenceSource source = ReferenceSource::fig3_numeric;
    double rtol = 0.0;
    double atol = 0.0;
    std::vector<DeviationRow> rows;
    std::vector<ResultPoint> gaps;   // result points with no reference row

    long flagged_count() const;
    bool pass() const { return gaps.empty() && flagged_count() == 0 && !rows.empty(); }
    std::string to_csv() const;
};

// Each result point is matched to the reference row with equal M, alpha and
// x (relative key tolerance 1e-9). A point is flagged when
// |result - reference| > atol + rtol * |reference|.
DeviationReport compare_reference(std::span<const ResultPoint> results, const ReferenceTable &table, double rtol,
                                  double atol);

} // namespace nchc

#endif
