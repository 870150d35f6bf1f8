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

#include "nchc/reference.hpp"

#include "nchc/error.hpp"
#include "nchc/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>

namespace nchc
{

namespace detail
{
// Defined in the generated reference_data.cpp, indexed by ReferenceSource.
std::string_view embedded_reference_csv(int index);
} // namespace detail

namespace
{
constexpr std::string_view kSourceNames[] = {"fig3_numeric", "fig3_replica", "fig4_numeric",
                                             "fig4_replica", "fig5_numeric", "fig5_replica"};

double to_double(const std::string &s)
{
    char *end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size())
        throw InputError("not a number: '" + s + "'");
    return v;
}

long to_long(const std::string &s)
{
    const double v = to_double(s);
    if (v != std::floor(v))
        throw InputError("not an integer: '" + s + "'");
    return long(v);
}

bool same_key(double a, double b)
{
    return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b));
}
} // namespace

ReferenceSource parse_reference_source(std::string_view name)
{
    for (int i = 0; i < 6; ++i)
        if (kSourceNames[i] == name)
            return ReferenceSource(i);
    throw InputError("unknown reference table '" + std::string(name) + "'");
}

std::string_view to_string(ReferenceSource s)
{
    return kSourceNames[int(s)];
}

std::string_view reference_metric(ReferenceSource s)
{
    switch (s)
    {
    case ReferenceSource::fig3_numeric:
    case ReferenceSource::fig3_replica:
        return "mean_daa_over_M";
    case ReferenceSource::fig4_numeric:
    case ReferenceSource::fig4_replica:
        return "var_dab_over_M";
    case ReferenceSource::fig5_numeric:
    case ReferenceSource::fig5_replica:
        return "misclass_rate";
    }
    return "";
}

std::string_view reference_csv_text(ReferenceSource source)
{
    return detail::embedded_reference_csv(int(source));
}

namespace
{
ReferenceTable table_from_csv(const CsvTable &csv, ReferenceSource source)
{
    ReferenceTable t;
    t.source = source;
    const auto c_xname = csv.column("x_name"), c_x = csv.column("x"), c_m = csv.column("M"),
               c_alpha = csv.column("alpha"), c_value = csv.column("value"), c_prov = csv.column("provenance");
    for (std::size_t i = 0; i < csv.rows.size(); ++i)
    {
        const auto &r = csv.rows[i];
        const ReferenceAxis axis = r[c_xname] == "inv_sigma2" ? ReferenceAxis::inv_sigma2 : ReferenceAxis::sigma2;
        if (r[c_xname] != "sigma2" && r[c_xname] != "inv_sigma2")
            throw InputError("reference: unknown x_name '" + r[c_xname] + "'");
        if (i == 0)
            t.axis = axis;
        else if (axis != t.axis)
            throw InputError("reference: mixed x axes in one table");
        t.rows.push_back({to_double(r[c_x]), to_long(r[c_m]), to_double(r[c_alpha]), to_double(r[c_value]), r[c_prov]});
    }
    return t;
}
} // namespace

ReferenceTable load_reference(ReferenceSource source)
{
    return table_from_csv(parse_csv(reference_csv_text(source)), source);
}

std::vector<ResultPoint> read_results(const std::string &path_in, std::string_view metric)
{
    std::string path = path_in;
    if (std::filesystem::is_directory(path))
        path = (std::filesystem::path(path) / "aggregate.csv").string();
    const CsvTable csv = parse_csv(read_file(path));

    std::vector<ResultPoint> out;
    // A file in the bundled reference layout is accepted as a result set too.
    if (std::find(csv.header.begin(), csv.header.end(), "x_name") != csv.header.end())
    {
        const ReferenceTable t = table_from_csv(csv, ReferenceSource::fig3_numeric);
        for (const auto &r : t.rows)
            out.push_back({r.M, r.alpha, t.axis == ReferenceAxis::sigma2 ? r.x : 1.0 / r.x, r.value});
        return out;
    }
    const auto c_m = csv.column("M"), c_n = csv.column("N"), c_s = csv.column("sigma2"), c_v = csv.column(metric);
    for (const auto &r : csv.rows)
    {
        const long m = to_long(r[c_m]);
        out.push_back({m, double(m) / double(to_long(r[c_n])), to_double(r[c_s]), to_double(r[c_v])});
    }
    return out;
}

long DeviationReport::flagged_count() const
{
    long n = 0;
    for (const auto &r : rows)
        n += r.flagged ? 1 : 0;
    return n;
}

std::string DeviationReport::to_csv() const
{
    std::string out = "source,M,alpha,x,reference,result,abs_dev,rel_dev,flagged\n";
    for (const auto &r : rows)
        out += std::string(to_string(source)) + ',' + std::to_string(r.M) + ',' + format_double(r.alpha) + ',' +
               format_double(r.x) + ',' + format_double(r.reference) + ',' + format_double(r.result) + ',' +
               format_double(r.abs_dev) + ',' + format_double(r.rel_dev) + ',' + (r.flagged ? "1" : "0") + '\n';
    for (const auto &g : gaps)
        out += std::string(to_string(source)) + ',' + std::to_string(g.M) + ',' + format_double(g.alpha) +
               ",gap sigma2=" + format_double(g.sigma2) + ",nan," + format_double(g.value) + ",nan,nan,1\n";
    return out;
}

DeviationReport compare_reference(std::span<const ResultPoint> results, const ReferenceTable &table, double rtol,
                                  double atol)
{
    if (!(rtol >= 0.0) || !(atol >= 0.0))
        throw InputError("rtol and atol must be >= 0");
    DeviationReport rep;
    rep.source = table.source;
    rep.rtol = rtol;
    rep.atol = atol;
    for (const auto &p : results)
    {
        const double x = table.axis == ReferenceAxis::sigma2 ? p.sigma2 : 1.0 / p.sigma2;
        const ReferenceRow *match = nullptr;
        for (const auto &r : table.rows)
            if (r.M == p.M && same_key(r.alpha, p.alpha) && same_key(r.x, x))
            {
                match = &r;
                break;
            }
        if (!match)
        {
            rep.gaps.push_back(p);
            continue;
        }
        DeviationRow d;
        d.M = p.M;
        d.alpha = p.alpha;
        d.x = x;
        d.reference = match->value;
        d.result = p.value;
        d.abs_dev = std::abs(p.value - match->value);
        d.rel_dev = match->value != 0.0 ? d.abs_dev / std::abs(match->value)
                                        : (d.abs_dev > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
        d.flagged = !(d.abs_dev <= atol + rtol * std::abs(match->value));
        rep.rows.push_back(d);
    }
    return rep;
}

} // namespace nchc
