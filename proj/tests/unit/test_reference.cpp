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

#include "nchc/error.hpp"
#include "nchc/experiment.hpp"
#include "nchc/io.hpp"
#include "nchc/reference.hpp"

#include <doctest.h>

#include <filesystem>

using nchc::ReferenceSource;

namespace
{
const nchc::ReferenceRow *find_row(const nchc::ReferenceTable &t, long M, double alpha, double x)
{
    for (const auto &r : t.rows)
        if (r.M == M && r.alpha == alpha && r.x == x)
            return &r;
    return nullptr;
}

std::vector<nchc::ResultPoint> as_results(const nchc::ReferenceTable &t, double factor = 1.0)
{
    std::vector<nchc::ResultPoint> out;
    for (const auto &r : t.rows)
        out.push_back({r.M, r.alpha, t.axis == nchc::ReferenceAxis::sigma2 ? r.x : 1.0 / r.x, factor * r.value});
    return out;
}
} // namespace

TEST_CASE("bundled tables load with expected sizes and axes")
{
    for (int i = 0; i < 6; ++i)
    {
        const auto src = ReferenceSource(i);
        const auto t = nchc::load_reference(src);
        const bool replica = std::string(nchc::to_string(src)).ends_with("replica");
        CHECK(t.rows.size() == (replica ? 872u : 63u));
        CHECK(nchc::parse_reference_source(nchc::to_string(src)) == src);
        CHECK(t.axis == (i >= 4 ? nchc::ReferenceAxis::inv_sigma2 : nchc::ReferenceAxis::sigma2));
        for (const auto &r : t.rows)
            CHECK_FALSE(r.provenance.empty());
    }
    CHECK_THROWS_AS(nchc::parse_reference_source("fig6"), nchc::InputError);
    CHECK(nchc::reference_metric(ReferenceSource::fig4_numeric) == "var_dab_over_M");
}

TEST_CASE("bundled values")
{
    const auto f3 = nchc::load_reference(ReferenceSource::fig3_numeric);
    REQUIRE(find_row(f3, 1000, 1, 1.0));
    CHECK(find_row(f3, 1000, 1, 1.0)->value == 1.743042712680526);
    CHECK(find_row(f3, 1000, 1, 0.01)->value == 0.8418932474445583);
    CHECK(find_row(f3, 1000, 1, 10.0)->value == 9.742705998074515);
    CHECK(find_row(f3, 1000, 10, 1.0)->value == 1.8851898448870485);
    CHECK(find_row(f3, 1000, 1, 1.0)->provenance.find("DHnumeric1000alpha1") != std::string::npos);

    const auto f3r = nchc::load_reference(ReferenceSource::fig3_replica);
    CHECK(find_row(f3r, 1000, 1, 2.0)->value == 2.636925675610074);

    const auto f4 = nchc::load_reference(ReferenceSource::fig4_numeric);
    CHECK(find_row(f4, 1000, 10, 1.0)->value == 0.009256113606158856);

    const auto f5 = nchc::load_reference(ReferenceSource::fig5_numeric);
    CHECK(find_row(f5, 1000, 10, 1.0)->value == 0.2407);
    CHECK(find_row(f5, 1000, 10, 100.0)->value == 0.0142);
    CHECK(find_row(f5, 1000, 10, 0.1)->value == 0.4913);
}

TEST_CASE("comparing a table with itself gives zero deviations")
{
    for (int i = 0; i < 6; ++i)
    {
        const auto t = nchc::load_reference(ReferenceSource(i));
        const auto results = as_results(t);
        const auto rep = nchc::compare_reference(results, t, 0.0, 0.0);
        CHECK(rep.pass());
        CHECK(rep.gaps.empty());
        CHECK(rep.rows.size() == t.rows.size());
        for (const auto &r : rep.rows)
            CHECK(r.abs_dev == 0.0);
    }
}

TEST_CASE("a ten percent perturbation is flagged everywhere")
{
    const auto t = nchc::load_reference(ReferenceSource::fig3_numeric);
    const auto rep = nchc::compare_reference(as_results(t, 1.1), t, 0.05, 0.0);
    CHECK(rep.flagged_count() == long(t.rows.size()));
    CHECK_FALSE(rep.pass());
    CHECK(rep.rows[0].rel_dev == doctest::Approx(0.1));
}

TEST_CASE("missing grid points are reported as gaps")
{
    const auto t = nchc::load_reference(ReferenceSource::fig5_numeric);
    const std::vector<nchc::ResultPoint> pts = {{1000, 10, 1.0, 0.2407}, {1000, 10, 1.0 / 7.0, 0.4}};
    const auto rep = nchc::compare_reference(pts, t, 0.0, 0.0);
    CHECK(rep.rows.size() == 1);
    CHECK(rep.gaps.size() == 1);
    CHECK_FALSE(rep.pass());
    CHECK(rep.to_csv().find("gap") != std::string::npos);
    CHECK_THROWS_AS(nchc::compare_reference(pts, t, -1.0, 0.0), nchc::InputError);
}

TEST_CASE("results are read from an aggregate file")
{
    nchc::GridResult g;
    g.point = {1000, 100, 0.3};
    g.trials = 10;
    g.moments = nchc::MomentSummary{};
    g.moments->mean_daa = 1500.0;
    g.misclass = nchc::wilson_interval(3, 10);
    const std::vector<nchc::GridResult> rows = {g};
    const auto dir = std::filesystem::temp_directory_path() / "nchc_test_readres";
    std::filesystem::create_directories(dir);
    nchc::write_file((dir / "aggregate.csv").string(), nchc::aggregate_csv(nchc::ExperimentKind::accuracy_sweep, rows));

    const auto pts = nchc::read_results(dir.string(), "misclass_rate");
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].M == 1000);
    CHECK(pts[0].alpha == 10.0);
    CHECK(pts[0].value == 0.3);
    const auto f5 = nchc::load_reference(ReferenceSource::fig5_numeric);
    const auto rep = nchc::compare_reference(pts, f5, 0.0, 1.0);
    REQUIRE(rep.rows.size() == 1);
    CHECK(rep.rows[0].x == doctest::Approx(1.0 / 0.3));

    CHECK(nchc::read_results(dir.string(), "mean_daa_over_M")[0].value == 1.5);
    CHECK_THROWS_AS(nchc::read_results(dir.string(), "no_such_column"), nchc::InputError);
    CHECK_THROWS_AS(nchc::read_results((dir / "missing.csv").string(), "misclass_rate"), nchc::IoError);
}

TEST_CASE("csv parsing")
{
    const auto t = nchc::parse_csv("a,b\r\n1,2\n\n3,4\n");
    CHECK(t.header == std::vector<std::string>{"a", "b"});
    CHECK(t.rows.size() == 2);
    CHECK(t.column("b") == 1);
    CHECK_THROWS_AS(nchc::parse_csv("a,b\n1\n"), nchc::InputError);
    CHECK_THROWS_AS(nchc::parse_csv(""), nchc::InputError);
    CHECK(nchc::format_double(0.1) == "0.10000000000000001");
    CHECK(nchc::format_double(std::nan("")) == "nan");
    CHECK(nchc::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
