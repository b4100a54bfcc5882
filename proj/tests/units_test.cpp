// Copyright 2026 The Airfed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "airfed/units.hpp"

#include <cmath>
#include <stdexcept>

#include <doctest.h>

namespace {

using namespace airfed;

TEST_CASE("units: db_to_linear on known anchors") {
  CHECK(db_to_linear(0.0) == 1.0);
  CHECK(db_to_linear(10.0) == doctest::Approx(10.0).epsilon(1e-15));
  CHECK(db_to_linear(3.0) == doctest::Approx(1.9952623149688795).epsilon(1e-15));
  // -46 dB reference path loss used throughout the default scenarios.
  CHECK(db_to_linear(-46.0) ==
        doctest::Approx(2.5118864315095822e-05).epsilon(1e-15));
}

TEST_CASE("units: dbm_to_watts on known anchors") {
  CHECK(dbm_to_watts(0.0) == doctest::Approx(1e-3).epsilon(1e-15));
  CHECK(dbm_to_watts(30.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(dbm_to_watts(10.0) == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(dbm_to_watts(-60.0) == doctest::Approx(1e-9).epsilon(1e-15));
}

TEST_CASE("units: conversions round-trip") {
  for (double db : {-120.0, -46.0, -3.0, 0.0, 7.5, 30.0, 60.0}) {
    CHECK(linear_to_db(db_to_linear(db)) == doctest::Approx(db).epsilon(1e-12));
    CHECK(watts_to_dbm(dbm_to_watts(db)) == doctest::Approx(db).epsilon(1e-12));
  }
  for (double lin : {1e-12, 2.5118864315095822e-05, 1.0, 42.0, 1e9}) {
    CHECK(db_to_linear(linear_to_db(lin)) ==
          doctest::Approx(lin).epsilon(1e-12));
  }
}

TEST_CASE("units: log-domain conversions reject non-positive input") {
  CHECK_THROWS_AS(linear_to_db(0.0), std::domain_error);
  CHECK_THROWS_AS(linear_to_db(-1.0), std::domain_error);
  CHECK_THROWS_AS(watts_to_dbm(0.0), std::domain_error);
  CHECK_THROWS_AS(watts_to_dbm(-0.5), std::domain_error);
}

}  // namespace
