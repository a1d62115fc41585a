#include <doctest.h>

#include "paneldiag/panel.hpp"
#include "test_support.hpp"

using namespace paneldiag;
using paneldiag::testing::make_panel;
using paneldiag::testing::random_panel;

TEST_CASE("adoption times order with never-treated last") {
  const AdoptionTime g2 = AdoptionTime::finite(2);
  const AdoptionTime g5 = AdoptionTime::finite(5);
  const AdoptionTime never = AdoptionTime::never();
  CHECK(g2 < g5);
  CHECK(g5 < never);
  CHECK(g2 != never);
  CHECK(never == AdoptionTime::never());
  CHECK(g2 == AdoptionTime::finite(2));
  CHECK_THROWS_AS(never.period(), PanelError);
}

TEST_CASE("treatment indicator switches on at adoption and never before") {
  const PanelDataset d = make_panel({
      {AdoptionTime::finite(3), {0, 0, 0, 0}},
      {AdoptionTime::never(), {0, 0, 0, 0}},
  });
  CHECK(treatment_indicator(d, 0, 2) == 0);
  CHECK(treatment_indicator(d, 0, 3) == 1);
  CHECK(treatment_indicator(d, 0, 4) == 1);
  for (int t = 1; t <= 4; ++t) CHECK(treatment_indicator(d, 1, t) == 0);

  CHECK_THROWS_AS(treatment_indicator(d, 2, 1), PanelError);
  CHECK_THROWS_AS(treatment_indicator(d, 0, 0), PanelError);
  CHECK_THROWS_AS(treatment_indicator(d, 0, 5), PanelError);
}

TEST_CASE("treatment is absorbing: indicator weakly increasing in t") {
  Rng rng(314);
  for (int rep = 0; rep < 20; ++rep) {
    const PanelDataset d = random_panel(rng);
    for (int i = 0; i < d.n_units(); ++i)
      for (int t = 2; t <= d.n_periods(); ++t)
        CHECK(treatment_indicator(d, i, t) >= treatment_indicator(d, i, t - 1));
  }
}

TEST_CASE("cohort summary counts units per adoption time") {
  SUBCASE("mixed cohorts with never-treated") {
    const PanelDataset d = make_panel({
        {AdoptionTime::finite(2), {0, 0, 0, 0, 0}},
        {AdoptionTime::finite(2), {0, 0, 0, 0, 0}},
        {AdoptionTime::finite(5), {0, 0, 0, 0, 0}},
        {AdoptionTime::never(), {0, 0, 0, 0, 0}},
    });
    const CohortSummary summary = cohort_summary(d);
    REQUIRE(summary.cohorts.size() == 3);
    CHECK(summary.cohorts[0] == std::pair(AdoptionTime::finite(2), 2));
    CHECK(summary.cohorts[1] == std::pair(AdoptionTime::finite(5), 1));
    CHECK(summary.cohorts[2] == std::pair(AdoptionTime::never(), 1));
    CHECK(summary.has_never_treated);
  }
  SUBCASE("all never-treated is a single cohort") {
    const PanelDataset d = make_panel({
        {AdoptionTime::never(), {0, 0}},
        {AdoptionTime::never(), {0, 0}},
    });
    const CohortSummary summary = cohort_summary(d);
    REQUIRE(summary.cohorts.size() == 1);
    CHECK(summary.cohorts[0].second == 2);
    CHECK(summary.has_never_treated);
  }
  SUBCASE("no never-treated cohort") {
    const PanelDataset d = make_panel({
        {AdoptionTime::finite(2), {0, 0, 0, 0}},
        {AdoptionTime::finite(3), {0, 0, 0, 0}},
        {AdoptionTime::finite(4), {0, 0, 0, 0}},
    });
    CHECK_FALSE(cohort_summary(d).has_never_treated);
  }
}

TEST_CASE("cohort counts sum to the unit total") {
  Rng rng(2718);
  for (int rep = 0; rep < 20; ++rep) {
    const PanelDataset d = random_panel(rng);
    int total = 0;
    for (const auto& [g, count] : cohort_summary(d).cohorts) total += count;
    CHECK(total == d.n_units());
  }
}

TEST_CASE("dataset construction validates shapes and adoption range") {
  CHECK_THROWS_AS(PanelDataset({"a"}, {"1", "2"}, {1.0}, {AdoptionTime::never()}), PanelError);
  CHECK_THROWS_AS(PanelDataset({"a"}, {"1", "2"}, {1.0, 2.0}, {AdoptionTime::finite(3)}),
                  PanelError);
  CHECK_THROWS_AS(PanelDataset({"a"}, {"1", "2"}, {1.0, 2.0}, {}), PanelError);
}
