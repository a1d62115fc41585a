#include <doctest.h>

#include <optional>
#include <sstream>

#include "paneldiag/csv.hpp"
#include "test_support.hpp"

using namespace paneldiag;
using paneldiag::testing::make_panel;
using paneldiag::testing::random_panel;

namespace {

PanelDataset parse(const std::string& text, const CsvColumns& cols = {}) {
  std::istringstream in(text);
  return read_csv(in, cols);
}

}  // namespace

TEST_CASE("minimal balanced panel parses") {
  const PanelDataset d = parse(
      "unit,time,y,cohort\n"
      "A,1,0.5,\n"
      "A,2,1.5,\n"
      "B,1,1.0,2\n"
      "B,2,5.0,2\n");
  CHECK(d.n_units() == 2);
  CHECK(d.n_periods() == 2);
  CHECK(d.outcome(0, 2) == 1.5);
  CHECK(d.adoption(0).is_never());
  CHECK(d.adoption(1) == AdoptionTime::finite(2));
}

TEST_CASE("row order in the file is irrelevant") {
  const std::string header = "unit,time,y,cohort\n";
  const PanelDataset a = parse(header + "A,1,1,\nA,2,2,\nB,1,3,2\nB,2,4,2\n");
  const PanelDataset b = parse(header + "B,2,4,2\nA,1,1,\nB,1,3,2\nA,2,2,\n");
  CHECK(a == b);
}

TEST_CASE("validation failures carry the right error codes") {
  const std::string header = "unit,time,y,cohort\n";
  auto code_of = [&](const std::string& body) -> std::optional<ErrorCode> {
    try {
      parse(header + body);
    } catch (const PanelError& e) {
      return e.code();
    }
    return std::nullopt;
  };
  CHECK(code_of("A,1,1,\nA,2,2,\nB,1,3,2\n") == ErrorCode::UnbalancedPanel);
  CHECK(code_of("A,1,1,\nA,1,2,\n") == ErrorCode::DuplicateObservation);
  CHECK(code_of("A,1,1,2\nA,2,2,inf\n") == ErrorCode::InconsistentAdoption);
  CHECK(code_of("A,1,oops,\nA,2,2,\n") == ErrorCode::ParseError);
  CHECK(code_of("A,1,1,7\nA,2,2,7\n") == ErrorCode::ParseError);  // cohort not a period label
  CHECK_THROWS_AS(parse("unit,time,y\nA,1,1\n"), PanelError);     // cohort column missing
  CHECK_THROWS_AS(parse(""), PanelError);
  CHECK_THROWS_AS(load_csv("/nonexistent/panel.csv"), PanelError);
}

TEST_CASE("never-treated sentinels") {
  for (const std::string sentinel : {"", "inf", "Inf", "never", "0"}) {
    const PanelDataset d = parse(
        "unit,time,y,cohort\n"
        "A,1,1," + sentinel + "\n"
        "A,2,2," + sentinel + "\n"
        "B,1,3,2\nB,2,4,2\n");
    CHECK(d.adoption(0).is_never());
  }
}

TEST_CASE("cohort 0 maps to a real period when one is labeled 0") {
  const PanelDataset d = parse(
      "unit,time,y,cohort\n"
      "A,0,1,1\nA,1,2,1\n"
      "B,0,3,0\nB,1,4,0\n");
  CHECK(d.adoption(1) == AdoptionTime::finite(1));  // rank of label "0"
}

TEST_CASE("calendar-year labels normalize to ranks") {
  const PanelDataset d = parse(
      "id,year,sales,adopted\n"
      "A,2003,1,\nA,2004,2,\nA,2005,3,\n"
      "B,2003,4,2004\nB,2004,5,2004\nB,2005,6,2004\n",
      CsvColumns{"id", "year", "sales", "adopted"});
  CHECK(d.n_periods() == 3);
  CHECK(d.time_label(1) == "2003");
  CHECK(d.adoption(1) == AdoptionTime::finite(2));
  CHECK(treatment_indicator(d, 1, 2) == 1);
}

TEST_CASE("write then load is the identity") {
  Rng rng(99);
  for (int rep = 0; rep < 10; ++rep) {
    const PanelDataset d = random_panel(rng);
    std::ostringstream out;
    write_csv(d, out);
    std::istringstream in(out.str());
    CHECK(read_csv(in) == d);
  }
}
