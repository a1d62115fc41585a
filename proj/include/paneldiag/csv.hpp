#pragma once

#include <iosfwd>
#include <string>

#include "paneldiag/panel.hpp"

namespace paneldiag {

struct CsvColumns {
  std::string unit = "unit";
  std::string time = "time";
  std::string outcome = "y";
  std::string cohort = "cohort";
};

// Long-format CSV with a header row. Row order is irrelevant; the panel must
// be balanced. The cohort field is either a time label (the unit's adoption
// period) or one of the never-treated sentinels: empty, "inf", "Inf",
// "never". A cohort of "0" also reads as never-treated as long as no period
// is labeled 0.
PanelDataset load_csv(const std::string& path, const CsvColumns& cols = {});
PanelDataset read_csv(std::istream& in, const CsvColumns& cols = {});

// Writes rows sorted by (unit, period) with raw labels; never-treated cohorts
// are written as "inf". load_csv(write_csv(d)) == d for every valid dataset.
void write_csv(const PanelDataset& d, std::ostream& out, const CsvColumns& cols = {});
void write_csv_file(const PanelDataset& d, const std::string& path, const CsvColumns& cols = {});

}  // namespace paneldiag
