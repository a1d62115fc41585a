#include "paneldiag/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

namespace paneldiag {

namespace {

std::string trim(const std::string& s) {
  size_t begin = s.find_first_not_of(" \t\r");
  size_t end = s.find_last_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

bool is_never_sentinel(const std::string& s) {
  return s.empty() || s == "inf" || s == "Inf" || s == "never";
}

struct RawRow {
  std::string unit;
  double time_value;
  std::string time_label;
  double outcome;
  std::string cohort;
  size_t line_no;
};

}  // namespace

PanelDataset read_csv(std::istream& in, const CsvColumns& cols) {
  std::string line;
  if (!std::getline(in, line))
    throw PanelError(ErrorCode::ParseError, "empty input: header row required");

  const std::vector<std::string> header = split_fields(line);
  auto column_index = [&](const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
      throw PanelError(ErrorCode::ParseError, "column '" + name + "' not found in header");
    return static_cast<size_t>(it - header.begin());
  };
  const size_t iu = column_index(cols.unit);
  const size_t it = column_index(cols.time);
  const size_t iy = column_index(cols.outcome);
  const size_t ig = column_index(cols.cohort);
  const size_t width = std::max({iu, it, iy, ig}) + 1;

  std::vector<RawRow> rows;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> f = split_fields(line);
    if (f.size() < width)
      throw PanelError(ErrorCode::ParseError,
                       "line " + std::to_string(line_no) + ": expected at least " +
                           std::to_string(width) + " fields, got " + std::to_string(f.size()));
    RawRow row;
    row.unit = f[iu];
    row.time_label = f[it];
    row.cohort = f[ig];
    row.line_no = line_no;
    if (row.unit.empty())
      throw PanelError(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": empty unit id");
    if (!parse_double(f[it], row.time_value))
      throw PanelError(ErrorCode::ParseError,
                       "line " + std::to_string(line_no) + ": non-numeric time '" + f[it] + "'");
    if (!parse_double(f[iy], row.outcome))
      throw PanelError(ErrorCode::ParseError,
                       "line " + std::to_string(line_no) + ": non-numeric outcome '" + f[iy] + "'");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw PanelError(ErrorCode::ParseError, "no data rows");

  // Periods: sorted distinct time values, ranked 1..T. The first-seen string
  // form of each value is kept as the reporting label.
  std::map<double, std::string> time_values;
  for (const RawRow& r : rows) time_values.emplace(r.time_value, r.time_label);
  std::unordered_map<double, int> period_rank;
  std::vector<std::string> time_labels;
  int rank = 0;
  for (const auto& [value, label] : time_values) {
    period_rank[value] = ++rank;
    time_labels.push_back(label);
  }
  const int T = rank;

  // Units in order of first appearance.
  std::vector<std::string> unit_labels;
  std::unordered_map<std::string, int> unit_index;
  for (const RawRow& r : rows) {
    if (unit_index.emplace(r.unit, static_cast<int>(unit_labels.size())).second)
      unit_labels.push_back(r.unit);
  }
  const int N = static_cast<int>(unit_labels.size());

  auto resolve_adoption = [&](const RawRow& r) {
    if (is_never_sentinel(r.cohort)) return AdoptionTime::never();
    double value = 0.0;
    if (!parse_double(r.cohort, value))
      throw PanelError(ErrorCode::ParseError, "line " + std::to_string(r.line_no) +
                                                  ": cohort '" + r.cohort +
                                                  "' is neither a period label nor a sentinel");
    auto found = period_rank.find(value);
    if (found == period_rank.end()) {
      if (value == 0.0) return AdoptionTime::never();  // legacy 0 sentinel
      throw PanelError(ErrorCode::ParseError, "line " + std::to_string(r.line_no) + ": cohort '" +
                                                  r.cohort + "' does not match any period label");
    }
    return AdoptionTime::finite(found->second);
  };

  std::vector<double> outcomes(static_cast<size_t>(N) * T, 0.0);
  std::vector<char> seen(static_cast<size_t>(N) * T, 0);
  std::vector<AdoptionTime> adoption(N, AdoptionTime::never());
  std::vector<char> adoption_set(N, 0);

  for (const RawRow& r : rows) {
    const int i = unit_index[r.unit];
    const int t = period_rank[r.time_value];
    const size_t cell = static_cast<size_t>(i) * T + t - 1;
    if (seen[cell])
      throw PanelError(ErrorCode::DuplicateObservation,
                       "unit '" + r.unit + "' period '" + r.time_label + "' appears twice");
    seen[cell] = 1;
    outcomes[cell] = r.outcome;

    const AdoptionTime g = resolve_adoption(r);
    if (!adoption_set[i]) {
      adoption[i] = g;
      adoption_set[i] = 1;
    } else if (adoption[i] != g) {
      throw PanelError(ErrorCode::InconsistentAdoption,
                       "unit '" + r.unit + "' has conflicting cohort values");
    }
  }

  for (int i = 0; i < N; ++i)
    for (int t = 1; t <= T; ++t)
      if (!seen[static_cast<size_t>(i) * T + t - 1])
        throw PanelError(ErrorCode::UnbalancedPanel, "missing observation for unit '" +
                                                         unit_labels[i] + "' period '" +
                                                         time_labels[t - 1] + "'");

  return PanelDataset(std::move(unit_labels), std::move(time_labels), std::move(outcomes),
                      std::move(adoption));
}

PanelDataset load_csv(const std::string& path, const CsvColumns& cols) {
  std::ifstream in(path);
  if (!in) throw PanelError(ErrorCode::ParseError, "cannot open '" + path + "'");
  return read_csv(in, cols);
}

void write_csv(const PanelDataset& d, std::ostream& out, const CsvColumns& cols) {
  out << cols.unit << ',' << cols.time << ',' << cols.outcome << ',' << cols.cohort << '\n';
  char buffer[32];
  for (int i = 0; i < d.n_units(); ++i) {
    const AdoptionTime g = d.adoption(i);
    const std::string cohort = g.is_never() ? "inf" : d.time_label(g.period());
    for (int t = 1; t <= d.n_periods(); ++t) {
      std::snprintf(buffer, sizeof buffer, "%.17g", d.outcome(i, t));
      out << d.unit_label(i) << ',' << d.time_label(t) << ',' << buffer << ',' << cohort << '\n';
    }
  }
}

void write_csv_file(const PanelDataset& d, const std::string& path, const CsvColumns& cols) {
  std::ofstream out(path);
  if (!out) throw PanelError(ErrorCode::ParseError, "cannot open '" + path + "' for writing");
  write_csv(d, out, cols);
}

}  // namespace paneldiag
