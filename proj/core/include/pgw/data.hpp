#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace pgw {

/// One subject: two right-censored times. Index 1 is the treated unit.
struct PairedRecord {
  std::string id;
  double t1 = 0.0;
  bool d1 = false;  // true when t1 is an event time
  double t2 = 0.0;
  bool d2 = false;
  std::vector<double> covariates;  // aligned with PairedData::covariate_names
};

struct PairedData {
  std::vector<std::string> covariate_names;
  std::vector<PairedRecord> records;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
  /// Position of a covariate; throws InputError when absent.
  std::size_t covariate_index(const std::string& name) const;
  /// Throws InputError on non-positive times, non-finite covariates or ragged rows.
  void validate() const;
};

enum class Layout { kWide, kLong };

/// Column names for non-canonical files. Empty strings mean the canonical names
/// (`id,t1,d1,t2,d2` wide; `id,role,time,status` long).
struct ColumnMap {
  std::string id;
  std::string t1, d1, t2, d2;
  std::string role, time, status;
};

/// Reads a paired CSV. Columns other than the structural ones become
/// covariates (in the long layout they must agree between the two rows of a
/// subject). Throws InputError with line numbers on malformed input.
PairedData read_paired_csv(std::istream& in, Layout layout, const ColumnMap& columns = {});
PairedData load_paired_csv(const std::string& path, Layout layout, const ColumnMap& columns = {});

void write_wide_csv(std::ostream& out, const PairedData& data);
void write_long_csv(std::ostream& out, const PairedData& data);

/// Product-limit estimate: survival just after each distinct event time.
struct KmCurve {
  std::vector<double> times;
  std::vector<double> survival;
  std::vector<int> at_risk;
  std::vector<int> events;

  /// Step-function value at t (1 before the first event).
  double at(double t) const;
};

KmCurve kaplan_meier(const std::vector<double>& times, const std::vector<bool>& events);

}  // namespace pgw
