#include "pgw/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "pgw/errors.hpp"

namespace pgw {

std::size_t PairedData::covariate_index(const std::string& name) const {
  const auto it = std::find(covariate_names.begin(), covariate_names.end(), name);
  if (it == covariate_names.end()) throw InputError("no covariate named '" + name + "'");
  return static_cast<std::size_t>(it - covariate_names.begin());
}

void PairedData::validate() const {
  for (const PairedRecord& r : records) {
    if (!(r.t1 > 0.0 && r.t2 > 0.0 && std::isfinite(r.t1) && std::isfinite(r.t2)))
      throw InputError("record '" + r.id + "': times must be finite and positive");
    if (r.covariates.size() != covariate_names.size())
      throw InputError("record '" + r.id + "': covariate count does not match the header");
    for (double x : r.covariates)
      if (!std::isfinite(x)) throw InputError("record '" + r.id + "': non-finite covariate");
  }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  fields.push_back(field);
  for (auto& f : fields) {
    const auto b = f.find_first_not_of(" \t");
    const auto e = f.find_last_not_of(" \t");
    f = b == std::string::npos ? std::string() : f.substr(b, e - b + 1);
  }
  return fields;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;

  std::size_t column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw InputError("missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  }
};

Table read_table(std::istream& in) {
  Table t;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto fields = split_csv_line(line);
    if (t.header.empty()) {
      t.header = std::move(fields);
      continue;
    }
    if (fields.size() != t.header.size()) {
      std::ostringstream os;
      os << "line " << number << ": expected " << t.header.size() << " fields, found "
         << fields.size();
      throw InputError(os.str());
    }
    t.rows.push_back(std::move(fields));
    t.line_numbers.push_back(number);
  }
  return t;
}

double parse_number(const std::string& text, std::size_t line, const std::string& column) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v)) {
    std::ostringstream os;
    os << "line " << line << ": column '" << column << "' has non-numeric value '" << text << "'";
    throw InputError(os.str());
  }
  return v;
}

bool parse_flag(const std::string& text, std::size_t line, const std::string& column) {
  const double v = parse_number(text, line, column);
  if (v != 0.0 && v != 1.0) {
    std::ostringstream os;
    os << "line " << line << ": column '" << column << "' must be 0 or 1";
    throw InputError(os.str());
  }
  return v == 1.0;
}

double parse_time(const std::string& text, std::size_t line, const std::string& column) {
  const double v = parse_number(text, line, column);
  if (!(v > 0.0)) {
    std::ostringstream os;
    os << "line " << line << ": column '" << column << "' must be positive";
    throw InputError(os.str());
  }
  return v;
}

const std::string& pick(const std::string& given, const std::string& fallback) {
  return given.empty() ? fallback : given;
}

PairedData read_wide(const Table& t, const ColumnMap& m) {
  const std::string id = pick(m.id, "id"), t1 = pick(m.t1, "t1"), d1 = pick(m.d1, "d1"),
                    t2 = pick(m.t2, "t2"), d2 = pick(m.d2, "d2");
  const std::size_t ci = t.column(id), ct1 = t.column(t1), cd1 = t.column(d1),
                    ct2 = t.column(t2), cd2 = t.column(d2);
  PairedData data;
  std::vector<std::size_t> cov_cols;
  for (std::size_t c = 0; c < t.header.size(); ++c) {
    if (c == ci || c == ct1 || c == cd1 || c == ct2 || c == cd2) continue;
    cov_cols.push_back(c);
    data.covariate_names.push_back(t.header[c]);
  }
  std::map<std::string, std::size_t> seen;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    const std::size_t line = t.line_numbers[r];
    PairedRecord rec;
    rec.id = row[ci];
    if (!seen.emplace(rec.id, line).second) {
      std::ostringstream os;
      os << "line " << line << ": duplicate id '" << rec.id << "'";
      throw InputError(os.str());
    }
    rec.t1 = parse_time(row[ct1], line, t1);
    rec.d1 = parse_flag(row[cd1], line, d1);
    rec.t2 = parse_time(row[ct2], line, t2);
    rec.d2 = parse_flag(row[cd2], line, d2);
    for (std::size_t c : cov_cols) rec.covariates.push_back(parse_number(row[c], line, t.header[c]));
    data.records.push_back(std::move(rec));
  }
  return data;
}

PairedData read_long(const Table& t, const ColumnMap& m) {
  const std::string id = pick(m.id, "id"), role = pick(m.role, "role"),
                    time = pick(m.time, "time"), status = pick(m.status, "status");
  const std::size_t ci = t.column(id), cr = t.column(role), ct = t.column(time),
                    cs = t.column(status);
  PairedData data;
  std::vector<std::size_t> cov_cols;
  for (std::size_t c = 0; c < t.header.size(); ++c) {
    if (c == ci || c == cr || c == ct || c == cs) continue;
    cov_cols.push_back(c);
    data.covariate_names.push_back(t.header[c]);
  }

  struct Partial {
    PairedRecord rec;
    bool has[2] = {false, false};
    std::size_t first_line = 0;
  };
  std::vector<std::string> order;
  std::map<std::string, Partial> by_id;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    const std::size_t line = t.line_numbers[r];
    const double rv = parse_number(row[cr], line, role);
    if (rv != 1.0 && rv != 2.0) {
      std::ostringstream os;
      os << "line " << line << ": role must be 1 or 2";
      throw InputError(os.str());
    }
    const int k = rv == 1.0 ? 0 : 1;
    std::vector<double> cov;
    for (std::size_t c : cov_cols) cov.push_back(parse_number(row[c], line, t.header[c]));

    auto [it, inserted] = by_id.try_emplace(row[ci]);
    Partial& p = it->second;
    if (inserted) {
      order.push_back(row[ci]);
      p.rec.id = row[ci];
      p.rec.covariates = cov;
      p.first_line = line;
    } else if (p.rec.covariates != cov) {
      std::ostringstream os;
      os << "line " << line << ": covariates of id '" << row[ci]
         << "' differ from line " << p.first_line;
      throw InputError(os.str());
    }
    if (p.has[k]) {
      std::ostringstream os;
      os << "line " << line << ": duplicate (id, role) = (" << row[ci] << ", " << k + 1 << ")";
      throw InputError(os.str());
    }
    p.has[k] = true;
    const double tv = parse_time(row[ct], line, time);
    const bool dv = parse_flag(row[cs], line, status);
    if (k == 0) {
      p.rec.t1 = tv;
      p.rec.d1 = dv;
    } else {
      p.rec.t2 = tv;
      p.rec.d2 = dv;
    }
  }

  std::vector<std::string> incomplete;
  for (const std::string& key : order) {
    Partial& p = by_id.at(key);
    if (!p.has[0] || !p.has[1]) {
      incomplete.push_back(key);
      continue;
    }
    data.records.push_back(std::move(p.rec));
  }
  if (!incomplete.empty()) {
    std::ostringstream os;
    os << "subjects without both members:";
    for (const auto& key : incomplete) os << ' ' << key;
    throw InputError(os.str());
  }
  return data;
}

void write_number(std::ostream& out, double v) {
  out << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
}

}  // namespace

PairedData read_paired_csv(std::istream& in, Layout layout, const ColumnMap& columns) {
  const Table t = read_table(in);
  if (t.header.empty()) throw InputError("input has no header line");
  if (t.rows.empty()) throw InputError("input has no records");
  return layout == Layout::kWide ? read_wide(t, columns) : read_long(t, columns);
}

PairedData load_paired_csv(const std::string& path, Layout layout, const ColumnMap& columns) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return read_paired_csv(in, layout, columns);
}

void write_wide_csv(std::ostream& out, const PairedData& data) {
  out << "id,t1,d1,t2,d2";
  for (const auto& name : data.covariate_names) out << ',' << name;
  out << '\n';
  for (const PairedRecord& r : data.records) {
    out << r.id << ',';
    write_number(out, r.t1);
    out << ',' << (r.d1 ? 1 : 0) << ',';
    write_number(out, r.t2);
    out << ',' << (r.d2 ? 1 : 0);
    for (double x : r.covariates) {
      out << ',';
      write_number(out, x);
    }
    out << '\n';
  }
}

void write_long_csv(std::ostream& out, const PairedData& data) {
  out << "id,role,time,status";
  for (const auto& name : data.covariate_names) out << ',' << name;
  out << '\n';
  for (const PairedRecord& r : data.records) {
    for (int k = 1; k <= 2; ++k) {
      out << r.id << ',' << k << ',';
      write_number(out, k == 1 ? r.t1 : r.t2);
      out << ',' << ((k == 1 ? r.d1 : r.d2) ? 1 : 0);
      for (double x : r.covariates) {
        out << ',';
        write_number(out, x);
      }
      out << '\n';
    }
  }
}

double KmCurve::at(double t) const {
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  if (it == times.begin()) return 1.0;
  return survival[static_cast<std::size_t>(it - times.begin()) - 1];
}

KmCurve kaplan_meier(const std::vector<double>& times, const std::vector<bool>& events) {
  if (times.empty()) throw InputError("kaplan_meier: no observations");
  if (times.size() != events.size()) throw InputError("kaplan_meier: times and flags differ in length");
  for (double t : times)
    if (!(t > 0.0) || !std::isfinite(t)) throw InputError("kaplan_meier: times must be positive");

  std::vector<std::size_t> idx(times.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return times[a] < times[b]; });

  KmCurve km;
  int at_risk = static_cast<int>(times.size());
  double s = 1.0;
  std::size_t i = 0;
  while (i < idx.size()) {
    const double t = times[idx[i]];
    int deaths = 0;
    int leaving = 0;
    while (i < idx.size() && times[idx[i]] == t) {
      deaths += events[idx[i]] ? 1 : 0;
      ++leaving;
      ++i;
    }
    if (deaths > 0) {
      s *= 1.0 - static_cast<double>(deaths) / at_risk;
      km.times.push_back(t);
      km.survival.push_back(s);
      km.at_risk.push_back(at_risk);
      km.events.push_back(deaths);
    }
    at_risk -= leaving;
  }
  return km;
}

}  // namespace pgw
