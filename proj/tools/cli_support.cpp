#include "cli_support.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace smalldev::cli {

Format parse_format(std::string_view s) {
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  throw UsageError("unknown format '" + std::string(s) + "' (expected csv or json)");
}

void Table::add(std::vector<std::string> row) {
  if (row.size() != columns.size()) throw std::logic_error("table row width mismatch");
  rows.push_back(std::move(row));
}

namespace {

bool parse_number(std::string_view s, double& v) {
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

Json cell_json(const std::string& s) {
  double v = 0.0;
  if (parse_number(s, v) && std::isfinite(v)) return v;
  if (s == "true") return true;
  if (s == "false") return false;
  return s;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double to_double(const std::string& s) {
  if (s == "nan" || s.empty()) return kNaN;
  if (s == "inf") return kInf;
  if (s == "-inf") return -kInf;
  double v = 0.0;
  if (!parse_number(s, v)) throw UsageError("not a number: '" + s + "'");
  return v;
}

}  // namespace

void write_table(std::ostream& os, const Table& t, Format f) {
  if (f == Format::Csv) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
      os << '\n';
    }
    return;
  }
  Json arr = Json::array();
  for (const auto& row : t.rows) {
    Json obj = Json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[t.columns[i]] = cell_json(row[i]);
    arr.push_back(std::move(obj));
  }
  os << arr.dump(2) << '\n';
}

void write_json(std::ostream& os, const Json& j, Format f) {
  if (f == Format::Json) {
    os << j.dump(2) << '\n';
    return;
  }
  os << "key,value\n";
  for (const auto& [k, v] : j.items()) {
    if (v.is_structured()) continue;
    os << k << ',' << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
  }
}

Table to_table(const BoundCurve& c) {
  Table t;
  t.columns = {c.abscissa, "lower", "upper", "method", "params"};
  for (const auto& p : c.points) {
    t.add({format_double(p.x), format_double(p.lower), format_double(p.upper), p.method, c.params});
  }
  return t;
}

long CsvData::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<long>(i);
  }
  return -1;
}

double CsvData::number(std::size_t row, long col) const {
  return to_double(rows.at(row).at(static_cast<std::size_t>(col)));
}

CsvData read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  CsvData d;
  std::string line;
  if (!std::getline(in, line)) throw UsageError("empty file '" + path + "'");
  d.header = split(line, ',');
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto cells = split(line, ',');
    if (cells.size() != d.header.size()) throw UsageError("ragged row in '" + path + "'");
    d.rows.push_back(std::move(cells));
  }
  return d;
}

BoundCurve read_curve(const std::string& path) {
  const CsvData d = read_csv(path);
  auto find = [&d](std::initializer_list<const char*> names) -> long {
    for (const char* n : names) {
      if (const long i = d.column(n); i >= 0) return i;
    }
    return -1;
  };
  BoundCurve c;
  const long ix = find({"r", "epsilon"});
  if (ix < 0) throw UsageError("curve file needs an r or epsilon column");
  c.abscissa = d.header[static_cast<std::size_t>(ix)];
  c.quantity = c.abscissa == "r" ? "phi" : "H";
  const long il = find({"lower", "phi_lo", "phi_lower", "phi"});
  const long iu = find({"upper", "phi_hi", "phi"});
  const long im = find({"method", "variant"});
  const long ip = find({"params"});
  if (il < 0 && iu < 0) throw UsageError("curve file has no bound columns");
  for (std::size_t i = 0; i < d.rows.size(); ++i) {
    CurvePoint p;
    p.x = d.number(i, ix);
    if (il >= 0) p.lower = d.number(i, il);
    if (iu >= 0) p.upper = d.number(i, iu);
    if (im >= 0) p.method = d.rows[i][static_cast<std::size_t>(im)];
    if (ip >= 0 && c.params.empty()) c.params = d.rows[i][static_cast<std::size_t>(ip)];
    c.points.push_back(std::move(p));
  }
  return c;
}

std::vector<double> parse_list(std::string_view s) {
  std::vector<double> out;
  if (s.rfind("geom:", 0) == 0) {
    const auto parts = split(s.substr(5), ':');
    if (parts.size() != 3) throw UsageError("geom list needs geom:a:b:n");
    const double a = to_double(parts[0]);
    const double b = to_double(parts[1]);
    const double n = to_double(parts[2]);
    if (!(a > 0.0 && b > 0.0 && n >= 1.0 && n == std::floor(n))) throw UsageError("bad geom list");
    const auto count = static_cast<std::size_t>(n);
    for (std::size_t i = 0; i < count; ++i) {
      const double f = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
      out.push_back(std::exp(std::log(a) + f * (std::log(b) - std::log(a))));
    }
    return out;
  }
  for (const auto& item : split(s, ',')) {
    if (item.empty()) continue;
    const double v = to_double(item);
    if (!std::isfinite(v)) throw UsageError("list values must be finite");
    out.push_back(v);
  }
  if (out.empty()) throw UsageError("empty list");
  return out;
}

std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config '" + path + "'");
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    out.emplace_back(trim(std::string_view(t).substr(0, eq)), trim(std::string_view(t).substr(eq + 1)));
  }
  return out;
}

}  // namespace smalldev::cli
