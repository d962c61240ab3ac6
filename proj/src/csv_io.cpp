#include "mrw/csv_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace mrw {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  fields.push_back(cur);
  return fields;
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

double parse_number(const std::string& s, const std::string& where) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw CsvError("malformed number '" + s + "' in " + where);
  }
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CsvError("cannot open " + path);
  return in;
}

}  // namespace

std::vector<double> read_cumulative_csv(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  std::string line;
  if (!std::getline(in, line)) throw CsvError(path + ": empty file");
  const auto header = split_line(line);
  if (header.size() < 2) throw CsvError(path + ": need at least two columns");

  const std::string h0 = lower(header[0]);
  const std::string h1 = lower(header[1]);
  bool price_mode;
  int value_col;
  if (h0 == "date" && h1 == "price") {
    price_mode = true;
    value_col = 1;
  } else if (h1 == "cumulative_log_price" || h1 == "cumulative") {
    price_mode = false;
    value_col = 1;
  } else if (header.size() >= 3 && lower(header[2]) == "cumulative") {
    price_mode = false;  // simulate output: step,return,cumulative
    value_col = 2;
  } else {
    throw CsvError(path + ": unrecognised header '" + line + "'");
  }

  std::vector<double> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_line(line);
    if (static_cast<int>(fields.size()) <= value_col)
      throw CsvError(path + ": too few columns at line " + std::to_string(line_no));
    double v = parse_number(fields[static_cast<std::size_t>(value_col)],
                            path + ":" + std::to_string(line_no));
    if (price_mode) {
      if (!(v > 0.0)) throw CsvError(path + ": non-positive price at line " + std::to_string(line_no));
      v = std::log(v);
    }
    out.push_back(v);
  }
  if (out.empty()) throw CsvError(path + ": no data rows");
  return out;
}

VolHistory read_history_csv(const std::string& path, double tau) {
  std::ifstream in = open_or_throw(path);
  std::string line;
  if (!std::getline(in, line)) throw CsvError(path + ": empty file");
  const auto header = split_line(line);
  if (header.size() < 2 || lower(header[1]) != "sigma")
    throw CsvError(path + ": expected header k,sigma");

  VolHistory history;
  history.tau = tau;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_line(line);
    if (fields.size() < 2)
      throw CsvError(path + ": too few columns at line " + std::to_string(line_no));
    const double sigma = parse_number(fields[1], path + ":" + std::to_string(line_no));
    if (!(sigma > 0.0))
      throw CsvError(path + ": non-positive sigma at line " + std::to_string(line_no));
    history.sigmas.push_back(sigma);
  }
  if (history.sigmas.empty()) throw CsvError(path + ": no data rows");
  return history;
}

void write_variogram_csv(const std::string& path, const VariogramEstimate& vario) {
  std::ofstream out(path);
  if (!out) throw CsvError("cannot write " + path);
  out << "lag,variogram,pairs\n";
  out.precision(17);
  for (std::size_t i = 0; i < vario.lags.size(); ++i)
    out << vario.lags[i] << ',' << vario.values[i] << ',' << vario.pair_counts[i] << '\n';
  if (!out) throw CsvError("write failed: " + path);
}

VariogramEstimate read_variogram_csv(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  std::string line;
  if (!std::getline(in, line)) throw CsvError(path + ": empty file");
  if (lower(split_line(line)[0]) != "lag") throw CsvError(path + ": expected header lag,...");

  VariogramEstimate v;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_line(line);
    if (fields.size() < 2)
      throw CsvError(path + ": too few columns at line " + std::to_string(line_no));
    v.lags.push_back(
        static_cast<std::int64_t>(parse_number(fields[0], path + ":" + std::to_string(line_no))));
    v.values.push_back(parse_number(fields[1], path + ":" + std::to_string(line_no)));
    v.pair_counts.push_back(
        fields.size() > 2
            ? static_cast<std::int64_t>(parse_number(fields[2], path + ":" + std::to_string(line_no)))
            : 0);
  }
  if (v.lags.empty()) throw CsvError(path + ": no data rows");
  return v;
}

void write_path_csv(const std::string& path, const MrwPath& p) {
  std::ofstream out(path);
  if (!out) throw CsvError("cannot write " + path);
  out << "step,return,cumulative\n";
  out.precision(17);
  for (std::size_t i = 0; i < p.returns.size(); ++i)
    out << i << ',' << p.returns[i] << ',' << p.cumulative[i] << '\n';
  if (!out) throw CsvError("write failed: " + path);
}

}  // namespace mrw
