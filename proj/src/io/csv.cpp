#include "cycleauth/io/csv.hpp"

#include "cycleauth/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace cycleauth::io {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_double(std::string_view s, std::size_t line, const char *field) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw ParseError(std::string("non-numeric or non-finite ") + field + " '" + std::string(s) + "'", line);
  return v;
}

long long parse_int(std::string_view s, std::size_t line) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v < 0)
    throw ParseError("seq must be a non-negative integer, got '" + std::string(s) + "'", line);
  return v;
}

} // namespace

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
  return std::string(buf, ptr);
}

std::vector<Recording> load_csv(std::istream &in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError("missing header", 1);
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  if (line != kCsvHeader) throw ParseError(std::string("header must be '") + kCsvHeader + "'", line_no);

  std::vector<Recording> recs;
  std::map<std::pair<std::string, Activity>, std::size_t> index;
  std::vector<long long> last_seq;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto f = split_fields(line);
    if (f.size() != 6) throw ParseError("expected 6 fields, got " + std::to_string(f.size()), line_no);
    auto label = parse_activity(f[1]);
    if (!label) throw ParseError("unknown label '" + std::string(f[1]) + "'", line_no);
    if (f[0].empty()) throw ParseError("empty subject_id", line_no);
    long long seq = parse_int(f[2], line_no);
    double ax = parse_double(f[3], line_no, "ax");
    double ay = parse_double(f[4], line_no, "ay");
    double az = parse_double(f[5], line_no, "az");

    auto key = std::make_pair(std::string(f[0]), *label);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, recs.size()).first;
      Recording r;
      r.subject_id = key.first;
      r.label = key.second;
      recs.push_back(std::move(r));
      last_seq.push_back(-1);
    }
    if (seq <= last_seq[it->second]) throw ParseError("seq must increase within a recording", line_no);
    last_seq[it->second] = seq;
    auto &r = recs[it->second];
    r.axes[0].push_back(ax);
    r.axes[1].push_back(ay);
    r.axes[2].push_back(az);
  }
  return recs;
}

std::vector<Recording> load_csv(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  return load_csv(in);
}

void write_csv(std::ostream &out, const std::vector<Recording> &recordings) {
  out << kCsvHeader << '\n';
  for (const auto &r : recordings) {
    r.validate();
    for (std::size_t i = 0; i < r.size(); ++i)
      out << r.subject_id << ',' << to_string(r.label) << ',' << i << ',' << format_number(r.axes[0][i]) << ','
          << format_number(r.axes[1][i]) << ',' << format_number(r.axes[2][i]) << '\n';
  }
}

void write_csv(const std::filesystem::path &path, const std::vector<Recording> &recordings) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  write_csv(out, recordings);
}

} // namespace cycleauth::io
