#include "schatten/io.hpp"

#include <charconv>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "schatten/error.hpp"

namespace schatten {

namespace {

std::string where(std::string_view source, std::size_t line) {
  return std::string(source) + ":" + std::to_string(line) + ": ";
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    const std::size_t start = pos;
    while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    if (pos > start) fields.push_back(line.substr(start, pos - start));
  }
  return fields;
}

bool skippable(const std::vector<std::string_view>& fields) {
  return fields.empty() || fields.front().front() == '#';
}

double parse_real(std::string_view field, std::string_view source, std::size_t line) {
  double x = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (field.size() > 1 && field.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, x);
  if (ec != std::errc() || ptr != last) {
    throw InputError(where(source, line) + "cannot parse '" + std::string(field) + "' as a number");
  }
  if (!std::isfinite(x)) throw InputError(where(source, line) + "non-finite value '" + std::string(field) + "'");
  return x;
}

std::size_t parse_index(std::string_view field, std::string_view source, std::size_t line) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw InputError(where(source, line) + "cannot parse '" + std::string(field) + "' as a 0-based index");
  }
  return v;
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  return in;
}

}  // namespace

DenseMatrix parse_matrix(std::istream& in, std::string_view source) {
  std::vector<double> values;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    const auto fields = split_fields(text);
    if (skippable(fields)) continue;
    if (rows == 0) {
      cols = fields.size();
    } else if (fields.size() != cols) {
      throw InputError(where(source, line) + "row has " + std::to_string(fields.size()) + " entries, expected " +
                       std::to_string(cols));
    }
    for (const auto f : fields) values.push_back(parse_real(f, source, line));
    ++rows;
  }
  if (in.bad()) throw InputError(std::string(source) + ": read error");
  if (rows == 0) throw InputError(std::string(source) + ": no matrix rows");
  return DenseMatrix(rows, cols, std::move(values));
}

DenseMatrix read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in = open(path);
  return parse_matrix(in, path.string());
}

std::vector<StreamUpdate> parse_stream(std::istream& in, std::string_view source) {
  std::vector<StreamUpdate> updates;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    const auto fields = split_fields(text);
    if (skippable(fields)) continue;
    if (fields.size() != 3) {
      throw InputError(where(source, line) + "expected 'i j delta', got " + std::to_string(fields.size()) +
                       " fields");
    }
    updates.push_back({parse_index(fields[0], source, line), parse_index(fields[1], source, line),
                       parse_real(fields[2], source, line)});
  }
  if (in.bad()) throw InputError(std::string(source) + ": read error");
  return updates;
}

std::vector<StreamUpdate> read_stream_file(const std::filesystem::path& path) {
  std::ifstream in = open(path);
  return parse_stream(in, path.string());
}

void write_matrix(std::ostream& out, const DenseMatrix& a) {
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (j) out << ' ';
      out << format_number(a(i, j), 17);
    }
    out << '\n';
  }
}

std::string format_number(double x, int digits) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

}  // namespace schatten
