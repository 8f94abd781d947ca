#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "schatten/matrix.hpp"
#include "schatten/streaming.hpp"

namespace schatten {

/// Dense matrix text: one row per line, whitespace-separated decimals. Blank lines and
/// lines starting with '#' are skipped. Errors are InputError with "source:line:" prefixes.
DenseMatrix parse_matrix(std::istream& in, std::string_view source = "<input>");
DenseMatrix read_matrix_file(const std::filesystem::path& path);

/// Turnstile stream text: lines "i j delta" with 0-based indices; '#' lines are comments.
std::vector<StreamUpdate> parse_stream(std::istream& in, std::string_view source = "<input>");
std::vector<StreamUpdate> read_stream_file(const std::filesystem::path& path);

/// Round-trippable output (17 significant digits).
void write_matrix(std::ostream& out, const DenseMatrix& a);

/// Shortest-form decimal with the given significant digits, e.g. format_number(7.0, 12) == "7".
std::string format_number(double x, int digits = 12);

}  // namespace schatten
