#include "rscsaga/libsvm.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <string>
#include <string_view>

#include <fmt/format.h>

namespace rscsaga {

namespace {

struct Entry {
  std::size_t col;
  double value;
};

struct ParsedLine {
  double label;
  std::vector<Entry> entries;
};

double parse_double(std::string_view token, std::size_t line, const char* what) {
  double v = 0.0;
  // from_chars rejects a leading '+', which labels such as "+1" use.
  const std::string_view digits = token.size() > 1 && token[0] == '+' ? token.substr(1) : token;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || !std::isfinite(v)) {
    throw ParseError(fmt::format("invalid {} '{}'", what, token), line);
  }
  return v;
}

ParsedLine parse_line(std::string_view text, std::size_t line) {
  ParsedLine out{};
  std::size_t pos = 0;
  bool have_label = false;
  std::size_t last_col = 0;
  while (pos < text.size()) {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    if (pos >= text.size()) break;
    std::size_t end = pos;
    while (end < text.size() && text[end] != ' ' && text[end] != '\t') ++end;
    const std::string_view token = text.substr(pos, end - pos);
    pos = end;
    if (!have_label) {
      out.label = parse_double(token, line, "label");
      have_label = true;
      continue;
    }
    const auto colon = token.find(':');
    if (colon == std::string_view::npos) throw ParseError(fmt::format("expected idx:val, got '{}'", token), line);
    std::size_t idx = 0;
    const auto key = token.substr(0, colon);
    const auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), idx);
    if (ec != std::errc() || ptr != key.data() + key.size() || idx == 0) {
      throw ParseError(fmt::format("invalid feature index '{}'", key), line);
    }
    if (idx <= last_col) throw ParseError("feature indices must be strictly increasing", line);
    last_col = idx;
    out.entries.push_back({idx - 1, parse_double(token.substr(colon + 1), line, "value")});
  }
  if (!have_label) throw ParseError("missing label", line);
  return out;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace

Dataset load_libsvm(const std::filesystem::path& path, std::optional<std::size_t> p, LabelMapping labels) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::vector<ParsedLine> rows;
  std::size_t max_col = 0;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    const auto first = text.find_first_not_of(" \t");
    if (first == std::string::npos || text[first] == '#') continue;
    ParsedLine parsed = parse_line(text, line);
    if (!parsed.entries.empty()) {
      const std::size_t top = parsed.entries.back().col + 1;
      if (p && top > *p) throw ParseError(fmt::format("feature index {} exceeds p = {}", top, *p), line);
      max_col = std::max(max_col, top);
    }
    rows.push_back(std::move(parsed));
  }
  if (in.bad()) throw IoError("read failed for '" + path.string() + "'");
  if (rows.empty()) throw ParseError("no data lines in '" + path.string() + "'", line == 0 ? 1 : line);
  const std::size_t cols = p.value_or(max_col);
  if (cols == 0) throw ParseError("no features found", line);

  Matrix X = Matrix::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  Vector y(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    const double label = rows[i].label;
    y[r] = labels == LabelMapping::PlusMinus ? (label > 0.0 ? 1.0 : -1.0) : label;
    for (const Entry& e : rows[i].entries) X(r, static_cast<Eigen::Index>(e.col)) = e.value;
  }
  return Dataset(std::move(X), std::move(y));
}

void write_libsvm(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream out = open_for_write(path);
  const Matrix& X = ds.features();
  std::string buf;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    buf.clear();
    fmt::format_to(std::back_inserter(buf), "{:.17g}", ds.responses()[i]);
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      if (X(i, j) != 0.0) fmt::format_to(std::back_inserter(buf), " {}:{:.17g}", j + 1, X(i, j));
    }
    buf.push_back('\n');
    out << buf;
  }
  finish(out, path);
}

void write_csv_dump(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream out = open_for_write(path);
  out << "row,col,value\n";
  const Matrix& X = ds.features();
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      if (X(i, j) != 0.0) out << fmt::format("{},{},{:.17g}\n", i, j, X(i, j));
    }
  }
  finish(out, path);
}

}  // namespace rscsaga
