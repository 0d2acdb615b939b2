#include "io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace twkde::cli {

namespace {

std::string
trim(const std::string& s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool
parse_double(const std::string& token, double& out)
{
  const char* first = token.data();
  const char* last = first + token.size();
  if (first != last && *first == '+')
    ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && first != last;
}

std::vector<std::string>
read_lines(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw InputError("cannot open '" + path + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line))
    lines.push_back(trim(line));
  while (!lines.empty() && lines.back().empty())
    lines.pop_back();
  return lines;
}

} // namespace

std::vector<double>
read_values(const std::string& path)
{
  const auto lines = read_lines(path);
  std::vector<double> values;
  values.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i == 0 && lines[i] == "x")
      continue;
    double v = 0.0;
    if (!parse_double(lines[i], v) || !std::isfinite(v) || v < 0.0)
      throw InputError(path + ":" + std::to_string(i + 1) + ": expected a finite nonnegative number, got '" +
                       lines[i] + "'");
    values.push_back(v);
  }
  if (values.empty())
    throw InputError(path + ": no observations");
  return values;
}

Table
read_table(const std::string& path)
{
  const auto lines = read_lines(path);
  if (lines.empty())
    throw InputError(path + ": empty table");
  Table t;
  std::string cell;
  std::istringstream head(lines[0]);
  while (std::getline(head, cell, ','))
    t.header.push_back(trim(cell));
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::vector<double> row;
    std::istringstream ss(lines[i]);
    while (std::getline(ss, cell, ',')) {
      double v = 0.0;
      const auto token = trim(cell);
      if (!parse_double(token, v))
        throw InputError(path + ":" + std::to_string(i + 1) + ": bad number '" + token + "'");
      row.push_back(v);
    }
    if (row.size() != t.header.size())
      throw InputError(path + ":" + std::to_string(i + 1) + ": expected " +
                       std::to_string(t.header.size()) + " columns");
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string
format_double(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void
write_table(const std::string& path, const Table& table)
{
  std::string out;
  for (std::size_t c = 0; c < table.header.size(); ++c)
    out += (c ? "," : "") + table.header[c];
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c)
        out += ',';
      out += format_double(row[c]);
    }
    out += '\n';
  }
  write_text(path, out);
}

void
write_text(const std::string& path, const std::string& text)
{
  std::ofstream f(path, std::ios::binary);
  if (!f)
    throw InputError("cannot write '" + path + "'");
  f << text;
  if (!f)
    throw InputError("write to '" + path + "' failed");
}

} // namespace twkde::cli
