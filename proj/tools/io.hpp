#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace twkde::cli {

//! Bad user input (flags, files); maps to exit code 2.
struct InputError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

//! One value per line, optional header line "x". Values must be finite and
//! nonnegative; the message names the offending line.
std::vector<double> read_values(const std::string& path);

struct Table
{
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

//! Comma separated numeric table with one header line.
Table read_table(const std::string& path);

//! %.17g, enough digits to reproduce the double exactly.
std::string format_double(double v);

void write_table(const std::string& path, const Table& table);

void write_text(const std::string& path, const std::string& text);

} // namespace twkde::cli
