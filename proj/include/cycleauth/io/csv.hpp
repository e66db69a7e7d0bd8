#pragma once

#include "cycleauth/io/recording.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace cycleauth::io {

/// Header of the canonical schema.
inline constexpr const char *kCsvHeader = "subject_id,label,seq,ax,ay,az";

/// Recordings grouped by (subject, label) in order of first appearance; samples keep
/// file order. Throws ParseError carrying the 1-based line number.
std::vector<Recording> load_csv(std::istream &in);
std::vector<Recording> load_csv(const std::filesystem::path &path);

/// Writes values with 9 significant digits, LF line endings.
void write_csv(std::ostream &out, const std::vector<Recording> &recordings);
void write_csv(const std::filesystem::path &path, const std::vector<Recording> &recordings);

/// Shortest text for a value at 9 significant digits, locale independent.
std::string format_number(double v);

} // namespace cycleauth::io
