#pragma once

#include <iosfwd>
#include <string>

#include "imsparkle/types.hpp"

namespace imsparkle {

// Complex-sample CSV: one `re,im` pair per line, 17 significant digits,
// with a single optional `re,im` header line.
void write_signal_csv(std::ostream& out, const CVector& samples);
void write_signal_csv(const std::string& path, const CVector& samples);

// Throws std::runtime_error on malformed lines or an empty signal.
CVector read_signal_csv(std::istream& in);
CVector read_signal_csv(const std::string& path);

// Shortest round-trippable decimal text of a double ("%.17g").
std::string format_double(double value);

}  // namespace imsparkle
