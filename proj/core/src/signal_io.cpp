#include "imsparkle/signal_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <string_view>
#include <vector>

namespace imsparkle {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_field(std::string_view text, std::size_t line) {
  text = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::runtime_error("signal CSV line " + std::to_string(line) + ": cannot parse '" +
                             std::string(text) + "'");
  }
  return value;
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_signal_csv(std::ostream& out, const CVector& samples) {
  out << "re,im\n";
  for (Eigen::Index k = 0; k < samples.size(); ++k) {
    out << format_double(samples[k].real()) << ',' << format_double(samples[k].imag()) << '\n';
  }
}

void write_signal_csv(const std::string& path, const CVector& samples) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  write_signal_csv(out, samples);
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

CVector read_signal_csv(std::istream& in) {
  std::vector<Complex> values;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view text = trim(raw);
    if (text.empty()) continue;
    if (line == 1 && text == "re,im") continue;
    const auto comma = text.find(',');
    if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos) {
      throw std::runtime_error("signal CSV line " + std::to_string(line) +
                               ": expected exactly two fields 're,im'");
    }
    values.emplace_back(parse_field(text.substr(0, comma), line),
                        parse_field(text.substr(comma + 1), line));
  }
  if (values.empty()) throw std::runtime_error("empty signal");
  return Eigen::Map<const CVector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

CVector read_signal_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  return read_signal_csv(in);
}

}  // namespace imsparkle
