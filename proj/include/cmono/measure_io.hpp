#ifndef CMONO_MEASURE_IO_HPP
#define CMONO_MEASURE_IO_HPP

// Plain-text measure files: one "location weight" pair per line, '#' starts a
// comment, blank lines are ignored. Moment sequences are written as CSV with
// header "n,c_n".

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cmono/errors.hpp"
#include "cmono/moments.hpp"

namespace cmono {

/// %.17g: round-trips every double.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline DiscreteSignedMeasure read_measure(std::istream& in, MeasureDomain domain = MeasureDomain::Time) {
  std::vector<Atom> atoms;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    double location = 0.0;
    double weight = 0.0;
    if (!(fields >> location)) {
      if (fields.eof()) continue;  // blank or comment-only
      throw ParseError("measure line " + std::to_string(line_no) + ": expected 'location weight'");
    }
    if (!(fields >> weight)) {
      throw ParseError("measure line " + std::to_string(line_no) + ": missing weight");
    }
    std::string rest;
    if (fields >> rest) {
      throw ParseError("measure line " + std::to_string(line_no) + ": trailing text '" + rest + "'");
    }
    atoms.push_back({location, weight});
  }
  try {
    return DiscreteSignedMeasure{std::move(atoms), domain};
  } catch (const DomainError& e) {
    throw ParseError(std::string("invalid measure: ") + e.what());
  }
}

inline DiscreteSignedMeasure read_measure_file(const std::string& path, MeasureDomain domain = MeasureDomain::Time) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open measure file '" + path + "'");
  return read_measure(in, domain);
}

inline void write_measure(std::ostream& out, const DiscreteSignedMeasure& mu) {
  for (const auto& a : mu.atoms()) out << format_double(a.location) << ' ' << format_double(a.weight) << '\n';
}

inline void write_moments_csv(std::ostream& out, const MomentSequence& c) {
  out << "n,c_n\n";
  for (std::size_t n = 0; n < c.values.size(); ++n) out << n << ',' << format_double(c.values[n]) << '\n';
}

}  // namespace cmono

#endif  // CMONO_MEASURE_IO_HPP
