#include "tdoa/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <string>

#include "tdoa/errors.hpp"

namespace tdoa {

namespace {

constexpr char kHeader[] = "iteration,x,y,cost,position_error";

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& field, int line_no) {
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (end == field.c_str() || *end != '\0') {
    throw IoError("bad numeric field \"" + field + "\" on line " +
                  std::to_string(line_no));
  }
  return v;
}

}  // namespace

void emit_csv(const ConvergenceTrace& trace, std::ostream& sink) {
  sink << kHeader << '\n';
  for (const TraceRecord& r : trace.records) {
    sink << r.iteration << ',' << format_double(r.position.x) << ','
         << format_double(r.position.y) << ',' << format_double(r.cost) << ','
         << format_double(r.position_error) << '\n';
  }
  if (!sink) throw IoError("failed to write trace CSV");
}

std::vector<TraceRecord> parse_trace_csv(std::istream& source) {
  std::string line;
  if (!std::getline(source, line) || line != kHeader) {
    throw IoError("missing or unexpected trace CSV header");
  }
  std::vector<TraceRecord> records;
  int line_no = 1;
  while (std::getline(source, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::string fields[5];
    std::size_t start = 0;
    int count = 0;
    for (std::size_t pos = 0; pos <= line.size(); ++pos) {
      if (pos == line.size() || line[pos] == ',') {
        if (count >= 5) {
          throw IoError("too many fields on line " + std::to_string(line_no));
        }
        fields[count++] = line.substr(start, pos - start);
        start = pos + 1;
      }
    }
    if (count != 5) {
      throw IoError("expected 5 fields on line " + std::to_string(line_no));
    }
    TraceRecord r;
    r.iteration = static_cast<long>(parse_double(fields[0], line_no));
    r.position.x = parse_double(fields[1], line_no);
    r.position.y = parse_double(fields[2], line_no);
    r.cost = parse_double(fields[3], line_no);
    r.position_error = parse_double(fields[4], line_no);
    records.push_back(r);
  }
  return records;
}

}  // namespace tdoa
