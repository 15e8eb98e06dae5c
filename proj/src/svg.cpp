#include "tdoa/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

#include "tdoa/errors.hpp"

namespace tdoa {

namespace {

constexpr double kWidth = 760.0;
constexpr double kHeight = 520.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 60.0;

const char* kPalette[] = {"#d62728", "#ff7f0e", "#17becf", "#e377c2",
                          "#2ca02c", "#9467bd", "#8c564b", "#7f7f7f"};

const char* series_color(const std::string& algorithm, std::size_t index) {
  if (algorithm == "SGD") return kPalette[0];
  if (algorithm == "SGD+M") return kPalette[1];
  if (algorithm == "RMSProp") return kPalette[2];
  if (algorithm == "Adam") return kPalette[3];
  if (algorithm == "RMSProp+AF") return kPalette[4];
  return kPalette[index % (sizeof(kPalette) / sizeof(kPalette[0]))];
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

void open_document(std::ostream& s) {
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << num(kWidth)
    << " " << num(kHeight) << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
    << "<rect width=\"" << num(kWidth) << "\" height=\"" << num(kHeight)
    << "\" fill=\"white\"/>\n";
}

void draw_legend(std::ostream& s, const std::vector<ConvergenceTrace>& traces) {
  double y = kTop + 8.0;
  const double x = kWidth - kRight - 150.0;
  for (std::size_t t = 0; t < traces.size(); ++t) {
    const char* color = series_color(traces[t].algorithm, t);
    s << "<line x1=\"" << num(x) << "\" y1=\"" << num(y) << "\" x2=\""
      << num(x + 24.0) << "\" y2=\"" << num(y) << "\" stroke=\"" << color
      << "\" stroke-width=\"2\"/>\n"
      << "<text x=\"" << num(x + 30.0) << "\" y=\"" << num(y + 4.0) << "\">"
      << traces[t].algorithm << "</text>\n";
    y += 18.0;
  }
}

void emit_convergence(const std::vector<ConvergenceTrace>& traces,
                      std::ostream& s) {
  long max_iter = 1;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& trace : traces) {
    for (const auto& r : trace.records) {
      max_iter = std::max(max_iter, r.iteration);
      if (r.cost > 0.0) {
        lo = std::min(lo, r.cost);
        hi = std::max(hi, r.cost);
      }
    }
  }
  double dec_lo = std::isfinite(lo) ? std::floor(std::log10(lo)) : -1.0;
  double dec_hi = std::isfinite(hi) ? std::ceil(std::log10(hi)) : 1.0;
  if (dec_hi - dec_lo < 1.0) {
    dec_lo -= 1.0;
    dec_hi += 1.0;
  }

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const auto sx = [&](double k) { return kLeft + plot_w * k / max_iter; };
  const auto sy = [&](double j) {
    const double d = std::log10(std::max(j, std::pow(10.0, dec_lo)));
    return kTop + plot_h * (dec_hi - d) / (dec_hi - dec_lo);
  };

  open_document(s);
  s << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\""
    << num(plot_w) << "\" height=\"" << num(plot_h)
    << "\" fill=\"none\" stroke=\"black\"/>\n";

  const int decades = static_cast<int>(dec_hi - dec_lo);
  const int dec_step = std::max(1, decades / 8);
  for (int d = 0; d <= decades; d += dec_step) {
    const double y = kTop + plot_h * d / static_cast<double>(decades);
    s << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(y) << "\" x2=\""
      << num(kLeft + plot_w) << "\" y2=\"" << num(y)
      << "\" stroke=\"#dddddd\"/>\n"
      << "<text x=\"" << num(kLeft - 8.0) << "\" y=\"" << num(y + 4.0)
      << "\" text-anchor=\"end\">1e" << static_cast<int>(dec_hi) - d
      << "</text>\n";
  }
  for (int t = 0; t <= 5; ++t) {
    const double k = max_iter * t / 5.0;
    const double x = sx(k);
    s << "<line x1=\"" << num(x) << "\" y1=\"" << num(kTop + plot_h)
      << "\" x2=\"" << num(x) << "\" y2=\"" << num(kTop + plot_h + 5.0)
      << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << num(x) << "\" y=\"" << num(kTop + plot_h + 20.0)
      << "\" text-anchor=\"middle\">" << static_cast<long>(k) << "</text>\n";
  }
  s << "<text x=\"" << num(kLeft + plot_w / 2.0) << "\" y=\""
    << num(kHeight - 15.0)
    << "\" text-anchor=\"middle\">Number of iterations</text>\n"
    << "<text x=\"18\" y=\"" << num(kTop + plot_h / 2.0)
    << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
    << num(kTop + plot_h / 2.0) << ")\">Cost function J</text>\n";

  for (std::size_t t = 0; t < traces.size(); ++t) {
    if (traces[t].records.empty()) continue;
    s << "<polyline fill=\"none\" stroke=\""
      << series_color(traces[t].algorithm, t) << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& r : traces[t].records) {
      s << num(sx(static_cast<double>(r.iteration))) << "," << num(sy(r.cost))
        << " ";
    }
    s << "\"/>\n";
  }
  draw_legend(s, traces);
  s << "</svg>\n";
}

void emit_trajectory(const std::vector<ConvergenceTrace>& traces,
                     const Scenario& scenario, std::ostream& s) {
  double min_x = scenario.true_position.x;
  double max_x = scenario.true_position.x;
  double min_y = scenario.true_position.y;
  double max_y = scenario.true_position.y;
  const auto grow = [&](Vec2 p) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  };
  for (const Vec2& p : scenario.receivers.positions) grow(p);
  for (const auto& trace : traces) {
    for (const auto& r : trace.records) grow(r.position);
  }
  const double pad_x = std::max(1.0, 0.06 * (max_x - min_x));
  const double pad_y = std::max(1.0, 0.06 * (max_y - min_y));
  min_x -= pad_x;
  max_x += pad_x;
  min_y -= pad_y;
  max_y += pad_y;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const auto sx = [&](double x) {
    return kLeft + plot_w * (x - min_x) / (max_x - min_x);
  };
  const auto sy = [&](double y) {
    return kTop + plot_h * (max_y - y) / (max_y - min_y);
  };

  open_document(s);
  s << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\""
    << num(plot_w) << "\" height=\"" << num(plot_h)
    << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (std::size_t t = 0; t < traces.size(); ++t) {
    if (traces[t].records.empty()) continue;
    const char* color = series_color(traces[t].algorithm, t);
    if (traces[t].records.size() > 1) {
      s << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.2\" points=\"";
      for (const auto& r : traces[t].records) {
        s << num(sx(r.position.x)) << "," << num(sy(r.position.y)) << " ";
      }
      s << "\"/>\n";
    }
    const Vec2 start = traces[t].records.front().position;
    const Vec2 end = traces[t].records.back().position;
    s << "<circle cx=\"" << num(sx(start.x)) << "\" cy=\"" << num(sy(start.y))
      << "\" r=\"3\" fill=\"" << color << "\"/>\n"
      << "<circle cx=\"" << num(sx(end.x)) << "\" cy=\"" << num(sy(end.y))
      << "\" r=\"4\" fill=\"none\" stroke=\"" << color << "\"/>\n";
  }

  for (std::size_t a = 0; a < scenario.receivers.positions.size(); ++a) {
    const Vec2 p = scenario.receivers.positions[a];
    s << "<rect x=\"" << num(sx(p.x) - 4.0) << "\" y=\"" << num(sy(p.y) - 4.0)
      << "\" width=\"8\" height=\"8\" fill=\"black\"/>\n"
      << "<text x=\"" << num(sx(p.x) + 7.0) << "\" y=\"" << num(sy(p.y) + 4.0)
      << "\">R" << a + 1 << "</text>\n";
  }
  const Vec2 tp = scenario.true_position;
  s << "<path d=\"M " << num(sx(tp.x) - 6.0) << " " << num(sy(tp.y) - 6.0)
    << " L " << num(sx(tp.x) + 6.0) << " " << num(sy(tp.y) + 6.0) << " M "
    << num(sx(tp.x) - 6.0) << " " << num(sy(tp.y) + 6.0) << " L "
    << num(sx(tp.x) + 6.0) << " " << num(sy(tp.y) - 6.0)
    << "\" stroke=\"black\" stroke-width=\"2\"/>\n"
    << "<text x=\"" << num(sx(tp.x) + 9.0) << "\" y=\"" << num(sy(tp.y) - 9.0)
    << "\">transmitter</text>\n"
    << "<text x=\"" << num(kLeft + plot_w / 2.0) << "\" y=\""
    << num(kHeight - 15.0) << "\" text-anchor=\"middle\">x [m]</text>\n"
    << "<text x=\"18\" y=\"" << num(kTop + plot_h / 2.0)
    << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
    << num(kTop + plot_h / 2.0) << ")\">y [m]</text>\n";
  draw_legend(s, traces);
  s << "</svg>\n";
}

}  // namespace

void emit_svg(const std::vector<ConvergenceTrace>& traces, PlotKind kind,
              std::ostream& sink, const Scenario* scenario) {
  if (traces.empty()) {
    throw InvalidArgumentError("cannot plot an empty trace list");
  }
  if (kind == PlotKind::trajectory) {
    if (scenario == nullptr) {
      throw InvalidArgumentError("trajectory plot needs the scenario geometry");
    }
    emit_trajectory(traces, *scenario, sink);
  } else {
    emit_convergence(traces, sink);
  }
  if (!sink) throw IoError("failed to write SVG");
}

}  // namespace tdoa
