#include "pendctl/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <vector>

namespace pendctl {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

struct Panel {
  double x0, y0, x1, y1;  // plot area in viewport pixels, y grows downward
};

void draw_panel(std::string& out, const Panel& p, const std::vector<TrajectoryRow>& rows,
                double TrajectoryRow::* field, const std::string& label,
                const std::string& stroke) {
  double lo = rows.front().*field, hi = lo;
  for (const TrajectoryRow& r : rows) {
    lo = std::min(lo, r.*field);
    hi = std::max(hi, r.*field);
  }
  if (hi - lo < 1e-12) {  // flat trace: open up a band around the value
    lo -= 1.0;
    hi += 1.0;
  }
  const double t0 = rows.front().t, t1 = rows.back().t;
  const double t_span = t1 - t0 > 0.0 ? t1 - t0 : 1.0;

  const auto map_x = [&](double t) { return p.x0 + (t - t0) / t_span * (p.x1 - p.x0); };
  const auto map_y = [&](double v) { return p.y1 - (v - lo) / (hi - lo) * (p.y1 - p.y0); };

  out += "<rect x=\"" + num(p.x0) + "\" y=\"" + num(p.y0) + "\" width=\"" +
         num(p.x1 - p.x0) + "\" height=\"" + num(p.y1 - p.y0) +
         "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";

  // zero line when it falls inside the range
  if (lo < 0.0 && hi > 0.0) {
    const double yz = map_y(0.0);
    out += "<line x1=\"" + num(p.x0) + "\" y1=\"" + num(yz) + "\" x2=\"" + num(p.x1) +
           "\" y2=\"" + num(yz) + "\" stroke=\"#bbb\" stroke-width=\"1\" stroke-dasharray=\"4 4\"/>\n";
  }

  const std::size_t max_points = 2000;
  const std::size_t stride = std::max<std::size_t>(1, rows.size() / max_points);
  out += "<polyline fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < rows.size(); i += stride) {
    out += num(map_x(rows[i].t)) + "," + num(map_y(rows[i].*field)) + " ";
  }
  if ((rows.size() - 1) % stride != 0) {  // always include the final sample
    out += num(map_x(rows.back().t)) + "," + num(map_y(rows.back().*field));
  }
  out += "\"/>\n";

  out += "<text x=\"" + num(p.x0) + "\" y=\"" + num(p.y0 - 8) +
         "\" font-family=\"sans-serif\" font-size=\"14\" fill=\"#222\">" + label + "</text>\n";
  out += "<text x=\"" + num(p.x0 - 6) + "\" y=\"" + num(p.y0 + 12) +
         "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#555\" text-anchor=\"end\">" +
         short_num(hi) + "</text>\n";
  out += "<text x=\"" + num(p.x0 - 6) + "\" y=\"" + num(p.y1) +
         "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#555\" text-anchor=\"end\">" +
         short_num(lo) + "</text>\n";
  out += "<text x=\"" + num(p.x0) + "\" y=\"" + num(p.y1 + 16) +
         "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#555\">" + short_num(t0) +
         " s</text>\n";
  out += "<text x=\"" + num(p.x1) + "\" y=\"" + num(p.y1 + 16) +
         "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#555\" text-anchor=\"end\">" +
         short_num(t1) + " s</text>\n";
}

}  // namespace

std::string render_trajectory_svg(const TrajectoryRecord& tr) {
  if (tr.rows.empty()) throw std::invalid_argument("cannot plot an empty trajectory");

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" "
         "width=\"800\" height=\"600\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"#ffffff\"/>\n";

  draw_panel(out, Panel{70, 40, 770, 280}, tr.rows, &TrajectoryRow::theta,
             "pendulum angle (rad)", "#1f77b4");
  draw_panel(out, Panel{70, 340, 770, 580}, tr.rows, &TrajectoryRow::u,
             "control force (N)", "#d62728");

  if (tr.blew_up) {
    out += "<text x=\"400\" y=\"308\" font-family=\"sans-serif\" font-size=\"13\" "
           "fill=\"#c00\" text-anchor=\"middle\">simulation diverged; record truncated</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace pendctl
