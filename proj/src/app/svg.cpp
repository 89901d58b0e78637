#include "mildns/app/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "mildns/errors.hpp"

namespace mildns::app {

namespace {

constexpr double kWidth = 640.0, kHeight = 400.0;
constexpr double kLeft = 70.0, kRight = 20.0, kTop = 40.0, kBottom = 50.0;
const char* const kColors[] = {"#b2182b", "#ef8a62", "#67a9cf", "#2166ac"};

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  bool empty() const { return !(lo <= hi); }
  void pad() {
    if (empty()) {
      lo = 0.0;
      hi = 1.0;
    } else if (hi == lo) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
};

}  // namespace

std::string render_svg(const std::string& title, const Series& main, const std::vector<Series>& overlays) {
  std::vector<const Series*> all{&main};
  for (const Series& s : overlays) all.push_back(&s);

  bool log_y = false;
  {
    bool any = false, positive = true;
    for (const Series* s : all)
      for (std::size_t i = 0; i < s->x.size(); ++i)
        if (std::isfinite(s->x[i]) && std::isfinite(s->y[i])) {
          any = true;
          positive = positive && s->y[i] > 0.0;
        }
    log_y = any && positive;
  }
  auto ty = [&](double v) { return log_y ? std::log10(v) : v; };

  Range xr, yr;
  for (const Series* s : all)
    for (std::size_t i = 0; i < s->x.size(); ++i)
      if (std::isfinite(s->x[i]) && std::isfinite(s->y[i])) {
        xr.add(s->x[i]);
        yr.add(ty(s->y[i]));
      }
  xr.pad();
  yr.pad();

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + pw * (x - xr.lo) / (xr.hi - xr.lo); };
  auto py = [&](double y) { return kTop + ph * (1.0 - (ty(y) - yr.lo) / (yr.hi - yr.lo)); };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" viewBox=\"0 0 640 400\">\n";
  svg += "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
  svg += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" +
         escape(title) + "</text>\n";
  svg += "<g stroke=\"black\" fill=\"none\">\n";
  svg += "<line x1=\"" + fmt("%.2f", kLeft) + "\" y1=\"" + fmt("%.2f", kTop + ph) + "\" x2=\"" +
         fmt("%.2f", kLeft + pw) + "\" y2=\"" + fmt("%.2f", kTop + ph) + "\"/>\n";
  svg += "<line x1=\"" + fmt("%.2f", kLeft) + "\" y1=\"" + fmt("%.2f", kTop) + "\" x2=\"" + fmt("%.2f", kLeft) +
         "\" y2=\"" + fmt("%.2f", kTop + ph) + "\"/>\n";
  svg += "</g>\n";

  svg += "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = xr.lo + (xr.hi - xr.lo) * k / 4.0;
    const double yv = yr.lo + (yr.hi - yr.lo) * k / 4.0;
    const double yp = kTop + ph * (1.0 - k / 4.0);
    svg += "<text x=\"" + fmt("%.2f", px(xv)) + "\" y=\"" + fmt("%.2f", kTop + ph + 16) +
           "\" text-anchor=\"middle\">" + fmt("%.3g", xv) + "</text>\n";
    svg += "<text x=\"" + fmt("%.2f", kLeft - 6) + "\" y=\"" + fmt("%.2f", yp + 4) + "\" text-anchor=\"end\">" +
           fmt("%.3g", log_y ? std::pow(10.0, yv) : yv) + "</text>\n";
  }
  svg += "<text x=\"" + fmt("%.2f", kLeft + pw / 2) + "\" y=\"" + fmt("%.2f", kHeight - 10) +
         "\" text-anchor=\"middle\">t</text>\n";
  svg += "</g>\n";

  for (std::size_t k = 0; k < all.size(); ++k) {
    const Series& s = *all[k];
    std::string points;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]) || (log_y && !(s.y[i] > 0.0))) continue;
      points += (points.empty() ? "" : " ") + fmt("%.2f", px(s.x[i])) + "," + fmt("%.2f", py(s.y[i]));
    }
    const char* color = k == 0 ? "black" : kColors[(k - 1) % 4];
    const std::string dash = k == 0 ? "" : " stroke-dasharray=\"6 3\"";
    if (!points.empty())
      svg += "<polyline class=\"" + std::string(k == 0 ? "series" : "threshold") + "\" fill=\"none\" stroke=\"" +
             color + "\" stroke-width=\"1.5\"" + dash + " points=\"" + points + "\"/>\n";
    svg += "<text x=\"" + fmt("%.2f", kLeft + 10) + "\" y=\"" + fmt("%.2f", kTop + 14 + 14.0 * k) +
           "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" + color + "\">" + escape(s.label) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

std::vector<std::string> plot_norms(const CsvTable& table, const std::string& out_dir) {
  const std::size_t tcol = table.column("t");
  if (tcol == table.header.size()) throw ValidationError("norms table has no 't' column");
  auto column = [&](std::size_t c) {
    Series s;
    s.label = table.header[c];
    for (const auto& row : table.rows) {
      s.x.push_back(row[tcol]);
      s.y.push_back(row[c]);
    }
    return s;
  };
  std::vector<Series> thresholds;
  for (std::size_t c = 0; c < table.header.size(); ++c)
    if (table.header[c].rfind("blowup_threshold_", 0) == 0) thresholds.push_back(column(c));

  std::vector<std::string> written;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    const std::string& name = table.header[c];
    if (c == tcol || name.rfind("blowup_threshold_", 0) == 0) continue;
    const std::string file = name + ".svg";
    std::ofstream out(out_dir + "/" + file, std::ios::binary);
    if (!out) throw ValidationError("cannot write '" + out_dir + "/" + file + "'");
    out << render_svg(name + " vs t", column(c), thresholds);
    written.push_back(file);
  }
  return written;
}

}  // namespace mildns::app
