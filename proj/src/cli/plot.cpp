#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "spectralgas/cli.hpp"

namespace spectralgas::cli {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 450.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 55.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!(lo <= hi)) lo = 0.0, hi = 1.0;
    if (hi - lo < 1e-12 * std::max(1.0, std::abs(lo))) {
      lo -= 0.5;
      hi += 0.5;
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
};

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

class Canvas {
 public:
  Canvas(Range x, Range y) : x_(x), y_(y) {}

  double px(double v) const { return kLeft + (v - x_.lo) / (x_.hi - x_.lo) * (kWidth - kLeft - kRight); }
  double py(double v) const {
    return kHeight - kBottom - (v - y_.lo) / (y_.hi - y_.lo) * (kHeight - kTop - kBottom);
  }

  std::string axes(const std::string& title, const std::string& xlabel, const std::string& ylabel) const {
    std::string s;
    s += fmt::format(R"(<rect x="{:.2f}" y="{:.2f}" width="{:.2f}" height="{:.2f}" fill="none" stroke="#333"/>)"
                     "\n",
                     kLeft, kTop, kWidth - kLeft - kRight, kHeight - kTop - kBottom);
    for (int i = 0; i <= 5; ++i) {
      const double xv = x_.lo + (x_.hi - x_.lo) * i / 5.0;
      const double yv = y_.lo + (y_.hi - y_.lo) * i / 5.0;
      s += fmt::format(R"(<line x1="{0:.2f}" y1="{1:.2f}" x2="{0:.2f}" y2="{2:.2f}" stroke="#333"/>)"
                       "\n",
                       px(xv), kHeight - kBottom, kHeight - kBottom + 5);
      s += fmt::format(R"(<text x="{:.2f}" y="{:.2f}" font-size="11" text-anchor="middle">{:.3g}</text>)"
                       "\n",
                       px(xv), kHeight - kBottom + 18, xv);
      s += fmt::format(R"(<line x1="{0:.2f}" y1="{1:.2f}" x2="{2:.2f}" y2="{1:.2f}" stroke="#333"/>)"
                       "\n",
                       kLeft - 5, py(yv), kLeft);
      s += fmt::format(R"(<text x="{:.2f}" y="{:.2f}" font-size="11" text-anchor="end">{:.3g}</text>)"
                       "\n",
                       kLeft - 8, py(yv) + 4, yv);
    }
    s += fmt::format(R"(<text x="{:.2f}" y="22" font-size="14" text-anchor="middle">{}</text>)"
                     "\n",
                     kWidth / 2, escape(title));
    s += fmt::format(R"(<text x="{:.2f}" y="{:.2f}" font-size="12" text-anchor="middle">{}</text>)"
                     "\n",
                     (kLeft + kWidth - kRight) / 2, kHeight - 12, escape(xlabel));
    s += fmt::format(
        R"svg(<text x="16" y="{0:.2f}" font-size="12" text-anchor="middle" transform="rotate(-90 16 {0:.2f})">{1}</text>)svg"
        "\n",
        (kTop + kHeight - kBottom) / 2, escape(ylabel));
    return s;
  }

  std::string polyline(const std::vector<std::pair<double, double>>& pts, const char* color) const {
    std::string s = R"(<polyline fill="none" stroke-width="1.5" stroke=")";
    s += color;
    s += R"(" points=")";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      s += fmt::format("{}{:.2f},{:.2f}", i ? " " : "", px(pts[i].first), py(pts[i].second));
    }
    s += "\"/>\n";
    return s;
  }

 private:
  Range x_;
  Range y_;
};

std::string header() {
  return fmt::format(R"(<?xml version="1.0" encoding="UTF-8"?>)"
                     "\n"
                     R"(<svg xmlns="http://www.w3.org/2000/svg" width="{0:.0f}" height="{1:.0f}" viewBox="0 0 {0:.0f} {1:.0f}" font-family="sans-serif">)"
                     "\n"
                     R"(<rect width="100%" height="100%" fill="white"/>)"
                     "\n",
                     kWidth, kHeight);
}

std::string name_of(const Table& t, std::size_t k, const char* fallback) {
  return k < t.columns.size() ? t.columns[k] : fallback;
}

}  // namespace

void emit_plot(const Table& data, PlotKind kind, const std::filesystem::path& path,
               const std::string& title) {
  if (data.rows.empty()) throw ConfigurationError("emit_plot needs a nonempty table");
  const std::size_t width = data.rows.front().size();
  for (const auto& r : data.rows) {
    if (r.size() != width) throw ConfigurationError("emit_plot needs rows of equal length");
  }
  if (kind == PlotKind::histogram && width < 2) {
    throw ConfigurationError("a histogram needs center and value columns");
  }
  if (kind == PlotKind::trajectory && (width < 3 || (width - 1) % 2 != 0)) {
    throw ConfigurationError("a trajectory needs columns t, re, im, ...");
  }

  std::string body;
  Range xr;
  Range yr;
  switch (kind) {
    case PlotKind::scatter: {
      for (const auto& r : data.rows) {
        xr.add(r[0]);
        yr.add(width > 1 ? r[1] : 0.0);
      }
      xr.finish();
      yr.finish();
      const Canvas cv(xr, yr);
      body += cv.axes(title, name_of(data, 0, "x"), name_of(data, 1, "y"));
      for (const auto& r : data.rows) {
        body += fmt::format(R"(<circle cx="{:.2f}" cy="{:.2f}" r="3.5" fill="{}"/>)"
                            "\n",
                            cv.px(r[0]), cv.py(width > 1 ? r[1] : 0.0), kPalette[0]);
      }
      break;
    }
    case PlotKind::histogram: {
      double step = std::numeric_limits<double>::infinity();
      for (std::size_t i = 1; i < data.rows.size(); ++i) {
        step = std::min(step, std::abs(data.rows[i][0] - data.rows[i - 1][0]));
      }
      if (!std::isfinite(step) || step <= 0.0) step = 1.0;
      yr.add(0.0);
      for (const auto& r : data.rows) {
        xr.add(r[0] - step / 2);
        xr.add(r[0] + step / 2);
        for (std::size_t k = 1; k < width; ++k) yr.add(r[k]);
      }
      xr.finish();
      yr.finish();
      const Canvas cv(xr, yr);
      body += cv.axes(title, name_of(data, 0, "x"), name_of(data, 1, "value"));
      for (const auto& r : data.rows) {
        const double top = cv.py(std::max(r[1], 0.0));
        body += fmt::format(
            R"(<rect x="{:.2f}" y="{:.2f}" width="{:.2f}" height="{:.2f}" fill="{}" fill-opacity="0.45" stroke="{}"/>)"
            "\n",
            cv.px(r[0] - step / 2), top, cv.px(r[0] + step / 2) - cv.px(r[0] - step / 2),
            cv.py(0.0) - top, kPalette[0], kPalette[0]);
      }
      for (std::size_t k = 2; k < width; ++k) {
        std::vector<std::pair<double, double>> pts;
        for (const auto& r : data.rows) pts.emplace_back(r[0], r[k]);
        body += cv.polyline(pts, kPalette[(k - 1) % 8]);
      }
      break;
    }
    case PlotKind::trajectory: {
      for (const auto& r : data.rows) {
        for (std::size_t k = 1; k + 1 < width; k += 2) {
          xr.add(r[k]);
          yr.add(r[k + 1]);
        }
      }
      xr.finish();
      yr.finish();
      const Canvas cv(xr, yr);
      body += cv.axes(title, "Re x", "Im x");
      for (std::size_t k = 1; k + 1 < width; k += 2) {
        std::vector<std::pair<double, double>> pts;
        for (const auto& r : data.rows) pts.emplace_back(r[k], r[k + 1]);
        const char* color = kPalette[(k / 2) % 8];
        body += cv.polyline(pts, color);
        body += fmt::format(R"(<circle cx="{:.2f}" cy="{:.2f}" r="3" fill="{}"/>)"
                            "\n",
                            cv.px(pts.back().first), cv.py(pts.back().second), color);
      }
      break;
    }
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << header() << body << "</svg>\n";
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace spectralgas::cli
