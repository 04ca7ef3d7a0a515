#include "h2cem/report/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace h2cem::report {

namespace {

constexpr double kWidth = 720, kHeight = 420;
constexpr double kLeft = 80, kRight = 160, kTop = 40, kBottom = 90;

const char* const kPalette[] = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
                                "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", std::abs(v) < 0.005 ? 0.0 : v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

// Round step for about five ticks over [lo, hi].
double tick_step(double span) {
  if (!(span > 0)) return 1;
  const double raw = span / 5;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (raw <= m * mag) return m * mag;
  return 10 * mag;
}

struct Frame {
  double lo, hi;
  double y(double v) const {
    const double plot = kHeight - kTop - kBottom;
    return kTop + plot * (hi - v) / (hi - lo);
  }
};

void header(std::ostringstream& out, const std::string& title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth) << "\" height=\""
      << num(kHeight) << "\" viewBox=\"0 0 " << num(kWidth) << ' ' << num(kHeight) << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << num(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << escape(title) << "</text>\n";
}

void axes(std::ostringstream& out, const Frame& f, const std::string& label) {
  const double step = tick_step(f.hi - f.lo);
  for (double v = std::ceil(f.lo / step) * step; v <= f.hi + 1e-9 * step; v += step) {
    out << "<line x1=\"" << num(kLeft) << "\" x2=\"" << num(kWidth - kRight) << "\" y1=\""
        << num(f.y(v)) << "\" y2=\"" << num(f.y(v)) << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(f.y(v) + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << num(v) << "</text>\n";
  }
  out << "<line x1=\"" << num(kLeft) << "\" x2=\"" << num(kWidth - kRight) << "\" y1=\""
      << num(f.y(0)) << "\" y2=\"" << num(f.y(0)) << "\" stroke=\"black\"/>\n";
  out << "<text transform=\"translate(18," << num((kHeight - kBottom + kTop) / 2)
      << ") rotate(-90)\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
      << escape(label) << "</text>\n";
}

void category_labels(std::ostringstream& out, const std::vector<std::string>& cats, double slot) {
  for (std::size_t i = 0; i < cats.size(); ++i) {
    const double x = kLeft + slot * (double(i) + 0.5);
    const double y = kHeight - kBottom + 14;
    out << "<text transform=\"translate(" << num(x) << ',' << num(y)
        << ") rotate(45)\" font-family=\"sans-serif\" font-size=\"11\">" << escape(cats[i])
        << "</text>\n";
  }
}

}  // namespace

std::string bar_chart(const std::string& title, const std::vector<std::string>& categories,
                      const std::vector<BarSeries>& series, const std::string& y_label) {
  double lo = 0, hi = 0;
  for (std::size_t i = 0; i < categories.size(); ++i) {
    double pos = 0, neg = 0;
    for (const auto& s : series) {
      const double v = i < s.values.size() ? s.values[i] : 0.0;
      (v >= 0 ? pos : neg) += v;
    }
    hi = std::max(hi, pos);
    lo = std::min(lo, neg);
  }
  if (hi == lo) hi = lo + 1;
  const double pad = 0.05 * (hi - lo);
  const Frame f{lo < 0 ? lo - pad : 0.0, hi + pad};

  std::ostringstream out;
  header(out, title);
  axes(out, f, y_label);
  const double slot = (kWidth - kLeft - kRight) / double(std::max<std::size_t>(1, categories.size()));
  const double bar = slot * 0.6;
  for (std::size_t i = 0; i < categories.size(); ++i) {
    double pos = 0, neg = 0;
    const double x = kLeft + slot * double(i) + (slot - bar) / 2;
    for (std::size_t k = 0; k < series.size(); ++k) {
      const double v = i < series[k].values.size() ? series[k].values[i] : 0.0;
      if (v == 0) continue;
      double top, bottom;
      if (v > 0) {
        bottom = pos;
        pos += v;
        top = pos;
      } else {
        top = neg;
        neg += v;
        bottom = neg;
      }
      out << "<rect x=\"" << num(x) << "\" y=\"" << num(f.y(top)) << "\" width=\"" << num(bar)
          << "\" height=\"" << num(f.y(bottom) - f.y(top)) << "\" fill=\""
          << kPalette[k % std::size(kPalette)] << "\"/>\n";
    }
  }
  category_labels(out, categories, slot);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const double y = kTop + 18.0 * double(k);
    out << "<rect x=\"" << num(kWidth - kRight + 12) << "\" y=\"" << num(y) << "\" width=\"12\" "
        << "height=\"12\" fill=\"" << kPalette[k % std::size(kPalette)] << "\"/>\n";
    out << "<text x=\"" << num(kWidth - kRight + 30) << "\" y=\"" << num(y + 10)
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(series[k].name)
        << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string histogram_chart(const std::string& title, const std::vector<std::string>& bins,
                            const std::vector<double>& counts, const std::string& x_label) {
  double hi = 0;
  for (double c : counts) hi = std::max(hi, c);
  if (hi <= 0) hi = 1;
  const Frame f{0, hi * 1.05};
  std::ostringstream out;
  header(out, title);
  axes(out, f, "hours");
  const double slot = (kWidth - kLeft - kRight) / double(std::max<std::size_t>(1, bins.size()));
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double x = kLeft + slot * double(i);
    out << "<rect x=\"" << num(x + 1) << "\" y=\"" << num(f.y(counts[i])) << "\" width=\""
        << num(std::max(0.0, slot - 2)) << "\" height=\"" << num(f.y(0) - f.y(counts[i]))
        << "\" fill=\"" << kPalette[0] << "\"/>\n";
  }
  category_labels(out, bins, slot);
  out << "<text x=\"" << num((kLeft + kWidth - kRight) / 2) << "\" y=\"" << num(kHeight - 8)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
      << escape(x_label) << "</text>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace h2cem::report
