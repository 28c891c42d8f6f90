#include "sdsim/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sdsim/errors.hpp"

namespace sdsim {
namespace {

constexpr double kWidth = 960.0;
constexpr double kHeight = 540.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 24.0;
constexpr double kMarginTop = 44.0;
constexpr double kMarginBottom = 48.0;

// Polylines are thinned to at most this many segments; the plot is for
// inspection, not for recovering exact data (the CSV holds that).
constexpr std::size_t kMaxPoints = 2000;

const char* const kPalette[] = {
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string fixed2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    // Tick values come from lo + i*step, so they carry float noise
    // (0.30000000000000004); ten significant digits round it away.
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

// Heckbert's "nice numbers": pick 1, 2, or 5 times a power of ten.
double nice_num(double x, bool round_result) {
    double expv = std::floor(std::log10(x));
    double f = x / std::pow(10.0, expv);
    double nf;
    if (round_result) {
        nf = f < 1.5 ? 1.0 : f < 3.0 ? 2.0 : f < 7.0 ? 5.0 : 10.0;
    } else {
        nf = f <= 1.0 ? 1.0 : f <= 2.0 ? 2.0 : f <= 5.0 ? 5.0 : 10.0;
    }
    return nf * std::pow(10.0, expv);
}

struct Axis {
    double lo = 0.0;
    double hi = 1.0;
    double step = 0.2;
};

Axis loose_ticks(double lo, double hi) {
    if (lo == hi) {
        lo -= 1.0;
        hi += 1.0;
    }
    const int target = 6;
    double range = nice_num(hi - lo, false);
    double step = nice_num(range / (target - 1), true);
    Axis a;
    a.step = step;
    a.lo = std::floor(lo / step) * step;
    a.hi = std::ceil(hi / step) * step;
    return a;
}

}  // namespace

std::string render_chart(const std::vector<Series>& series, const std::string& title) {
    if (series.empty()) throw EmptySeries("chart needs at least one series");
    for (const Series& s : series) {
        if (s.x.empty() || s.x.size() != s.y.size()) {
            throw EmptySeries("series \"" + s.label + "\" needs matching nonempty x and y");
        }
    }

    double xmin = series[0].x.front(), xmax = xmin;
    double ymin = series[0].y.front(), ymax = ymin;
    for (const Series& s : series) {
        for (double v : s.x) {
            xmin = std::min(xmin, v);
            xmax = std::max(xmax, v);
        }
        for (double v : s.y) {
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    }
    Axis xa = loose_ticks(xmin, xmax);
    Axis ya = loose_ticks(ymin, ymax);

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    auto px = [&](double x) { return kMarginLeft + (x - xa.lo) / (xa.hi - xa.lo) * plot_w; };
    auto py = [&](double y) { return kHeight - kMarginBottom - (y - ya.lo) / (ya.hi - ya.lo) * plot_h; };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << (int)kWidth
        << "\" height=\"" << (int)kHeight << "\" viewBox=\"0 0 " << (int)kWidth
        << " " << (int)kHeight << "\">\n";
    out << "<rect width=\"" << (int)kWidth << "\" height=\"" << (int)kHeight
        << "\" fill=\"#ffffff\"/>\n";
    out << "<text x=\"" << fixed2(kWidth / 2)
        << "\" y=\"26\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\" "
           "fill=\"#202020\">"
        << xml_escape(title) << "</text>\n";

    // Gridlines and tick labels. The half-step slack absorbs accumulated
    // rounding in lo + i*step so the last tick is never dropped.
    out << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#404040\">\n";
    for (double v = xa.lo; v <= xa.hi + xa.step / 2; v += xa.step) {
        double gx = px(v);
        out << "<line x1=\"" << fixed2(gx) << "\" y1=\"" << fixed2(kMarginTop)
            << "\" x2=\"" << fixed2(gx) << "\" y2=\"" << fixed2(kHeight - kMarginBottom)
            << "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
        out << "<text x=\"" << fixed2(gx) << "\" y=\"" << fixed2(kHeight - kMarginBottom + 18)
            << "\" text-anchor=\"middle\">" << tick_label(v) << "</text>\n";
    }
    for (double v = ya.lo; v <= ya.hi + ya.step / 2; v += ya.step) {
        double gy = py(v);
        out << "<line x1=\"" << fixed2(kMarginLeft) << "\" y1=\"" << fixed2(gy)
            << "\" x2=\"" << fixed2(kWidth - kMarginRight) << "\" y2=\"" << fixed2(gy)
            << "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
        out << "<text x=\"" << fixed2(kMarginLeft - 8) << "\" y=\"" << fixed2(gy + 4)
            << "\" text-anchor=\"end\">" << tick_label(v) << "</text>\n";
    }
    out << "</g>\n";

    out << "<rect x=\"" << fixed2(kMarginLeft) << "\" y=\"" << fixed2(kMarginTop)
        << "\" width=\"" << fixed2(plot_w) << "\" height=\"" << fixed2(plot_h)
        << "\" fill=\"none\" stroke=\"#808080\" stroke-width=\"1\"/>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        const Series& s = series[i];
        const char* color = kPalette[i % kPaletteSize];
        std::size_t n = s.x.size();
        std::size_t stride = n > kMaxPoints ? (n + kMaxPoints - 1) / kMaxPoints : 1;
        out << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.5\" points=\"";
        bool first = true;
        for (std::size_t k = 0; k < n; k += stride) {
            if (!first) out << ' ';
            first = false;
            out << fixed2(px(s.x[k])) << ',' << fixed2(py(s.y[k]));
        }
        if ((n - 1) % stride != 0) {
            out << ' ' << fixed2(px(s.x[n - 1])) << ',' << fixed2(py(s.y[n - 1]));
        }
        out << "\"/>\n";
    }

    out << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#202020\">\n";
    double lx = kMarginLeft + 12;
    double ly = kMarginTop + 16;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = kPalette[i % kPaletteSize];
        out << "<line x1=\"" << fixed2(lx) << "\" y1=\"" << fixed2(ly - 4) << "\" x2=\""
            << fixed2(lx + 22) << "\" y2=\"" << fixed2(ly - 4) << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << fixed2(lx + 28) << "\" y=\"" << fixed2(ly) << "\">"
            << xml_escape(series[i].label) << "</text>\n";
        ly += 17;
    }
    out << "</g>\n";
    out << "</svg>\n";
    return out.str();
}

void write_chart(const std::vector<Series>& series, const std::string& title,
                 const std::string& path) {
    std::string body = render_chart(series, title);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!out) throw IoError("failed writing " + path);
}

}  // namespace sdsim
