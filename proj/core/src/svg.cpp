#include "rmgd/svg.hpp"

#include "rmgd/errors.hpp"
#include "rmgd/numeric_text.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace rmgd {

namespace {

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
constexpr int kPaletteSize = 10;

struct Axis {
    bool log = false;
    double lo = 0.0;
    double hi = 1.0;
    // data value -> [0, 1]
    double unit(double v) const {
        const double a = log ? std::log10(v) : v;
        const double l = log ? std::log10(lo) : lo;
        const double h = log ? std::log10(hi) : hi;
        if (h == l) {
            return 0.5;
        }
        return (a - l) / (h - l);
    }
};

std::string trim_number(double v) {
    // tick labels: prefer short fixed form, fall back to scientific
    if (v != 0.0 && (std::abs(v) >= 1e5 || std::abs(v) < 1e-3)) {
        const int e = static_cast<int>(std::floor(std::log10(std::abs(v)) + 1e-9));
        const double mant = v / std::pow(10.0, e);
        std::ostringstream os;
        if (std::abs(mant - 1.0) < 1e-9) {
            os << "1e" << e;
        } else {
            os << format_double(mant) << "e" << e;
        }
        return os.str();
    }
    return format_double(v);
}

std::vector<double> linear_ticks(double lo, double hi, int target) {
    std::vector<double> ticks;
    if (!(hi > lo)) {
        return {lo};
    }
    const double raw = (hi - lo) / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (mag * m >= raw) {
            step = mag * m;
            break;
        }
    }
    const double first = std::ceil(lo / step) * step;
    for (double t = first; t <= hi + 0.5 * step; t += step) {
        ticks.push_back(t);
    }
    return ticks;
}

std::vector<double> log_ticks(double lo, double hi) {
    std::vector<double> ticks;
    const int e0 = static_cast<int>(std::ceil(std::log10(lo) - 1e-9));
    const int e1 = static_cast<int>(std::floor(std::log10(hi) + 1e-9));
    int stride = 1;
    while ((e1 - e0) / stride > 12) {
        ++stride;
    }
    for (int e = e0; e <= e1; e += stride) {
        ticks.push_back(std::pow(10.0, e));
    }
    if (ticks.empty()) {
        ticks.push_back(lo);
    }
    return ticks;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

} // namespace

void write_svg_chart(std::ostream& out, const std::vector<SvgSeries>& series,
                     const SvgChartOptions& opt) {
    const double margin_left = 80, margin_right = 190, margin_top = 42, margin_bot = 58;
    const double plot_w = opt.width - margin_left - margin_right;
    const double plot_h = opt.height - margin_top - margin_bot;

    // collect plottable points and ranges
    Axis xa{opt.log_x}, ya{opt.log_y};
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if ((opt.log_x && !(s.x[i] > 0.0)) || (opt.log_y && !(s.y[i] > 0.0))) {
                continue;
            }
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    }
    if (!(xmin <= xmax)) {
        xmin = opt.log_x ? 1.0 : 0.0;
        xmax = opt.log_x ? 10.0 : 1.0;
    }
    if (!(ymin <= ymax)) {
        ymin = opt.log_y ? 1.0 : 0.0;
        ymax = opt.log_y ? 10.0 : 1.0;
    }
    if (xmin == xmax) {
        xmax = opt.log_x ? xmax * 10.0 : xmax + 1.0;
    }
    if (ymin == ymax) {
        ymax = opt.log_y ? ymax * 10.0 : ymax + 1.0;
    }
    xa.lo = xmin;
    xa.hi = xmax;
    ya.lo = ymin;
    ya.hi = ymax;

    const auto px = [&](double v) { return margin_left + xa.unit(v) * plot_w; };
    const auto py = [&](double v) { return margin_top + (1.0 - ya.unit(v)) * plot_h; };

    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << opt.width
        << "' height='" << opt.height << "' viewBox='0 0 " << opt.width << " "
        << opt.height << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    if (!opt.title.empty()) {
        out << "<text x='" << margin_left + plot_w / 2
            << "' y='24' text-anchor='middle' font-family='sans-serif' "
               "font-size='16'>"
            << escape(opt.title) << "</text>\n";
    }

    // frame
    out << "<rect x='" << margin_left << "' y='" << margin_top << "' width='" << plot_w
        << "' height='" << plot_h << "' fill='none' stroke='black' stroke-width='1'/>\n";

    // ticks
    const auto xticks = opt.log_x ? log_ticks(xa.lo, xa.hi) : linear_ticks(xa.lo, xa.hi, 6);
    for (double t : xticks) {
        const double X = px(t);
        out << "<line x1='" << X << "' y1='" << margin_top + plot_h << "' x2='" << X
            << "' y2='" << margin_top + plot_h + 5 << "' stroke='black'/>\n";
        out << "<text x='" << X << "' y='" << margin_top + plot_h + 19
            << "' text-anchor='middle' font-family='sans-serif' font-size='11'>"
            << trim_number(t) << "</text>\n";
    }
    const auto yticks = opt.log_y ? log_ticks(ya.lo, ya.hi) : linear_ticks(ya.lo, ya.hi, 6);
    for (double t : yticks) {
        const double Y = py(t);
        out << "<line x1='" << margin_left - 5 << "' y1='" << Y << "' x2='" << margin_left
            << "' y2='" << Y << "' stroke='black'/>\n";
        out << "<line x1='" << margin_left << "' y1='" << Y << "' x2='"
            << margin_left + plot_w << "' y2='" << Y
            << "' stroke='#dddddd' stroke-width='0.5'/>\n";
        out << "<text x='" << margin_left - 8 << "' y='" << Y + 4
            << "' text-anchor='end' font-family='sans-serif' font-size='11'>"
            << trim_number(t) << "</text>\n";
    }

    // axis labels
    if (!opt.x_label.empty()) {
        out << "<text x='" << margin_left + plot_w / 2 << "' y='" << opt.height - 14
            << "' text-anchor='middle' font-family='sans-serif' font-size='13'>"
            << escape(opt.x_label) << "</text>\n";
    }
    if (!opt.y_label.empty()) {
        out << "<text x='20' y='" << margin_top + plot_h / 2
            << "' text-anchor='middle' font-family='sans-serif' font-size='13' "
               "transform='rotate(-90 20 "
            << margin_top + plot_h / 2 << ")'>" << escape(opt.y_label) << "</text>\n";
    }

    // series + legend
    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % kPaletteSize];
        std::ostringstream pts;
        for (std::size_t i = 0; i < series[s].x.size() && i < series[s].y.size(); ++i) {
            const double X = series[s].x[i];
            const double Y = series[s].y[i];
            if ((opt.log_x && !(X > 0.0)) || (opt.log_y && !(Y > 0.0))) {
                continue;
            }
            pts << px(X) << ',' << py(Y) << ' ';
        }
        out << "<polyline fill='none' stroke='" << color
            << "' stroke-width='1.5' points='" << pts.str() << "'/>\n";

        const double ly = margin_top + 16 + 18.0 * static_cast<double>(s);
        const double lx = margin_left + plot_w + 12;
        out << "<line x1='" << lx << "' y1='" << ly - 4 << "' x2='" << lx + 22 << "' y2='"
            << ly - 4 << "' stroke='" << color << "' stroke-width='2'/>\n";
        out << "<text x='" << lx + 28 << "' y='" << ly
            << "' font-family='sans-serif' font-size='12'>" << escape(series[s].label)
            << "</text>\n";
    }
    out << "</svg>\n";
}

void write_svg_chart(const std::filesystem::path& path,
                     const std::vector<SvgSeries>& series,
                     const SvgChartOptions& options) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw parse_error("cannot open '" + path.string() + "' for writing");
    }
    write_svg_chart(out, series, options);
}

} // namespace rmgd
