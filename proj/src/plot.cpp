#include "optree/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace optree {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 64.0;
constexpr double kRight = 140.0;
constexpr double kTop = 36.0;
constexpr double kBottom = 48.0;

const char* color_for(Algorithm a) {
    switch (a) {
        case Algorithm::Soo:
            return "#1f77b4";
        case Algorithm::Bamsoo:
            return "#d62728";
        case Algorithm::Gpucb:
            return "#2ca02c";
    }
    return "#000000";
}

std::string label_for(Algorithm a) {
    switch (a) {
        case Algorithm::Soo:
            return "SOO";
        case Algorithm::Bamsoo:
            return "BaMSOO";
        case Algorithm::Gpucb:
            return "GP-UCB";
    }
    return "?";
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

double clamp_floor(double v) { return std::max(v, kLogRegretFloor); }

}  // namespace

std::string render_regret_svg(const CurveSummary& summary) {
    const std::size_t n = summary.budget;
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (const auto& c : summary.curves) {
        for (std::size_t t = 0; t < n; ++t) {
            const double a = clamp_floor(c.mean[t] - c.std[t]);
            const double b = clamp_floor(c.mean[t] + c.std[t]);
            lo = first ? a : std::min(lo, a);
            hi = first ? b : std::max(hi, b);
            first = false;
        }
    }
    lo = std::floor(lo);
    hi = std::ceil(hi);
    if (hi <= lo) hi = lo + 1.0;

    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    const double xspan = n > 1 ? static_cast<double>(n - 1) : 1.0;
    auto px = [&](std::size_t t) { return kLeft + pw * static_cast<double>(t) / xspan; };
    auto py = [&](double v) { return kTop + ph * (hi - clamp_floor(v)) / (hi - lo); };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
       << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" "
       << "font-family=\"sans-serif\" font-size=\"15\">" << xml_escape(summary.benchmark)
       << "</text>\n";

    // Axes and ticks.
    os << "<g stroke=\"#444\" stroke-width=\"1\" fill=\"none\">\n"
       << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop + ph) << "\" x2=\""
       << num(kLeft + pw) << "\" y2=\"" << num(kTop + ph) << "\"/>\n"
       << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(kLeft)
       << "\" y2=\"" << num(kTop + ph) << "\"/>\n</g>\n";
    os << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#222\">\n";
    const double ystep = std::max(1.0, std::ceil((hi - lo) / 8.0));
    for (double v = hi; v >= lo - 1e-9; v -= ystep) {
        os << "<line x1=\"" << num(kLeft - 4) << "\" y1=\"" << num(py(v)) << "\" x2=\""
           << num(kLeft + pw) << "\" y2=\"" << num(py(v)) << "\" stroke=\"#ddd\"/>\n"
           << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(py(v) + 4)
           << "\" text-anchor=\"end\">" << static_cast<long>(v) << "</text>\n";
    }
    const std::size_t xstep = std::max<std::size_t>(1, (n + 5) / 6);
    for (std::size_t t = 0; t < n; t += xstep) {
        os << "<text x=\"" << num(px(t)) << "\" y=\"" << num(kTop + ph + 16)
           << "\" text-anchor=\"middle\">" << t + 1 << "</text>\n";
    }
    os << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 10)
       << "\" text-anchor=\"middle\">function evaluations</text>\n"
       << "<text transform=\"translate(16," << num(kTop + ph / 2)
       << ") rotate(-90)\" text-anchor=\"middle\">log10 regret</text>\n</g>\n";

    if (lo <= kLogRegretFloor) {
        os << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(py(kLogRegretFloor)) << "\" x2=\""
           << num(kLeft + pw) << "\" y2=\"" << num(py(kLogRegretFloor))
           << "\" stroke=\"#888\" stroke-dasharray=\"6,4\"/>\n";
    }

    for (std::size_t i = 0; i < summary.curves.size(); ++i) {
        const AlgorithmCurve& c = summary.curves[i];
        const char* color = color_for(c.algorithm);
        os << "<polygon fill=\"" << color << "\" fill-opacity=\"0.18\" stroke=\"none\" points=\"";
        for (std::size_t t = 0; t < n; ++t) os << num(px(t)) << ',' << num(py(c.mean[t] + c.std[t])) << ' ';
        for (std::size_t t = n; t-- > 0;) os << num(px(t)) << ',' << num(py(c.mean[t] - c.std[t])) << ' ';
        os << "\"/>\n";
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (std::size_t t = 0; t < n; ++t) os << num(px(t)) << ',' << num(py(c.mean[t])) << ' ';
        os << "\"/>\n";

        const double ly = kTop + 14.0 + 20.0 * static_cast<double>(i);
        os << "<line x1=\"" << num(kLeft + pw + 14) << "\" y1=\"" << num(ly) << "\" x2=\""
           << num(kLeft + pw + 38) << "\" y2=\"" << num(ly) << "\" stroke=\"" << color
           << "\" stroke-width=\"2\"/>\n"
           << "<text x=\"" << num(kLeft + pw + 44) << "\" y=\"" << num(ly + 4)
           << "\" font-family=\"sans-serif\" font-size=\"12\">" << label_for(c.algorithm)
           << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace optree
