#include "gpi/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace gpi {

namespace {

constexpr double kPanelWidth = 520, kPanelHeight = 360;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 60;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

std::string fixed(double x, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

std::string escape(const std::string& s) {
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

// Round an axis maximum up to 1, 2 or 5 times a power of ten.
double nice_ceiling(double x) {
    if (x <= 0) return 1;
    const double p = std::pow(10.0, std::floor(std::log10(x)));
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (m * p >= x) return m * p;
    return 10 * p;
}

void render_panel(std::ostringstream& svg, const PlotPanel& panel, double x0) {
    const auto cells = summarize(panel.records);
    std::vector<std::string> algorithms;
    std::vector<double> thresholds;
    for (const auto& c : cells) {
        if (std::find(algorithms.begin(), algorithms.end(), c.algorithm) == algorithms.end())
            algorithms.push_back(c.algorithm);
        if (std::find(thresholds.begin(), thresholds.end(), c.mu0) == thresholds.end()) thresholds.push_back(c.mu0);
    }
    if (algorithms.size() < 2) throw InvalidInput("plot: panel '" + panel.title + "' needs at least two algorithms");
    std::sort(thresholds.begin(), thresholds.end());

    double top = 0;
    for (const auto& c : cells) top = std::max(top, c.mean_tau + 3 * c.sd_tau);
    const double y_max = nice_ceiling(top * 1.1);
    const double plot_w = kPanelWidth - kLeft - kRight, plot_h = kPanelHeight - kTop - kBottom;
    auto y_of = [&](double v) { return kTop + plot_h * (1 - v / y_max); };

    svg << "<g transform=\"translate(" << x0 << ",0)\">\n";
    svg << "<text x=\"" << kPanelWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
        << escape(panel.title) << "</text>\n";
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kTop + plot_h
        << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << kLeft + plot_w << "\" y2=\""
        << kTop + plot_h << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double v = y_max * i / 4;
        svg << "<text class=\"tick\" x=\"" << kLeft - 6 << "\" y=\"" << y_of(v) + 4
            << "\" text-anchor=\"end\" font-size=\"10\">" << fixed(v, 0) << "</text>\n";
    }
    svg << "<text x=\"16\" y=\"" << kTop + plot_h / 2 << "\" font-size=\"11\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << kTop + plot_h / 2 << ")\">mean episodes to stop (lower is better)</text>\n";
    svg << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kPanelHeight - 12
        << "\" font-size=\"11\" text-anchor=\"middle\">threshold mu0</text>\n";

    const double group_w = plot_w / static_cast<double>(thresholds.size());
    const double bar_w = group_w * 0.8 / static_cast<double>(algorithms.size());
    for (std::size_t g = 0; g < thresholds.size(); ++g) {
        const double gx = kLeft + group_w * static_cast<double>(g) + group_w * 0.1;
        svg << "<text x=\"" << gx + group_w * 0.4 << "\" y=\"" << kTop + plot_h + 16
            << "\" font-size=\"11\" text-anchor=\"middle\">" << fixed(thresholds[g], 1) << "</text>\n";
        for (std::size_t a = 0; a < algorithms.size(); ++a) {
            const auto it = std::find_if(cells.begin(), cells.end(), [&](const CellSummary& c) {
                return c.algorithm == algorithms[a] && c.mu0 == thresholds[g];
            });
            if (it == cells.end()) continue;
            const double bx = gx + bar_w * static_cast<double>(a);
            const double cx = bx + bar_w / 2;
            const double lo = std::max(0.0, it->mean_tau - 3 * it->sd_tau), hi = it->mean_tau + 3 * it->sd_tau;
            svg << "<rect x=\"" << bx << "\" y=\"" << y_of(it->mean_tau) << "\" width=\"" << bar_w * 0.9
                << "\" height=\"" << kTop + plot_h - y_of(it->mean_tau) << "\" fill=\"" << kColors[a % 5]
                << "\" data-algorithm=\"" << escape(it->algorithm) << "\" data-mu0=\"" << fixed(it->mu0, 1)
                << "\" data-mean=\"" << fixed(it->mean_tau, 1) << "\" data-sd=\"" << fixed(it->sd_tau, 1) << "\"/>\n";
            svg << "<line class=\"errorbar\" x1=\"" << cx << "\" y1=\"" << y_of(lo) << "\" x2=\"" << cx << "\" y2=\""
                << y_of(hi) << "\" stroke=\"black\"/>\n";
            svg << "<text class=\"mean\" x=\"" << cx << "\" y=\"" << y_of(hi) - 4
                << "\" font-size=\"9\" text-anchor=\"middle\">" << fixed(it->mean_tau, 1) << "</text>\n";
        }
    }
    for (std::size_t a = 0; a < algorithms.size(); ++a) {
        const double ly = kTop + 6 + 16 * static_cast<double>(a);
        svg << "<rect x=\"" << kLeft + 10 << "\" y=\"" << ly << "\" width=\"10\" height=\"10\" fill=\"" << kColors[a % 5]
            << "\"/>\n";
        svg << "<text x=\"" << kLeft + 26 << "\" y=\"" << ly + 9 << "\" font-size=\"11\">" << escape(algorithms[a])
            << "</text>\n";
    }
    svg << "</g>\n";
}

}  // namespace

std::string render_svg(const std::vector<PlotPanel>& panels) {
    if (panels.empty()) throw InvalidInput("plot: no result tables given");
    for (const auto& p : panels)
        if (p.records.empty()) throw InvalidInput("plot: result table '" + p.title + "' is empty");

    std::ostringstream svg;
    const double width = kPanelWidth * static_cast<double>(panels.size());
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << kPanelHeight
        << "\" viewBox=\"0 0 " << width << ' ' << kPanelHeight << "\" font-family=\"sans-serif\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (std::size_t i = 0; i < panels.size(); ++i) render_panel(svg, panels[i], kPanelWidth * static_cast<double>(i));
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace gpi
