#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

namespace curtainlab {

// Minimal line-plot SVG, enough for derived experiment artifacts.
// Never parsed by tests.
class SvgPlot {
public:
    SvgPlot(std::string title, std::string xlabel, std::string ylabel)
        : title_(std::move(title)), xlabel_(std::move(xlabel)), ylabel_(std::move(ylabel)) {}

    void add_series(std::string name, std::vector<double> xs, std::vector<double> ys) {
        series_.push_back({std::move(name), std::move(xs), std::move(ys)});
    }

    void save(const std::string& path) const {
        const double W = 640, H = 420, L = 60, B = 50, T = 34, R = 20;
        double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
        for (auto& s : series_)
            for (std::size_t i = 0; i < s.xs.size(); ++i) {
                xmin = std::min(xmin, s.xs[i]);
                xmax = std::max(xmax, s.xs[i]);
                ymin = std::min(ymin, s.ys[i]);
                ymax = std::max(ymax, s.ys[i]);
            }
        if (xmin > xmax) { xmin = 0; xmax = 1; }
        if (ymin > ymax) { ymin = 0; ymax = 1; }
        if (xmax - xmin < 1e-12) xmax = xmin + 1;
        if (ymax - ymin < 1e-12) ymax = ymin + 1;
        auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
        auto py = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - B - T); };

        static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
        std::string out;
        char buf[512];
        std::snprintf(buf, sizeof buf,
                      "<svg xmlns='http://www.w3.org/2000/svg' width='%g' height='%g'>\n", W, H);
        out += buf;
        std::snprintf(buf, sizeof buf,
                      "<rect width='%g' height='%g' fill='white'/>\n"
                      "<text x='%g' y='20' font-size='14' text-anchor='middle'>%s</text>\n"
                      "<text x='%g' y='%g' font-size='12' text-anchor='middle'>%s</text>\n"
                      "<text x='16' y='%g' font-size='12' text-anchor='middle' "
                      "transform='rotate(-90 16 %g)'>%s</text>\n",
                      W, H, W / 2, title_.c_str(), W / 2, H - 12, xlabel_.c_str(), H / 2, H / 2,
                      ylabel_.c_str());
        out += buf;
        std::snprintf(buf, sizeof buf,
                      "<line x1='%g' y1='%g' x2='%g' y2='%g' stroke='black'/>\n"
                      "<line x1='%g' y1='%g' x2='%g' y2='%g' stroke='black'/>\n",
                      L, H - B, W - R, H - B, L, T, L, H - B);
        out += buf;
        std::snprintf(buf, sizeof buf,
                      "<text x='%g' y='%g' font-size='10'>%.4g</text>"
                      "<text x='%g' y='%g' font-size='10' text-anchor='end'>%.4g</text>"
                      "<text x='%g' y='%g' font-size='10'>%.4g</text>"
                      "<text x='%g' y='%g' font-size='10'>%.4g</text>\n",
                      L, H - B + 14, xmin, W - R, H - B + 14, xmax, L - 55 + 10, H - B, ymin,
                      L - 55 + 10, T + 6, ymax);
        out += buf;
        int ci = 0;
        for (auto& s : series_) {
            std::string pts;
            for (std::size_t i = 0; i < s.xs.size(); ++i) {
                std::snprintf(buf, sizeof buf, "%.3f,%.3f ", px(s.xs[i]), py(s.ys[i]));
                pts += buf;
            }
            const char* c = colors[ci % 5];
            std::snprintf(buf, sizeof buf,
                          "<polyline points='%s' fill='none' stroke='%s' stroke-width='1.5'/>\n"
                          "<text x='%g' y='%g' font-size='11' fill='%s'>%s</text>\n",
                          pts.c_str(), c, W - R - 150.0, T + 16.0 + 14.0 * ci, c, s.name.c_str());
            out += buf;
            ++ci;
        }
        out += "</svg>\n";
        std::ofstream f(path, std::ios::binary);
        f << out;
    }

private:
    struct Series {
        std::string name;
        std::vector<double> xs, ys;
    };
    std::string title_, xlabel_, ylabel_;
    std::vector<Series> series_;
};

} // namespace curtainlab
