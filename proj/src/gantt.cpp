#include "shipsched/gantt.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace shipsched {

namespace {

struct Bar {
    int vessel;
    double start, end;
};

std::vector<std::vector<Bar>> bars_per_window(const Instance& inst,
                                              const Schedule& schedule) {
    std::vector<std::vector<Bar>> bars(inst.windows.size());
    for (const auto& vs : schedule.vessels)
        for (const auto& d : vs.dockings)
            bars[d.window].push_back(
                {vs.vessel, d.arrive_h, d.arrive_h + d.service_hours(inst)});
    for (auto& row : bars) {
        std::sort(row.begin(), row.end(),
                  [](const Bar& a, const Bar& b) { return a.start < b.start; });
        for (size_t k = 0; k + 1 < row.size(); ++k)
            if (row[k + 1].start < row[k].end - 1e-9)
                throw std::logic_error(
                    "gantt: overlapping loading bars, the validator was bypassed");
    }
    return bars;
}

const char* kPalette[] = {"#4878cf", "#d65f5f", "#59a14f", "#b07aa1",
                          "#e49444", "#76b7b2", "#edc948", "#9c755f"};

}  // namespace

std::string render_gantt_svg(const Instance& inst, const Schedule& schedule) {
    auto bars = bars_per_window(inst, schedule);
    double t_max = 1.0;
    for (const auto& w : inst.windows) t_max = std::max(t_max, w.upper_h);

    const double left = 90.0, top = 30.0, row_h = 26.0, width = 720.0;
    double scale = width / t_max;
    double height = top + row_h * inst.windows.size() + 40.0;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << left + width + 30
        << "\" height=\"" << height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    svg << "  <text x=\"" << left << "\" y=\"18\">berth time windows / vessel loading</text>\n";

    for (int w = 0; w < static_cast<int>(inst.windows.size()); ++w) {
        const auto& win = inst.windows[w];
        double y = top + row_h * w;
        svg << "  <text x=\"4\" y=\"" << y + 16 << "\">" << win.id << "</text>\n";
        svg << "  <rect x=\"" << left + win.lower_h * scale << "\" y=\"" << y + 4
            << "\" width=\"" << (win.upper_h - win.lower_h) * scale << "\" height=\""
            << row_h - 8 << "\" fill=\"none\" stroke=\"#888\"/>\n";
        for (const auto& bar : bars[w]) {
            double bw = std::max((bar.end - bar.start) * scale, 1.0);
            svg << "  <rect x=\"" << left + bar.start * scale << "\" y=\"" << y + 6
                << "\" width=\"" << bw << "\" height=\"" << row_h - 12 << "\" fill=\""
                << kPalette[bar.vessel % 8] << "\"/>\n";
            svg << "  <text x=\"" << left + bar.start * scale + 2 << "\" y=\"" << y + 16
                << "\" fill=\"#fff\">" << inst.vessels[bar.vessel].id << "</text>\n";
        }
    }

    double axis_y = top + row_h * inst.windows.size() + 14;
    svg << "  <line x1=\"" << left << "\" y1=\"" << axis_y << "\" x2=\"" << left + width
        << "\" y2=\"" << axis_y << "\" stroke=\"#444\"/>\n";
    for (int tick = 0; tick <= 6; ++tick) {
        double t = t_max * tick / 6.0;
        char label[32];
        std::snprintf(label, sizeof(label), "%.0fh", t);
        svg << "  <text x=\"" << left + t * scale - 8 << "\" y=\"" << axis_y + 14 << "\">"
            << label << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string render_gantt_text(const Instance& inst, const Schedule& schedule) {
    auto bars = bars_per_window(inst, schedule);
    double t_max = 1.0;
    for (const auto& w : inst.windows) t_max = std::max(t_max, w.upper_h);
    const int columns = 64;

    std::ostringstream out;
    for (int w = 0; w < static_cast<int>(inst.windows.size()); ++w) {
        const auto& win = inst.windows[w];
        std::string line(columns, ' ');
        auto pos = [&](double t) {
            return std::min(columns - 1,
                            std::max(0, static_cast<int>(t / t_max * (columns - 1))));
        };
        for (int k = pos(win.lower_h); k <= pos(win.upper_h); ++k) line[k] = '-';
        for (const auto& bar : bars[w]) {
            char mark = '1' + static_cast<char>(bar.vessel % 9);
            for (int k = pos(bar.start); k <= pos(bar.end); ++k) line[k] = mark;
        }
        char head[32];
        std::snprintf(head, sizeof(head), "%-8s", win.id.c_str());
        out << head << "|" << line << "|\n";
    }
    out << "\n";
    for (const auto& vs : schedule.vessels) {
        out << inst.vessels[vs.vessel].id << ": ";
        if (vs.dockings.empty()) {
            out << "idle\n";
            continue;
        }
        for (const auto& d : vs.dockings)
            out << inst.windows[d.window].id << "@" << d.arrive_h << "h("
                << d.total_load() << "p) ";
        out << "\n";
    }
    return out.str();
}

}  // namespace shipsched
