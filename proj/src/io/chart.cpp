#include "relrep/io/chart.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <vector>

namespace relrep::io {

namespace {

constexpr const char* kOriginalColor = "#2e8b3a";
constexpr const char* kReplicationColor = "#2160b0";
constexpr const char* kThresholdColor = "#c0392b";

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

struct Axis {
    double lo = 0.0;
    double hi = 1.0;
    double x0 = 0.0;
    double width = 1.0;

    double scale() const { return width / (hi - lo); }
    double at(double v) const { return x0 + (v - lo) * scale(); }
};

Axis make_axis(double lo, double hi, double x0, double width) {
    if (!(hi > lo)) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double pad = 0.05 * (hi - lo);
    return Axis{lo - pad, hi + pad, x0, width};
}

double nice_step(double range) {
    const double raw = range / 5.0;
    const double magnitude = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0}) {
        if (m * magnitude >= raw) return m * magnitude;
    }
    return 10.0 * magnitude;
}

void draw_axis(std::string& out, const Axis& axis, double y_top, double y_bottom) {
    out += fmt::format("  <line class=\"axis\" x1=\"{:.3f}\" y1=\"{:.3f}\" x2=\"{:.3f}\" y2=\"{:.3f}\"/>\n",
                       axis.at(axis.lo), y_bottom, axis.at(axis.hi), y_bottom);
    const double step = nice_step(axis.hi - axis.lo);
    for (double v = std::ceil(axis.lo / step) * step; v <= axis.hi + 1e-12; v += step) {
        const double x = axis.at(v);
        const double shown = std::fabs(v) < step * 1e-9 ? 0.0 : v;
        out += fmt::format("  <line class=\"grid\" x1=\"{0:.3f}\" y1=\"{1:.3f}\" x2=\"{0:.3f}\" y2=\"{2:.3f}\"/>\n",
                           x, y_top, y_bottom);
        out += fmt::format("  <text class=\"tick-label\" x=\"{:.3f}\" y=\"{:.3f}\">{:g}</text>\n", x,
                           y_bottom + 14.0, shown);
    }
}

void draw_reference(std::string& out, const Axis& axis, double value, const char* name,
                    const char* color, double y_top, double y_bottom) {
    out += fmt::format("  <line class=\"ref {0}\" data-value=\"{1:g}\" x1=\"{2:.3f}\" y1=\"{3:.3f}\" "
                       "x2=\"{2:.3f}\" y2=\"{4:.3f}\" stroke=\"{5}\" stroke-dasharray=\"5 4\"/>\n",
                       name, value, axis.at(value), y_top, y_bottom, color);
}

// Full bar, thick notch segment between the ticks, tick marks and the estimate.
void draw_bar(std::string& out, const Axis& axis, const char* role, const char* color, double y,
              double center, double ciw, double cidw) {
    out += fmt::format("    <line class=\"ci {0}\" x1=\"{1:.3f}\" y1=\"{3:.3f}\" x2=\"{2:.3f}\" y2=\"{3:.3f}\" "
                       "stroke=\"{4}\" stroke-width=\"1.5\"/>\n",
                       role, axis.at(center - ciw), axis.at(center + ciw), y, color);
    out += fmt::format("    <line class=\"notch {0}\" x1=\"{1:.3f}\" y1=\"{3:.3f}\" x2=\"{2:.3f}\" y2=\"{3:.3f}\" "
                       "stroke=\"{4}\" stroke-width=\"5\"/>\n",
                       role, axis.at(center - cidw), axis.at(center + cidw), y, color);
    for (double v : {center - cidw, center + cidw}) {
        out += fmt::format("    <line class=\"tick {0}\" x1=\"{1:.3f}\" y1=\"{2:.3f}\" x2=\"{1:.3f}\" "
                           "y2=\"{3:.3f}\" stroke=\"{4}\"/>\n",
                           role, axis.at(v), y - 5.0, y + 5.0, color);
    }
    out += fmt::format("    <circle class=\"est {0}\" cx=\"{1:.3f}\" cy=\"{2:.3f}\" r=\"2.5\" fill=\"{3}\"/>\n",
                       role, axis.at(center), y, color);
}

} // namespace

std::string emit_chart(std::span<const ReportRow> rows, const RunConfig& cfg,
                       const ChartLayout& layout) {
    std::vector<const ReportRow*> drawable;
    for (const ReportRow& r : rows) {
        if (r.computed) drawable.push_back(&r);
    }
    if (drawable.empty()) throw EmptyChartError("no analyzable studies to chart");

    double eff_lo = 0.0;
    double eff_hi = cfg.zeta;
    double eds_lo = -cfg.rho_d;
    double eds_hi = 0.0;
    for (const ReportRow* r : drawable) {
        eff_lo = std::min({eff_lo, r->eso - r->ciwo, r->esr - r->ciwr});
        eff_hi = std::max({eff_hi, r->eso + r->ciwo, r->esr + r->ciwr});
        eds_lo = std::min(eds_lo, r->eds - r->ciwd);
        eds_hi = std::max(eds_hi, r->eds + r->ciwd);
    }

    const double plot_top = layout.top;
    const double plot_bottom = plot_top + layout.block_height * static_cast<double>(drawable.size());
    const Axis effect_axis = make_axis(eff_lo, eff_hi, layout.label_width, layout.effect_panel_width);
    const double eds_x0 = layout.label_width + layout.effect_panel_width + layout.panel_gap;
    const Axis eds_axis = make_axis(eds_lo, eds_hi, eds_x0, layout.eds_panel_width);
    const double margin_x0 = layout.eds_panel
                                 ? eds_x0 + layout.eds_panel_width + 16.0
                                 : layout.label_width + layout.effect_panel_width + 16.0;
    const double width = margin_x0 + layout.margin_width;
    const double height = plot_bottom + layout.bottom;

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<!-- relrep chart v0.1.0 -->\n";
    out += fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0:.0f}\" height=\"{1:.0f}\" "
                       "viewBox=\"0 0 {0:.0f} {1:.0f}\" font-family=\"sans-serif\" font-size=\"11\">\n",
                       width, height);
    out += "<style>.axis{stroke:#444}.grid{stroke:#e4e4e4}.tick-label{text-anchor:middle;fill:#444}"
           ".study-label{text-anchor:end}.title{font-weight:bold}</style>\n";
    out += fmt::format("<rect x=\"0\" y=\"0\" width=\"{:.0f}\" height=\"{:.0f}\" fill=\"white\"/>\n", width,
                       height);

    out += fmt::format("<g class=\"panel effects\" data-px-per-unit=\"{:.6f}\" data-lo=\"{:.6f}\" "
                       "data-x0=\"{:.3f}\">\n",
                       effect_axis.scale(), effect_axis.lo, effect_axis.x0);
    out += fmt::format("  <text class=\"title\" x=\"{:.3f}\" y=\"{:.3f}\">standardized effect</text>\n",
                       effect_axis.x0, plot_top - 24.0);
    draw_axis(out, effect_axis, plot_top - 8.0, plot_bottom);
    draw_reference(out, effect_axis, 0.0, "zero", "#555", plot_top - 8.0, plot_bottom);
    draw_reference(out, effect_axis, cfg.zeta, "zeta", kThresholdColor, plot_top - 8.0, plot_bottom);
    for (std::size_t i = 0; i < drawable.size(); ++i) {
        const ReportRow& r = *drawable[i];
        const double y = plot_top + layout.block_height * static_cast<double>(i) + 8.0;
        out += fmt::format("  <g class=\"study\" data-study=\"{}\">\n", xml_escape(r.study_id));
        out += fmt::format("    <text class=\"study-label\" x=\"{:.3f}\" y=\"{:.3f}\">{}</text>\n",
                           layout.label_width - 8.0, y + layout.bar_spacing / 2.0 + 4.0,
                           xml_escape(r.study_id));
        draw_bar(out, effect_axis, "orig", kOriginalColor, y, r.eso, r.ciwo, r.cidwo);
        draw_bar(out, effect_axis, "repl", kReplicationColor, y + layout.bar_spacing, r.esr, r.ciwr,
                 r.cidwr);
        out += "  </g>\n";
    }
    out += "</g>\n";

    if (layout.eds_panel) {
        out += fmt::format("<g class=\"panel eds\" data-px-per-unit=\"{:.6f}\" data-lo=\"{:.6f}\" "
                           "data-x0=\"{:.3f}\">\n",
                           eds_axis.scale(), eds_axis.lo, eds_axis.x0);
        out += fmt::format("  <text class=\"title\" x=\"{:.3f}\" y=\"{:.3f}\">effect difference</text>\n",
                           eds_axis.x0, plot_top - 24.0);
        draw_axis(out, eds_axis, plot_top - 8.0, plot_bottom);
        draw_reference(out, eds_axis, 0.0, "zero", "#555", plot_top - 8.0, plot_bottom);
        draw_reference(out, eds_axis, -cfg.rho_d, "rho-d", kThresholdColor, plot_top - 8.0,
                       plot_bottom);
        for (std::size_t i = 0; i < drawable.size(); ++i) {
            const ReportRow& r = *drawable[i];
            const double y = plot_top + layout.block_height * static_cast<double>(i) + 8.0
                             + layout.bar_spacing / 2.0;
            out += fmt::format("  <g class=\"study\" data-study=\"{}\">\n", xml_escape(r.study_id));
            out += fmt::format("    <line class=\"ci eds\" x1=\"{:.3f}\" y1=\"{:.3f}\" x2=\"{:.3f}\" "
                               "y2=\"{:.3f}\" stroke=\"#333\" stroke-width=\"1.5\"/>\n",
                               eds_axis.at(r.eds - r.ciwd), y, eds_axis.at(r.eds + r.ciwd), y);
            out += fmt::format("    <circle class=\"est eds\" cx=\"{:.3f}\" cy=\"{:.3f}\" r=\"2.5\" "
                               "fill=\"#333\"/>\n",
                               eds_axis.at(r.eds), y);
            out += "  </g>\n";
        }
        out += "</g>\n";
    }

    out += "<g class=\"margin\">\n";
    for (std::size_t i = 0; i < drawable.size(); ++i) {
        const ReportRow& r = *drawable[i];
        const double y = plot_top + layout.block_height * static_cast<double>(i) + 8.0;
        const std::string outcome = r.replclass ? std::string(to_string(*r.replclass)) : "-";
        out += fmt::format("  <text class=\"n orig\" x=\"{:.3f}\" y=\"{:.3f}\">n={}</text>\n", margin_x0,
                           y + 4.0, r.n_o);
        out += fmt::format("  <text class=\"n repl\" x=\"{:.3f}\" y=\"{:.3f}\">n={}</text>\n", margin_x0,
                           y + layout.bar_spacing + 4.0, r.n_r);
        out += fmt::format("  <text class=\"replclass\" x=\"{:.3f}\" y=\"{:.3f}\">{}</text>\n",
                           margin_x0 + 60.0, y + layout.bar_spacing / 2.0 + 4.0, outcome);
    }
    out += "</g>\n</svg>\n";
    return out;
}

} // namespace relrep::io
