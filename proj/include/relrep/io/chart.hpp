#pragma once

#include "relrep/io/config.hpp"
#include "relrep/io/report.hpp"

#include <span>
#include <stdexcept>
#include <string>

namespace relrep::io {

class EmptyChartError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ChartLayout {
    double effect_panel_width = 420.0;
    double eds_panel_width = 220.0;
    double label_width = 90.0;
    double margin_width = 150.0;
    double panel_gap = 40.0;
    double top = 50.0;
    double bottom = 40.0;
    double bar_spacing = 14.0;
    double block_height = 44.0;
    bool eds_panel = true;
};

/// Standalone SVG with one original/replication bar pair per study: full bars
/// at eff +- ciw, ticks and a thick segment at eff +- cidw, dashed reference
/// lines at 0 and zeta (and at 0 and -rho_d in the eds panel). The right
/// margin carries n and the outcome label. Each panel declares its scale in
/// `data-px-per-unit`. Rows with errors are skipped; no drawable rows throws
/// EmptyChartError.
std::string emit_chart(std::span<const ReportRow> rows, const RunConfig& cfg,
                       const ChartLayout& layout = {});

} // namespace relrep::io
