#pragma once

#include <string>
#include <vector>

#include "gpi/experiment.hpp"

namespace gpi {

struct PlotPanel {
    std::string title;
    std::vector<TrialRecord> records;
};

/**
 * Grouped bar chart of mean stopping time per threshold, one bar per
 * algorithm, with +/- 3 sigma error bars and the mean printed above each bar
 * to one decimal. One panel per entry. Throws InvalidInput for an empty
 * panel list, an empty panel, or a panel with fewer than two algorithms.
 */
std::string render_svg(const std::vector<PlotPanel>& panels);

}  // namespace gpi
