#pragma once

#include <string>

namespace lzn::cli {

// Renders one of the tool's CSV files to a standalone SVG, dispatching on
// its "# schema:" line: probability curves become line plots, phase grids
// heatmaps, spectra a stacked real/imaginary panel pair. Returns the bytes
// written so callers can hash them.
std::string render_csv_to_svg(const std::string& csv_path,
                              const std::string& svg_path);

}
