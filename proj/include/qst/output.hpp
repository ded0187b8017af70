#pragma once

#include <string>
#include <vector>

#include "qst/experiments.hpp"

namespace qst {

/// Numeric table with a '#'-prefixed metadata header, the serialized form of
/// every sweep and transfer result.
struct ResultTable {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

ResultTable to_table(const SweepResult& result);
ResultTable to_table(const TransferResult& result, const RunConfig& config);

/// Writes '# key = value' metadata lines, a header row, then one numeric row
/// per grid point (17 significant digits, so re-parsing is exact).
void emit_csv(const ResultTable& table, const std::string& path);

/// Re-reads a file produced by emit_csv.
ResultTable parse_csv(const std::string& path);

/// SVG 1.1 rendering: fidelity-vs-D polylines (one per kappa) for detuning
/// sweeps, a colored cell grid for state/coupling sweeps.
void emit_svg(const SweepResult& result, const std::string& path);

}  // namespace qst
