#pragma once

#include <string>
#include <vector>

// Minimal SVG charts. Numbers are printed with fixed precision so identical
// inputs give identical bytes.
namespace h2cem::report {

struct BarSeries {
  std::string name;
  std::vector<double> values;  ///< one per category
};

/// Stacked bars, one per category; negative segments stack below zero.
std::string bar_chart(const std::string& title, const std::vector<std::string>& categories,
                      const std::vector<BarSeries>& series, const std::string& y_label);

std::string histogram_chart(const std::string& title, const std::vector<std::string>& bins,
                            const std::vector<double>& counts, const std::string& x_label);

}  // namespace h2cem::report
