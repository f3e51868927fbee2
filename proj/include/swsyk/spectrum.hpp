#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "swsyk/io.hpp"

namespace swsyk {

/// Sorted eigenvalues with provenance. `window` is empty for a full
/// spectrum and holds [lo, hi] for windowed (filtered) runs. Residuals are
/// NaN for pairs that were not checked.
struct Spectrum {
  std::vector<double> eigenvalues;
  std::vector<double> residuals;
  std::optional<std::pair<double, double>> window;
  bool converged = true;
  Metadata metadata;

  std::size_t size() const { return eigenvalues.size(); }
};

/// CSV "index,eigenvalue,residual" at 17 significant digits, preceded by
/// "# key: value" metadata lines (window and convergence included).
std::string format_spectrum(const Spectrum& s);
Spectrum parse_spectrum(const std::string& text);
void save_spectrum(const std::string& path, const Spectrum& s);
Spectrum load_spectrum(const std::string& path);

}  // namespace swsyk
