#include "swsyk/spectrum.hpp"

#include <cmath>
#include <sstream>

#include "swsyk/error.hpp"

namespace swsyk {

std::string format_spectrum(const Spectrum& s) {
  Metadata meta = s.metadata;
  if (s.window) {
    meta.emplace_back("window_lo", format_double(s.window->first));
    meta.emplace_back("window_hi", format_double(s.window->second));
  } else {
    meta.emplace_back("window", "full");
  }
  meta.emplace_back("converged", s.converged ? "true" : "false");
  std::string out = metadata_block(meta);
  out += "index,eigenvalue,residual\n";
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
    const double res = i < s.residuals.size() ? s.residuals[i] : std::nan("");
    out += std::to_string(i) + "," + format_double(s.eigenvalues[i]) + "," + format_double(res) + "\n";
  }
  return out;
}

Spectrum parse_spectrum(const std::string& text) {
  Spectrum s;
  std::istringstream is(text);
  std::string line;
  std::optional<double> lo, hi;
  bool header_seen = false;
  while (std::getline(is, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      Metadata m = parse_metadata_line(line, {});
      if (m.empty()) continue;
      const auto& [key, value] = m.front();
      if (key == "window_lo") lo = parse_double(value);
      else if (key == "window_hi") hi = parse_double(value);
      else if (key == "converged") s.converged = value == "true";
      else if (key != "window") s.metadata.push_back(m.front());
      continue;
    }
    if (!header_seen) {
      header_seen = true;
      if (line.rfind("index", 0) == 0) continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() < 2) throw IoError("spectrum file: malformed row '" + line + "'");
    s.eigenvalues.push_back(parse_double(fields[1]));
    s.residuals.push_back(fields.size() > 2 ? parse_double(fields[2]) : std::nan(""));
  }
  if (lo && hi) s.window = std::make_pair(*lo, *hi);
  for (std::size_t i = 1; i < s.eigenvalues.size(); ++i)
    if (s.eigenvalues[i] < s.eigenvalues[i - 1]) throw IoError("spectrum file: eigenvalues are not sorted ascending");
  return s;
}

void save_spectrum(const std::string& path, const Spectrum& s) { write_text_file(path, format_spectrum(s)); }

Spectrum load_spectrum(const std::string& path) { return parse_spectrum(read_text_file(path)); }

}  // namespace swsyk
