#pragma once

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "pdc/amplitude.hpp"
#include "pdc/constants.hpp"
#include "pdc/errors.hpp"
#include "pdc/phasematch.hpp"
#include "pdc/sellmeier.hpp"

namespace pdc {

inline std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return std::string(buf);
}

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline double parse_double(const std::string& token, const std::string& where) {
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end == token.c_str() || *end != '\0')
    throw config_error(where + ": cannot parse number '" + token + "'");
  return v;
}

}  // namespace detail

// Sectioned key-value configuration text:
//   [section]
//   key = value        # comment (';' also starts a comment)
// Values are scalars or whitespace-separated lists.
struct ConfigFile {
  std::map<std::string, std::map<std::string, std::string>> sections;
  std::uint64_t hash = 0;

  bool has_section(const std::string& s) const { return sections.count(s) != 0; }

  bool has(const std::string& s, const std::string& k) const {
    auto it = sections.find(s);
    return it != sections.end() && it->second.count(k) != 0;
  }

  const std::string& raw(const std::string& s, const std::string& k) const {
    auto it = sections.find(s);
    if (it == sections.end())
      throw config_error("missing config section [" + s + "]");
    auto jt = it->second.find(k);
    if (jt == it->second.end())
      throw config_error("missing config key " + s + "." + k);
    return jt->second;
  }

  std::string get_string(const std::string& s, const std::string& k) const {
    return raw(s, k);
  }
  std::string get_string(const std::string& s, const std::string& k,
                         const std::string& fallback) const {
    return has(s, k) ? raw(s, k) : fallback;
  }

  double get_double(const std::string& s, const std::string& k) const {
    return detail::parse_double(raw(s, k), s + "." + k);
  }
  double get_double(const std::string& s, const std::string& k,
                    double fallback) const {
    return has(s, k) ? get_double(s, k) : fallback;
  }

  int get_int(const std::string& s, const std::string& k) const {
    const double v = get_double(s, k);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
      throw config_error(s + "." + k + ": expected an integer, got '" +
                         raw(s, k) + "'");
    return i;
  }
  int get_int(const std::string& s, const std::string& k, int fallback) const {
    return has(s, k) ? get_int(s, k) : fallback;
  }

  bool get_bool(const std::string& s, const std::string& k,
                bool fallback) const {
    if (!has(s, k)) return fallback;
    std::string v = raw(s, k);
    for (auto& c : v) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw config_error(s + "." + k + ": expected a boolean, got '" + raw(s, k) +
                       "'");
  }

  std::vector<double> get_doubles(const std::string& s,
                                  const std::string& k) const {
    std::istringstream in(raw(s, k));
    std::vector<double> out;
    std::string token;
    while (in >> token)
      out.push_back(detail::parse_double(token, s + "." + k));
    if (out.empty()) throw config_error(s + "." + k + ": empty value");
    return out;
  }

  std::vector<double> get_doubles(const std::string& s, const std::string& k,
                                  const std::vector<double>& fallback) const {
    return has(s, k) ? get_doubles(s, k) : fallback;
  }
};

inline ConfigFile parse_config_text(const std::string& text) {
  ConfigFile f;
  f.hash = fnv1a64(text);
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t cut = line.find_first_of("#;");
    if (cut != std::string::npos) line.erase(cut);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw config_error("config line " + std::to_string(line_no) +
                           ": unterminated section header");
      section = detail::trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw config_error("config line " + std::to_string(line_no) +
                           ": empty section name");
      f.sections[section];
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("config line " + std::to_string(line_no) +
                         ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty())
      throw config_error("config line " + std::to_string(line_no) +
                         ": empty key");
    if (section.empty())
      throw config_error("config line " + std::to_string(line_no) +
                         ": key outside any [section]");
    f.sections[section][key] = value;
  }
  return f;
}

inline ConfigFile load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

// Reject sections and keys the engine does not understand; typos in a recipe
// should fail loudly rather than silently fall back to defaults.
inline void require_known_keys(const ConfigFile& f) {
  static const std::map<std::string, std::vector<std::string>> schema = {
      {"crystal", {"name", "sellmeier_o", "sellmeier_e", "window_um"}},
      {"geometry",
       {"type", "pump_wavelength_nm", "cut_angle_deg", "segments_mm",
        "ignore_gap_phase"}},
      {"pump", {"waist_fwhm_um", "pulse_fwhm_ps"}},
      {"gain", {"g", "reference_wavelength_nm"}},
      {"grid",
       {"n", "signal_range_rad", "idler_range_rad", "angle_rad",
        "target_wavelength_nm", "span_nm"}},
      {"tuning", {"angle_rad", "samples", "wavelength_nm"}},
      {"walkoff", {"sweep_deg", "samples"}},
      {"modes", {"domain", "count"}},
  };
  for (const auto& [section, keys] : f.sections) {
    auto it = schema.find(section);
    if (it == schema.end())
      throw config_error("unknown config section [" + section + "]");
    for (const auto& [key, value] : keys) {
      bool known = false;
      for (const auto& k : it->second)
        if (k == key) {
          known = true;
          break;
        }
      if (!known)
        throw config_error("unknown config key " + section + "." + key);
    }
  }
}

// Fully typed run parameters assembled from a config file.  Units are
// converted here once: the engine runs on micrometers, meters, radians,
// seconds.
struct RunConfig {
  CrystalSpec crystal;
  ProcessGeometry geometry;
  PumpSpec pump;
  double gain = 0.0;
  // 0 = the configured gain is used as-is; otherwise it is the gain observed
  // at this wavelength (nm) and the run's scalar gain is solved from the
  // reference kernel's leading Schmidt weight.
  double gain_reference_nm = 0.0;
  bool ignore_gap_phase = false;

  int grid_n = 512;
  bool has_signal_range = false;
  double signal_lo_rad = 0.0, signal_hi_rad = 0.0;
  bool has_idler_range = false;
  double idler_lo_rad = 0.0, idler_hi_rad = 0.0;
  bool has_collection_angle = false;
  double collection_angle_rad = 0.0;  // external signal angle, spectral builds
  std::vector<double> target_wavelength_nm;
  double span_nm = 0.0;  // half-width of the spectral window; 0 = automatic

  double tuning_lo_rad = 0.0, tuning_hi_rad = 0.2;
  int tuning_samples = 201;
  double tuning_lambda_lo_nm = 0.0, tuning_lambda_hi_nm = 0.0;  // 0 = derived

  double walkoff_sweep_lo_deg = 5.0, walkoff_sweep_hi_deg = 85.0;
  int walkoff_samples = 81;

  std::string modes_domain = "angular";
  int modes_count = 20;

  std::uint64_t config_hash = 0;
};

inline RunConfig make_run_config(const ConfigFile& f) {
  require_known_keys(f);
  RunConfig rc;
  rc.config_hash = f.hash;

  rc.crystal = bbo();
  if (f.has_section("crystal")) {
    rc.crystal.name = f.get_string("crystal", "name", rc.crystal.name);
    if (f.has("crystal", "sellmeier_o"))
      rc.crystal.ordinary =
          SellmeierSet::from_coefficients(f.get_doubles("crystal", "sellmeier_o"));
    if (f.has("crystal", "sellmeier_e"))
      rc.crystal.extraordinary =
          SellmeierSet::from_coefficients(f.get_doubles("crystal", "sellmeier_e"));
    if (f.has("crystal", "window_um")) {
      const auto w = f.get_doubles("crystal", "window_um");
      if (w.size() != 2)
        throw config_error("crystal.window_um: expected 'lo hi'");
      rc.crystal.window_lo_um = w[0];
      rc.crystal.window_hi_um = w[1];
    }
  }
  rc.crystal.validate();

  rc.geometry.crystal = rc.crystal;
  const std::string type = f.get_string("geometry", "type");
  if (type == "I" || type == "i" || type == "1")
    rc.geometry.type = ProcessType::type1;
  else if (type == "II" || type == "ii" || type == "2")
    rc.geometry.type = ProcessType::type2;
  else
    throw config_error("geometry.type: expected I or II, got '" + type + "'");
  rc.geometry.pump_wavelength_um =
      f.get_double("geometry", "pump_wavelength_nm") * 1e-3;
  rc.geometry.cut_angle_rad =
      deg_to_rad(f.get_double("geometry", "cut_angle_deg"));
  const auto seg = f.get_doubles("geometry", "segments_mm");
  for (std::size_t i = 0; i < seg.size(); i += 2) {
    Segment s;
    s.length_m = seg[i] * 1e-3;
    s.gap_after_m = (i + 1 < seg.size()) ? seg[i + 1] * 1e-3 : 0.0;
    rc.geometry.segments.push_back(s);
  }
  rc.geometry.validate();
  rc.ignore_gap_phase = f.get_bool("geometry", "ignore_gap_phase", false);

  rc.pump.waist_fwhm_m = f.get_double("pump", "waist_fwhm_um", 0.0) * 1e-6;
  rc.pump.pulse_fwhm_s = f.get_double("pump", "pulse_fwhm_ps", 0.0) * 1e-12;

  rc.gain = f.get_double("gain", "g", 0.0);
  if (!(rc.gain >= 0.0)) throw config_error("gain.g must be nonnegative");
  rc.gain_reference_nm = f.get_double("gain", "reference_wavelength_nm", 0.0);
  if (rc.gain_reference_nm != 0.0 &&
      !(rc.gain_reference_nm * 1e-3 > rc.geometry.pump_wavelength_um))
    throw config_error(
        "gain.reference_wavelength_nm must exceed the pump wavelength");

  rc.grid_n = f.get_int("grid", "n", rc.grid_n);
  if (rc.grid_n < 16 || rc.grid_n > 4096)
    throw config_error("grid.n must lie in [16, 4096]");
  if (f.has("grid", "signal_range_rad")) {
    const auto r = f.get_doubles("grid", "signal_range_rad");
    if (r.size() != 2 || !(r[1] > r[0]))
      throw config_error("grid.signal_range_rad: expected 'lo hi' increasing");
    rc.has_signal_range = true;
    rc.signal_lo_rad = r[0];
    rc.signal_hi_rad = r[1];
  }
  if (f.has("grid", "idler_range_rad")) {
    const auto r = f.get_doubles("grid", "idler_range_rad");
    if (r.size() != 2 || !(r[1] > r[0]))
      throw config_error("grid.idler_range_rad: expected 'lo hi' increasing");
    rc.has_idler_range = true;
    rc.idler_lo_rad = r[0];
    rc.idler_hi_rad = r[1];
  }
  if (rc.has_signal_range != rc.has_idler_range)
    throw config_error(
        "grid: signal_range_rad and idler_range_rad must be given together");
  if (f.has("grid", "angle_rad")) {
    rc.has_collection_angle = true;
    rc.collection_angle_rad = f.get_double("grid", "angle_rad");
  }
  if (f.has("grid", "target_wavelength_nm")) {
    rc.target_wavelength_nm = f.get_doubles("grid", "target_wavelength_nm");
    for (double t : rc.target_wavelength_nm)
      if (!(t > 0.0))
        throw config_error("grid.target_wavelength_nm: wavelengths must be positive");
  }
  rc.span_nm = f.get_double("grid", "span_nm", 0.0);
  if (rc.span_nm < 0.0) throw config_error("grid.span_nm must be nonnegative");

  if (f.has("tuning", "angle_rad")) {
    const auto r = f.get_doubles("tuning", "angle_rad");
    if (r.size() != 2 || !(r[1] >= r[0]))
      throw config_error("tuning.angle_rad: expected 'lo hi'");
    rc.tuning_lo_rad = r[0];
    rc.tuning_hi_rad = r[1];
  }
  rc.tuning_samples = f.get_int("tuning", "samples", rc.tuning_samples);
  if (rc.tuning_samples < 1 || rc.tuning_samples > 100000)
    throw config_error("tuning.samples must lie in [1, 100000]");
  if (f.has("tuning", "wavelength_nm")) {
    const auto r = f.get_doubles("tuning", "wavelength_nm");
    if (r.size() != 2 || !(r[1] > r[0]))
      throw config_error("tuning.wavelength_nm: expected 'lo hi' increasing");
    rc.tuning_lambda_lo_nm = r[0];
    rc.tuning_lambda_hi_nm = r[1];
  }

  if (f.has("walkoff", "sweep_deg")) {
    const auto r = f.get_doubles("walkoff", "sweep_deg");
    if (r.size() != 2 || !(r[1] > r[0]))
      throw config_error("walkoff.sweep_deg: expected 'lo hi' increasing");
    rc.walkoff_sweep_lo_deg = r[0];
    rc.walkoff_sweep_hi_deg = r[1];
  }
  rc.walkoff_samples = f.get_int("walkoff", "samples", rc.walkoff_samples);
  if (rc.walkoff_samples < 2 || rc.walkoff_samples > 100000)
    throw config_error("walkoff.samples must lie in [2, 100000]");

  rc.modes_domain = f.get_string("modes", "domain", rc.modes_domain);
  if (rc.modes_domain != "angular" && rc.modes_domain != "spectral")
    throw config_error("modes.domain: expected 'angular' or 'spectral'");
  rc.modes_count = f.get_int("modes", "count", rc.modes_count);
  if (rc.modes_count < 1) throw config_error("modes.count must be positive");

  return rc;
}

inline RunConfig load_run_config(const std::string& path) {
  return make_run_config(load_config_file(path));
}

}  // namespace pdc
