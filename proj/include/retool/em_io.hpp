#pragma once

// EM diagram serialization: CSV (plot subset), JSON (everything) and SVG.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "retool/continuation.hpp"
#include "retool/errors.hpp"
#include "retool/triatomic.hpp"

namespace retool {

inline constexpr const char* kVersion = "0.1.0";

inline constexpr const char* kCsvHeader = "c,energy,r,z,family,verdict,max_re_lambda";

namespace detail {

inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw DomainError("bad number '" + s + "'");
  }
  if (used != s.size()) throw DomainError("bad number '" + s + "'");
  return v;
}

}  // namespace detail

inline void write_csv(std::ostream& os, const EMDiagram& d) {
  os << kCsvHeader << '\n';
  for (const auto& p : d.points)
    os << detail::fmt17(p.c) << ',' << detail::fmt17(p.energy) << ',' << detail::fmt17(p.r) << ','
       << detail::fmt17(p.z) << ',' << to_string(p.family) << ',' << to_string(p.verdict) << ','
       << detail::fmt17(p.max_re_lambda) << '\n';
}

/// Inverse of write_csv; spectra and events are not part of the CSV.
inline std::vector<EMPoint> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader) throw DomainError("missing EM CSV header");
  std::vector<EMPoint> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 7) throw DomainError("EM CSV row needs 7 fields: " + line);
    EMPoint p{detail::parse_double(f[0]), detail::parse_double(f[1]), detail::parse_double(f[2]),
              detail::parse_double(f[3]), family_from_string(f[4])};
    p.verdict = verdict_from_string(f[5]);
    p.max_re_lambda = detail::parse_double(f[6]);
    out.push_back(p);
  }
  return out;
}

inline nlohmann::json potential_json(const PotentialModel& u) {
  if (u.is_lennard_jones()) return {{"kind", "lennard_jones"}, {"a", u.lj().a}, {"b", u.lj().b}};
  return {{"kind", "tabulated"},
          {"samples", u.samples().size()},
          {"r_min", u.domain().lo},
          {"r_max", u.domain().hi}};
}

inline nlohmann::json metadata_json(const MoleculeSpec& spec, const MoleculeProfile& prof) {
  nlohmann::json m;
  m["version"] = kVersion;
  m["molecule"] = {{"m_A", spec.m_A}, {"m_B", spec.m_B}, {"M1", spec.M1()}, {"M2", spec.M2()},
                   {"F", potential_json(spec.F)}, {"G", potential_json(spec.G)}};
  m["profile"] = {{"r_e_F", prof.F.r_e}, {"l_F", prof.F.l}, {"r_e_G", prof.G.r_e},
                  {"c_0F", prof.c0F}, {"c_0W", prof.c0W}};
  m["tolerances"] = {{"event_bisection", kEventTolerance},
                     {"eps_spec", "1e-8 (1 + spectral radius)"},
                     {"rank_threshold", "1e-8 sigma_max"},
                     {"re_residual", 1e-9}};
  return m;
}

inline nlohmann::json diagram_json(const EMDiagram& d, const nlohmann::json& metadata) {
  nlohmann::json j;
  j["metadata"] = metadata;
  j["multiplicity_warning"] = d.multiplicity_warning;
  j["events"] = nlohmann::json::array();
  for (const auto& e : d.events) j["events"].push_back({{"kind", to_string(e.kind)}, {"c", e.c}});
  j["points"] = nlohmann::json::array();
  for (const auto& p : d.points) {
    nlohmann::json spec = nlohmann::json::array();
    for (auto z : p.spectrum) spec.push_back({z.real(), z.imag()});
    j["points"].push_back({{"c", p.c},
                           {"energy", p.energy},
                           {"r", p.r},
                           {"z", p.z},
                           {"family", to_string(p.family)},
                           {"verdict", to_string(p.verdict)},
                           {"max_re_lambda", p.max_re_lambda},
                           {"spectrum", spec}});
  }
  return j;
}

inline constexpr const char* kGreen = "#2ca02c";
inline constexpr const char* kBlue = "#1f77b4";
inline constexpr const char* kViolet = "#8a2be2";
inline constexpr const char* kGrey = "#888888";

inline const char* point_color(const EMPoint& p) {
  if (!is_linear(p.family)) return kViolet;
  if (is_stable(p.verdict)) return kGreen;
  if (p.verdict == Verdict::spectrally_unstable) return kBlue;
  return kGrey;
}

/// Energy against momentum. Output depends only on the diagram.
inline void write_svg(std::ostream& os, const EMDiagram& d) {
  constexpr double W = 800, H = 600, L = 70, R = 20, T = 20, B = 50;
  double cmin = 0.0, cmax = 1.0, emin = -1.0, emax = 1.0;
  if (!d.points.empty()) {
    cmin = std::numeric_limits<double>::infinity();
    cmax = -cmin;
    emin = cmin;
    emax = -cmin;
    for (const auto& p : d.points) {
      cmin = std::min(cmin, p.c);
      cmax = std::max(cmax, p.c);
      emin = std::min(emin, p.energy);
      emax = std::max(emax, p.energy);
    }
    for (const auto& e : d.events) cmax = std::max(cmax, e.c);
    if (cmax - cmin <= 0.0) cmax = cmin + 1.0;
    if (emax - emin <= 0.0) emax = emin + 1.0;
    const double pad = 0.05 * (emax - emin);
    emin -= pad;
    emax += pad;
  }
  auto x = [&](double c) { return L + (c - cmin) / (cmax - cmin) * (W - L - R); };
  auto y = [&](double e) { return H - B - (e - emin) / (emax - emin) * (H - T - B); };
  char buf[256];
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" viewBox=\"0 0 %.0f %.0f\">\n",
                W, H, W, H);
  os << buf;
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf,
                "<rect x=\"%.0f\" y=\"%.0f\" width=\"%.0f\" height=\"%.0f\" fill=\"none\" stroke=\"black\"/>\n", L, T,
                W - L - R, H - T - B);
  os << buf;
  for (int i = 0; i <= 5; ++i) {
    const double c = cmin + (cmax - cmin) * i / 5.0;
    const double e = emin + (emax - emin) * i / 5.0;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.2f\" y=\"%.2f\" font-size=\"12\" text-anchor=\"middle\">%.3g</text>\n", x(c), H - B + 18,
                  c);
    os << buf;
    std::snprintf(buf, sizeof buf, "<text x=\"%.2f\" y=\"%.2f\" font-size=\"12\" text-anchor=\"end\">%.3g</text>\n",
                  L - 6, y(e) + 4, e);
    os << buf;
  }
  std::snprintf(buf, sizeof buf, "<text x=\"%.2f\" y=\"%.2f\" font-size=\"14\" text-anchor=\"middle\">c</text>\n",
                L + 0.5 * (W - L - R), H - 10.0);
  os << buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"16\" y=\"%.2f\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 16 %.2f)\">"
                "energy</text>\n",
                T + 0.5 * (H - T - B), T + 0.5 * (H - T - B));
  os << buf;
  for (const auto& e : d.events) {
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.2f\" y1=\"%.0f\" x2=\"%.2f\" y2=\"%.0f\" stroke=\"#555555\" stroke-dasharray=\"6,4\"/>\n"
                  "<text x=\"%.2f\" y=\"%.0f\" font-size=\"11\">%s</text>\n",
                  x(e.c), T, x(e.c), H - B, x(e.c) + 3, T + 12, std::string(to_string(e.kind)).c_str());
    os << buf;
  }
  for (const auto& p : d.points) {
    std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"1.8\" fill=\"%s\"/>\n", x(p.c), y(p.energy),
                  point_color(p));
    os << buf;
  }
  os << "</svg>\n";
}

}  // namespace retool
