#pragma once

// INI configuration:
//
//   [molecule]  m_A, m_B
//   [aa] [ab] [bb]  kind = lennard_jones (a, b) | tabulated (file)
//   [grid]      points (400), c_max (optional)
//   [stability] c, family, sign
//   [simulate]  c, family, sign, perturb_r, perturb_z, t_end, dt, stride
//
// [ab] may be omitted when [aa] and [bb] are both Lennard-Jones; it is then
// obtained by arithmetic mixing. Table paths are relative to the config file.

#include <filesystem>
#include <optional>
#include <string>

#include <boost/lexical_cast.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "retool/errors.hpp"
#include "retool/potential.hpp"
#include "retool/triatomic.hpp"

namespace retool {

struct GridConfig {
  std::size_t points = 400;
  double c_max = 0.0;  ///< 0 selects the default upper bound
};

struct PointConfig {
  double c = 0.0;
  Family family = Family::linear_inner;
  int sign = 1;
};

struct SimulateConfig {
  PointConfig point;
  double perturb_r = 1e-4;
  double perturb_z = 0.0;
  double t_end = 100.0;
  double dt = 1e-3;
  std::size_t stride = 100;
};

struct Config {
  double m_A = 0.0;
  double m_B = 0.0;
  PotentialModel aa;
  PotentialModel ab;
  GridConfig grid;
  std::optional<PointConfig> stability;
  std::optional<SimulateConfig> simulate;

  MoleculeSpec molecule() const { return {m_A, m_B, aa, ab}; }
};

namespace detail {

using boost::property_tree::ptree;

template <class T>
T required(const ptree& pt, const std::string& key) {
  const auto v = pt.get_optional<std::string>(key);
  if (!v) throw ConfigError("missing key '" + key + "'");
  try {
    return boost::lexical_cast<T>(*v);
  } catch (const boost::bad_lexical_cast&) {
    throw ConfigError("bad value for '" + key + "': " + *v);
  }
}

template <class T>
T optional_value(const ptree& pt, const std::string& key, T fallback) {
  if (!pt.get_optional<std::string>(key)) return fallback;
  return required<T>(pt, key);
}

inline PotentialModel read_potential(const ptree& pt, const std::string& section,
                                     const std::filesystem::path& base) {
  const std::string kind = required<std::string>(pt, section + ".kind");
  if (kind == "lennard_jones") {
    const double a = required<double>(pt, section + ".a");
    const double b = required<double>(pt, section + ".b");
    if (!(a > 0.0) || !(b > 0.0)) throw ConfigError("[" + section + "] needs a > 0 and b > 0");
    return make_lennard_jones(a, b);
  }
  if (kind == "tabulated") {
    std::filesystem::path file = required<std::string>(pt, section + ".file");
    if (file.is_relative()) file = base / file;
    try {
      return load_tabulated(file.string());
    } catch (const DomainError& e) {
      throw ConfigError("[" + section + "] " + e.what());
    }
  }
  throw ConfigError("[" + section + "] unknown kind '" + kind + "'");
}

inline PointConfig read_point(const ptree& pt, const std::string& section) {
  PointConfig p;
  p.c = required<double>(pt, section + ".c");
  try {
    p.family = family_from_string(optional_value<std::string>(pt, section + ".family", "linear_inner"));
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  p.sign = optional_value<int>(pt, section + ".sign", 1) < 0 ? -1 : 1;
  if (!(p.c >= 0.0)) throw ConfigError("[" + section + "] c must be non-negative");
  return p;
}

}  // namespace detail

inline Config load_config(const std::string& path) {
  boost::property_tree::ptree pt;
  try {
    boost::property_tree::read_ini(path, pt);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("cannot read config: ") + e.what());
  }
  const auto base = std::filesystem::path(path).parent_path();
  Config cfg;
  cfg.m_A = detail::required<double>(pt, "molecule.m_A");
  cfg.m_B = detail::required<double>(pt, "molecule.m_B");
  if (!(cfg.m_A > 0.0) || !(cfg.m_B > 0.0)) throw ConfigError("masses must be positive");
  cfg.aa = detail::read_potential(pt, "aa", base);
  if (pt.get_child_optional("ab")) {
    cfg.ab = detail::read_potential(pt, "ab", base);
  } else if (pt.get_child_optional("bb")) {
    const auto bb = detail::read_potential(pt, "bb", base);
    try {
      cfg.ab = lorentz_berthelot(cfg.aa, bb);
    } catch (const KindMismatch& e) {
      throw ConfigError(std::string("[ab] required: ") + e.what());
    }
  } else {
    throw ConfigError("need [ab] or [bb]");
  }
  cfg.grid.points = detail::optional_value<std::size_t>(pt, "grid.points", 400);
  cfg.grid.c_max = detail::optional_value<double>(pt, "grid.c_max", 0.0);
  if (pt.get_child_optional("stability")) cfg.stability = detail::read_point(pt, "stability");
  if (pt.get_child_optional("simulate")) {
    SimulateConfig s;
    s.point = detail::read_point(pt, "simulate");
    s.perturb_r = detail::optional_value(pt, "simulate.perturb_r", s.perturb_r);
    s.perturb_z = detail::optional_value(pt, "simulate.perturb_z", s.perturb_z);
    s.t_end = detail::optional_value(pt, "simulate.t_end", s.t_end);
    s.dt = detail::optional_value(pt, "simulate.dt", s.dt);
    s.stride = detail::optional_value<std::size_t>(pt, "simulate.stride", s.stride);
    if (!(s.dt > 0.0) || !(s.t_end >= 0.0)) throw ConfigError("[simulate] needs dt > 0 and t_end >= 0");
    cfg.simulate = s;
  }
  return cfg;
}

}  // namespace retool
