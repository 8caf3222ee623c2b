#pragma once

// retool <classify|equilibria|em-diagram|stability|simulate> --config <path>
//        [--out <dir>] [--format csv|json|svg]
//
// Exit codes: 0 success, 1 other failure, 2 config error, 3 convergence error,
// 4 axiom violation.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "retool/config.hpp"
#include "retool/continuation.hpp"
#include "retool/dynamics.hpp"
#include "retool/em_io.hpp"
#include "retool/errors.hpp"
#include "retool/triatomic.hpp"

namespace retool {

enum ExitCode { kOk = 0, kFailure = 1, kConfigError = 2, kConvergenceError = 3, kAxiomViolation = 4 };

namespace cli {

struct Options {
  std::string command;
  std::string config;
  std::string out = ".";
  std::vector<std::string> formats;
};

inline std::string g(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

inline RelativeEquilibrium select_re(const MoleculeSpec& spec, const MoleculeProfile& prof, const PointConfig& pc) {
  for (const auto& re : detail::solve_all(spec, pc.c, prof)) {
    if (re.family != pc.family) continue;
    if (!is_linear(re.family) && (re.z > 0.0) != (pc.sign > 0)) continue;
    return re;
  }
  throw NotApplicable("no " + std::string(to_string(pc.family)) + " RE at c = " + g(pc.c));
}

inline std::ofstream open_out(const std::filesystem::path& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  std::ofstream os(dir / name, std::ios::binary);
  if (!os) throw ConfigError("cannot write " + (dir / name).string());
  return os;
}

inline int cmd_classify(const Config& cfg, std::ostream& out) {
  const auto spec = cfg.molecule();
  const auto prof = characterize(spec);
  const auto lab = classify(spec, prof);
  out << "case " << case_number(lab.kind) << " (" << to_string(lab.kind) << ")\n";
  out << "r_e_F " << g(prof.F.r_e) << "\n";
  out << "l_F " << g(prof.F.l) << "\n";
  out << "r_e_G " << g(prof.G.r_e) << "\n";
  out << "2r_e_G " << g(2.0 * prof.G.r_e) << "\n";
  out << "inflection_F " << g(prof.F.inflection_r) << "\n";
  out << "c_1s " << (lab.c1s ? g(*lab.c1s) : std::string("none")) << "\n";
  out << "c_0F " << (lab.c0F ? g(*lab.c0F) : std::string("none")) << "\n";
  out << "c_0W " << g(prof.c0W) << "\n";
  return kOk;
}

inline int cmd_equilibria(const Config& cfg, std::ostream& out) {
  const auto spec = cfg.molecule();
  const auto prof = characterize(spec);
  out << "family,r,z,energy\n";
  for (const auto& re : detail::solve_all(spec, 0.0, prof))
    out << to_string(re.family) << ',' << g(re.r) << ',' << g(re.z) << ',' << g(re.energy) << '\n';
  return kOk;
}

inline int cmd_em_diagram(const Config& cfg, const Options& opt, std::ostream& out) {
  const auto spec = cfg.molecule();
  const auto prof = characterize(spec);
  auto d = continue_families(spec, default_grid(prof, cfg.grid.points, cfg.grid.c_max), prof);
  attach_stability(spec, d);
  std::set<std::string> fmts(opt.formats.begin(), opt.formats.end());
  if (fmts.empty()) fmts = {"csv", "json"};
  if (fmts.count("csv")) {
    auto os = open_out(opt.out, "em_diagram.csv");
    write_csv(os, d);
  }
  if (fmts.count("json")) {
    auto os = open_out(opt.out, "em_diagram.json");
    os << diagram_json(d, metadata_json(spec, prof)).dump(2) << '\n';
  }
  if (fmts.count("svg")) {
    auto os = open_out(opt.out, "em_diagram.svg");
    write_svg(os, d);
  }
  out << d.points.size() << " points, " << d.events.size() << " events\n";
  for (const auto& e : d.events) out << "event " << to_string(e.kind) << " c = " << g(e.c) << '\n';
  if (d.multiplicity_warning) out << "warning: linear composite potential has several wells\n";
  return kOk;
}

inline nlohmann::json report_json(const RelativeEquilibrium& re, const StabilityReport& rep) {
  auto cplx = [](const auto& v) {
    nlohmann::json a = nlohmann::json::array();
    for (auto z : v) a.push_back({z.real(), z.imag()});
    return a;
  };
  nlohmann::json j{{"c", re.c},
                   {"r", re.r},
                   {"z", re.z},
                   {"energy", re.energy},
                   {"family", to_string(re.family)},
                   {"method", rep.method == StabilityMethod::symplectic_slice ? "symplectic_slice"
                                                                               : "reduced_energy_momentum"},
                   {"verdict", to_string(rep.verdict)},
                   {"semisimple", rep.semisimple},
                   {"max_re_lambda", rep.max_re_lambda},
                   {"eps_spec", rep.eps_spec},
                   {"spectrum", cplx(rep.linearization_spectrum)}};
  if (rep.method == StabilityMethod::reduced_energy_momentum) {
    j["arnold_eigs"] = rep.arnold_eigs;
    j["vint_eigs"] = rep.vint_eigs;
    j["vint_eigs_amended"] = rep.vint_eigs_amended;
    j["formula_discrepancy"] = rep.formula_discrepancy;
    j["formula_discrepancy_flag"] = rep.formula_discrepancy_flag;
  } else {
    j["hessian_eigs"] = rep.hessian_eigs;
  }
  if (!rep.note.empty()) j["note"] = rep.note;
  return j;
}

inline int cmd_stability(const Config& cfg, const Options& opt, std::ostream& out) {
  if (!cfg.stability) throw ConfigError("missing [stability] section");
  const auto spec = cfg.molecule();
  const auto prof = characterize(spec);
  const auto re = select_re(spec, prof, *cfg.stability);
  const auto j = report_json(re, assess(spec, re));
  if (std::find(opt.formats.begin(), opt.formats.end(), "json") != opt.formats.end()) {
    out << j.dump(2) << '\n';
    return kOk;
  }
  for (const char* key : {"family", "method", "verdict", "c", "r", "z", "energy", "max_re_lambda", "semisimple"})
    out << key << ' ' << (j[key].is_string() ? j[key].get<std::string>() : j[key].dump()) << '\n';
  if (j.contains("formula_discrepancy")) out << "formula_discrepancy " << j["formula_discrepancy"].dump() << '\n';
  if (j.contains("note")) out << "note " << j["note"].get<std::string>() << '\n';
  return kOk;
}

inline int cmd_simulate(const Config& cfg, const Options& opt, std::ostream& out) {
  if (!cfg.simulate) throw ConfigError("missing [simulate] section");
  const auto& sc = *cfg.simulate;
  const auto spec = cfg.molecule();
  const auto prof = characterize(spec);
  const auto re = select_re(spec, prof, sc.point);
  const ReducedState s0{re.r + sc.perturb_r, re.z + sc.perturb_z, 0.0, 0.0, re.c};
  double max_dev = 0.0;
  Trajectory traj;
  std::string stop = "completed";
  try {
    traj = integrate(spec, s0, sc.t_end, sc.dt, default_guards(prof), sc.stride,
                     [&](double, const ReducedState& s) { max_dev = std::max(max_dev, std::hypot(s.r - re.r, s.z - re.z)); });
  } catch (const CollisionStop& e) {
    traj = e.partial();
    stop = "collision";
  } catch (const StepOverflow& e) {
    traj = e.partial();
    stop = "escape";
  }
  auto os = open_out(opt.out, "trajectory.csv");
  write_trajectory_csv(os, traj);
  out << "stop " << stop << "\n";
  out << "samples " << traj.samples.size() << "\n";
  out << "max_deviation " << g(max_dev) << "\n";
  out << "energy_drift " << g(traj.energy_drift) << "\n";
  return kOk;
}

}  // namespace cli

/// Parses argv and dispatches; returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"relative equilibria of A-B-A molecules"};
  app.set_version_flag("--version", std::string(kVersion));
  cli::Options opt;
  app.require_subcommand(1);
  for (const char* name : {"classify", "equilibria", "em-diagram", "stability", "simulate"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", opt.config, "configuration file")->required();
    sub->add_option("--out", opt.out, "output directory");
    sub->add_option("--format", opt.formats, "csv, json or svg")
        ->check(CLI::IsMember({"csv", "json", "svg"}))
        ->take_all();
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }
  opt.command = app.get_subcommands().front()->get_name();
  try {
    const auto cfg = load_config(opt.config);
    if (opt.command == "classify") return cli::cmd_classify(cfg, out);
    if (opt.command == "equilibria") return cli::cmd_equilibria(cfg, out);
    if (opt.command == "em-diagram") return cli::cmd_em_diagram(cfg, opt, out);
    if (opt.command == "stability") return cli::cmd_stability(cfg, opt, out);
    return cli::cmd_simulate(cfg, opt, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const AxiomViolation& e) {
    err << e.what() << '\n';
    return kAxiomViolation;
  } catch (const ConvergenceError& e) {
    err << "convergence error: " << e.what() << '\n';
    return kConvergenceError;
  } catch (const ContinuationGap& e) {
    err << "convergence error: " << e.what() << '\n';
    return kConvergenceError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace retool
