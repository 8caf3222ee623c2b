#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "retool/continuation.hpp"
#include "retool/triatomic.hpp"

using namespace retool;

namespace {

MoleculeSpec lj_molecule(double m_a, double m_b, double a11, double a22, double b11, double b22) {
  const auto aa = make_lennard_jones(a11, b11);
  return {m_a, m_b, aa, lorentz_berthelot(aa, make_lennard_jones(a22, b22))};
}

MoleculeSpec h3() { return lj_molecule(1, 1, 3, 3, 1, 1); }

double bisect(auto f, double a, double b) {
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (a + b);
    ((f(a) < 0) == (f(m) < 0) ? a : b) = m;
  }
  return 0.5 * (a + b);
}

}  // namespace

TEST(Molecule, JacobiMasses) {
  const auto m = lj_molecule(1, 0.5, 6, 400, 5, 3);
  EXPECT_EQ(m.M1(), 0.5);
  EXPECT_EQ(m.M2(), 2.0 * 1 * 0.5 / (2.0 + 0.5));
  EXPECT_THROW(MoleculeSpec(0, 1, make_lennard_jones(1, 1), make_lennard_jones(1, 1)), DomainError);
  EXPECT_THROW(MoleculeSpec(1, 1, PotentialModel::lennard_jones(1, 1), make_lennard_jones(1, 1)), NotValidated);
}

TEST(ReducedHamiltonian, EquilibriumEnergies) {
  const auto spec = h3();
  const auto prof = characterize(spec);
  const double r = prof.F.r_e, rg = prof.G.r_e;
  const double z = std::sqrt(rg * rg - r * r / 4);
  EXPECT_NEAR(reduced_hamiltonian(spec, {r, z, 0, 0, 0}), -6.75, 1e-12);
  EXPECT_NEAR(reduced_hamiltonian(spec, {r, z, 0, 0, 0}), spec.F.eval(r).value + 2 * spec.G.eval(rg).value, 1e-14);
  EXPECT_EQ(reduced_hamiltonian(spec, {1.1, 0.4, 0.3, -0.2, 0.7}), reduced_hamiltonian(spec, {1.1, -0.4, 0.3, -0.2, 0.7}));
  EXPECT_THROW(reduced_hamiltonian(spec, {0, 0, 0, 0, 0}), DomainError);
}

TEST(ReducedHamiltonian, KineticCoefficients) {
  const auto spec = lj_molecule(1, 0.5, 4, 2, 3, 1);
  const ReducedState s{1.3, 0.5, 0, 0, 0.4};
  auto h = [&](double pr, double pz) {
    auto t = s;
    t.p_r = pr;
    t.p_z = pz;
    return reduced_hamiltonian(spec, t);
  };
  EXPECT_NEAR(h(1, 0) - h(0, 0), 1.0 / spec.m_A, 1e-12);
  EXPECT_NEAR(h(0, 1) - h(0, 0), (2 * spec.m_A + spec.m_B) / (4 * spec.m_A * spec.m_B), 1e-12);
}

TEST(Residual, ForcesFromHamiltonianGradient) {
  const auto spec = lj_molecule(1, 0.5, 4, 2, 3, 1);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> rr(0.9, 2.0), zz(-1.0, 1.0), cc(0.0, 2.0);
  for (int i = 0; i < 50; ++i) {
    const double r = rr(rng), z = zz(rng), c = cc(rng), h = 1e-6;
    auto H = [&](double a, double b) { return reduced_hamiltonian(spec, {a, b, 0, 0, c}); };
    const auto [res_r, res_z] = re_residual(spec, r, z, c);
    EXPECT_NEAR(res_r, -(H(r + h, z) - H(r - h, z)) / (2 * h), 1e-5 * (1 + std::abs(res_r)));
    EXPECT_NEAR(res_z, (H(r, z + h) - H(r, z - h)) / (2 * h), 1e-5 * (1 + std::abs(res_z)));
  }
  EXPECT_EQ(re_residual(spec, 1.2, 0.0, 0.5).second, 0.0);
}

TEST(Residual, TaylorSignNearEquilibrium) {
  const auto spec = h3();
  const auto prof = characterize(spec);
  const double re = prof.F.r_e;
  for (double d : {1e-4, -1e-4}) {
    const double expected = -spec.F.eval(re).d2 * d - spec.G.eval(re / 2).d2 * d / 4;
    const double got = re_residual(spec, re + d, 0, 0).first + spec.G.eval(re / 2).d1;
    EXPECT_EQ(got > 0, expected > 0);
  }
}

TEST(Linear, ZeroMomentumRootMatchesBisection) {
  const auto spec = h3();
  const auto res = solve_linear(spec, 0.0);
  ASSERT_EQ(res.points.size(), 1u);
  const double r = bisect([&](double x) { return spec.F.eval(x).d1 + spec.G.eval(x / 2).d1; }, 1.2, 3.0);
  EXPECT_NEAR(res.points[0].r, r, 1e-10);
  EXPECT_EQ(res.points[0].family, Family::linear_inner);
  EXPECT_FALSE(res.multiplicity_warning);
}

TEST(Linear, BranchCountAroundCusp) {
  const auto spec = h3();
  const auto prof = characterize(spec);
  EXPECT_EQ(solve_linear(spec, 0.999 * prof.c0W, prof).points.size(), 2u);
  EXPECT_EQ(solve_linear(spec, 1.001 * prof.c0W, prof).points.size(), 0u);
  for (const auto& p : solve_linear(spec, 0.7 * prof.c0W, prof).points) {
    const auto [a, b] = re_residual(spec, p.r, p.z, p.c);
    EXPECT_LT(std::abs(a), 1e-9);
    EXPECT_EQ(b, 0.0);
  }
}

TEST(C1s, HydrogenLike) {
  const auto spec = h3();
  const double c1s = momentum_c1s(spec);
  EXPECT_NEAR(c1s, 0.8518, 1e-4);
  const double d = 2 * characterize(spec).G.r_e;
  EXPECT_NEAR(spec.F.eval(d).d1, 2 * c1s * c1s / (spec.m_A * d * d * d), 1e-12);
  const auto br = branches(DiatomicSystem{spec.F, spec.m_A}, c1s);
  ASSERT_TRUE(br.outer);
  EXPECT_NEAR(*br.outer, d, 1e-9);
}

TEST(C1s, IdenticalPotentialsAndScaling) {
  const auto u = make_lennard_jones(2, 1.5);
  const MoleculeSpec spec{1.3, 0.8, u, u};
  const double d = 2 * profile(u).r_e;
  EXPECT_NEAR(momentum_c1s(spec), std::sqrt(1.3 * d * d * d * u.eval(d).d1 / 2), 1e-12);
  const MoleculeSpec scaled{1.3, 0.8, u.scaled(4.0), u.scaled(4.0)};
  EXPECT_NEAR(momentum_c1s(scaled), 2.0 * momentum_c1s(spec), 1e-10);
  // Case 1 molecule: no isosceles RE.
  const auto case1 = lj_molecule(1, 1, 1, 300, 1, 1);
  EXPECT_THROW(momentum_c1s(case1), NotApplicable);
}

TEST(Isosceles, ZeroMomentumHydrogenLike) {
  const auto spec = h3();
  const auto pts = solve_isosceles(spec, 0.0);
  ASSERT_EQ(pts.size(), 2u);
  for (const auto& p : pts) {
    EXPECT_NEAR(p.r, 0.934655, 1e-6);
    EXPECT_NEAR(std::abs(p.z), 0.80950, 1e-4);
    const auto [a, b] = re_residual(spec, p.r, p.z, 0.0);
    EXPECT_LT(std::abs(a), 1e-9);
    EXPECT_LT(std::abs(b), 1e-9);
  }
  EXPECT_EQ(pts[0].z, -pts[1].z);
}

TEST(Isosceles, ResidualsAlongSweep) {
  for (const auto& spec : {h3(), lj_molecule(1, 0.5, 4, 2, 3, 1), lj_molecule(0.5, 1, 2, 1, 1, 3)}) {
    const auto prof = characterize(spec);
    for (int i = 0; i <= 60; ++i) {
      const double c = prof.c0F * i / 60.0;
      const auto pts = solve_isosceles(spec, c, prof);
      EXPECT_EQ(pts.size() % 2, 0u);
      for (std::size_t k = 0; k + 1 < pts.size(); k += 2) {
        EXPECT_EQ(pts[k].r, pts[k + 1].r);
        EXPECT_EQ(pts[k].energy, pts[k + 1].energy);
        EXPECT_EQ(pts[k].z, -pts[k + 1].z);
      }
      for (const auto& p : pts) {
        const auto [a, b] = re_residual(spec, p.r, p.z, c);
        EXPECT_LT(std::abs(a), 1e-9);
        EXPECT_LT(std::abs(b), 1e-9);
        const double rho = std::hypot(p.r / 2, p.z);
        EXPECT_NEAR(rho, prof.G.r_e, 1e-12);
        EXPECT_NEAR(p.xi_e, 2 * c / (spec.m_A * p.r * p.r), 1e-15);
      }
    }
    EXPECT_TRUE(solve_isosceles(spec, 1.001 * prof.c0F, prof).empty());
  }
}

TEST(Isosceles, OneFamilyForD2HCaseTwoA) {
  const auto spec = lj_molecule(1, 0.5, 6, 400, 5, 3);
  const auto prof = characterize(spec);
  const double c1s = momentum_c1s(spec, prof);
  for (int i = 1; i < 40; ++i) {
    const auto pts = solve_isosceles(spec, c1s * i / 40.0, prof);
    ASSERT_EQ(pts.size(), 2u);
    EXPECT_EQ(pts[0].family, Family::isosceles_z12);
  }
  EXPECT_TRUE(solve_isosceles(spec, 1.01 * c1s, prof).empty());
}

TEST(Isosceles, DegenerateRadicandIsLinear) {
  // 2 r_e^G == r_e^F: the c = 0 isosceles point sits on the line.
  const auto f = make_lennard_jones(1, 1);
  const double s = std::pow(2.0, 6.0);
  const auto g = make_lennard_jones(1, 1.0 / s);
  const MoleculeSpec spec{1, 1, f, g};
  EXPECT_NEAR(2 * profile(g).r_e, profile(f).r_e, 1e-12);
  for (const auto& p : solve_isosceles(spec, 0.0)) EXPECT_LT(std::abs(p.z), 1e-5);
}

TEST(MassIndependence, CoordinatesDoNotDependOnMB) {
  const auto aa = make_lennard_jones(3, 1);
  const auto ab = make_lennard_jones(3, 1);
  std::vector<std::vector<RelativeEquilibrium>> sets;
  for (double mb : {0.5, 1.0, 2.0}) {
    const MoleculeSpec spec{1, mb, aa, ab};
    std::vector<RelativeEquilibrium> all;
    for (int i = 0; i <= 30; ++i) {
      const double c = 2.0 * i / 30.0;
      for (auto& p : detail::solve_all(spec, c, characterize(spec))) all.push_back(p);
    }
    sets.push_back(all);
  }
  for (std::size_t k = 1; k < sets.size(); ++k) {
    ASSERT_EQ(sets[k].size(), sets[0].size());
    for (std::size_t i = 0; i < sets[0].size(); ++i) {
      EXPECT_NEAR(sets[k][i].r, sets[0][i].r, 1e-10);
      EXPECT_NEAR(sets[k][i].z, sets[0][i].z, 1e-10);
      EXPECT_NEAR(sets[k][i].energy, sets[0][i].energy, 1e-10);
    }
  }
}

TEST(Classify, ReferenceParameterSets) {
  EXPECT_EQ(classify(h3()).kind, IsoscelesCase::two_families);
  EXPECT_EQ(classify(lj_molecule(1, 0.5, 6, 400, 5, 3)).kind, IsoscelesCase::one_family);
  EXPECT_EQ(classify(lj_molecule(1, 0.5, 4, 2, 3, 1)).kind, IsoscelesCase::two_families);
  EXPECT_EQ(classify(lj_molecule(0.5, 1, 2, 1, 1, 3)).kind, IsoscelesCase::two_families);
  // a11 = 3, a22 = 200, b11 = 1, b22 = 2: 2 r_e^G exceeds l, so two families.
  const auto p = lj_molecule(0.5, 1, 3, 200, 1, 2);
  const auto prof = characterize(p);
  EXPECT_GT(2 * prof.G.r_e, prof.F.l);
  EXPECT_EQ(classify(p).kind, IsoscelesCase::two_families);
  EXPECT_EQ(classify_lennard_jones(3, 1, 200, 2), IsoscelesCase::two_families);
}

TEST(Classify, LabelFieldsAndCaseOne) {
  const auto lab = classify(h3());
  ASSERT_TRUE(lab.c1s);
  ASSERT_TRUE(lab.c0F);
  EXPECT_LT(*lab.c1s, *lab.c0F);
  const auto one = classify(lj_molecule(1, 1, 1, 300, 1, 1));
  EXPECT_EQ(one.kind, IsoscelesCase::no_isosceles);
  EXPECT_FALSE(one.c1s);
  EXPECT_EQ(case_number(one.kind), "1");
}

TEST(Classify, ClosedFormAgreesWithNumeric) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ex(-2.0, 2.0);
  std::set<IsoscelesCase> seen;
  for (int i = 0; i < 200; ++i) {
    const double a11 = std::pow(10, ex(rng)), a22 = std::pow(10, ex(rng));
    const double b11 = std::pow(10, ex(rng)), b22 = std::pow(10, ex(rng));
    const auto spec = lj_molecule(1, 1, a11, a22, b11, b22);
    const auto prof = characterize(spec);
    const auto numeric = classify_distances(prof.F.r_e, prof.G.r_e, prof.F.l);
    EXPECT_EQ(classify_lennard_jones(a11, b11, a22, b22), numeric) << a11 << ' ' << a22 << ' ' << b11 << ' ' << b22;
    EXPECT_NO_THROW(classify(spec, prof));
    seen.insert(numeric);
  }
  EXPECT_EQ(seen.size(), 3u);
}

TEST(Continuation, HydrogenLikeEvents) {
  const auto spec = h3();
  const auto prof = characterize(spec);
  const auto d = continue_families(spec, default_grid(prof, 400), prof);
  const double c1s = momentum_c1s(spec, prof);
  int n1 = 0, n0 = 0, nl = 0;
  for (const auto& e : d.events) {
    if (e.kind == EventKind::c_1s) {
      EXPECT_NEAR(e.c / c1s, 1.0, 1e-6);
      ++n1;
    }
    if (e.kind == EventKind::c_0F) {
      EXPECT_NEAR(e.c / prof.c0F, 1.0, 1e-6);
      ++n0;
    }
    if (e.kind == EventKind::linear_cusp) {
      EXPECT_NEAR(e.c / prof.c0W, 1.0, 1e-6);
      ++nl;
    }
  }
  EXPECT_EQ(n1, 1);
  EXPECT_EQ(n0, 1);
  EXPECT_EQ(nl, 1);
  EXPECT_TRUE(std::is_sorted(d.points.begin(), d.points.end(), point_less));
  for (const auto& p : d.points) {
    if (is_linear(p.family)) continue;
    if (p.family == Family::isosceles_z34) EXPECT_GT(p.c, c1s);
    EXPECT_LE(p.c, prof.c0F);
  }
  // c = 0 outer branch is absent.
  for (const auto& p : d.points) EXPECT_FALSE(p.c == 0.0 && p.family == Family::linear_outer);
}

TEST(Continuation, CaseTwoAFamilyEndsAtC1s) {
  const auto spec = lj_molecule(1, 0.5, 6, 400, 5, 3);
  const auto prof = characterize(spec);
  const auto d = continue_families(spec, default_grid(prof, 200), prof);
  const double c1s = momentum_c1s(spec, prof);
  ASSERT_FALSE(d.events.empty());
  EXPECT_EQ(std::count_if(d.events.begin(), d.events.end(), [](auto& e) { return e.kind == EventKind::c_1s; }), 1);
  for (const auto& e : d.events)
    if (e.kind == EventKind::c_1s) EXPECT_NEAR(e.c / c1s, 1.0, 1e-6);
  for (const auto& p : d.points) {
    EXPECT_NE(p.family, Family::isosceles_z34);
    if (p.family == Family::isosceles_z12) EXPECT_LT(p.c, c1s);
  }
}

TEST(Continuation, RejectsUnsortedGrid) {
  EXPECT_THROW(continue_families(h3(), {0.0, 1.0, 0.5}), DomainError);
}
