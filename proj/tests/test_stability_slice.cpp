#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "retool/stability_slice.hpp"

using namespace retool;

namespace {

MoleculeSpec lj_molecule(double m_a, double m_b, double a11, double a22, double b11, double b22) {
  const auto aa = make_lennard_jones(a11, b11);
  return {m_a, m_b, aa, lorentz_berthelot(aa, make_lennard_jones(a22, b22))};
}

MoleculeSpec h3() { return lj_molecule(1, 1, 3, 3, 1, 1); }

RelativeEquilibrium linear(const MoleculeSpec& spec, double c, Family f = Family::linear_inner) {
  for (const auto& re : solve_linear(spec, c).points)
    if (re.family == f) return re;
  throw std::runtime_error("no linear RE");
}

// Full-metric kinetic energy of q' = xi x q + P sigma'.
double full_kinetic(const MoleculeSpec& spec, double r_e, const Vec4& sigma, const Eigen::Vector2d& xi,
                    const Vec4& sdot) {
  const Vec6 q = slice_configuration(r_e, sigma);
  const Eigen::Vector3d w(xi(0), 0, xi(1));
  Vec6 v;
  v << w.cross(Eigen::Vector3d(q.head<3>())), w.cross(Eigen::Vector3d(q.tail<3>()));
  v(1) += sdot(0);
  v.tail<3>() += sdot.tail<3>();
  return 0.5 * (spec.M1() * v.head<3>().squaredNorm() + spec.M2() * v.tail<3>().squaredNorm());
}

Vec4 random_sigma(std::mt19937& rng, double r_e) {
  std::uniform_real_distribution<double> u(-1, 1);
  Vec4 s(u(rng), u(rng), u(rng), u(rng));
  return 0.3 * r_e * u(rng) * s.normalized();
}

}  // namespace

TEST(SliceBlocks, BasePoint) {
  const auto spec = h3();
  const double r_e = 1.87;
  const auto b = slice_blocks(spec, r_e, Vec4::Zero());
  EXPECT_EQ(b.I_red, spec.M1() * r_e * r_e * Eigen::Matrix2d::Identity());
  EXPECT_EQ(b.C, Mat24::Zero());
  EXPECT_EQ(b.A, Mat24::Zero());
  EXPECT_EQ(b.M, Eigen::Matrix4d(Eigen::Vector4d(spec.M1(), spec.M2(), spec.M2(), spec.M2()).asDiagonal()));
}

TEST(SliceBlocks, CoriolisEntriesFromSigmaThree) {
  const auto spec = lj_molecule(1, 0.5, 4, 2, 3, 1);
  const double s3 = 0.17;
  const auto b = slice_blocks(spec, 1.5, Vec4(0, 0, s3, 0));
  Mat24 expected = Mat24::Zero();
  expected(0, 3) = spec.M2() * s3;
  expected(1, 1) = -spec.M2() * s3;
  EXPECT_LE((b.C - expected).cwiseAbs().maxCoeff(), 1e-15);
  const auto printed = printed_slice_blocks(spec, 1.5, Vec4(0, 0, s3, 0));
  EXPECT_LE((printed.C - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(SliceBlocks, GeometricVersusPrintedFixture) {
  const auto spec = lj_molecule(1, 0.5, 4, 2, 3, 1);
  const Vec4 s(0.05, 0.11, 0.07, -0.09);
  const auto geo = slice_blocks(spec, 1.5, s);
  const auto prn = printed_slice_blocks(spec, 1.5, s);
  // Resolved second diagonal entry: M1 (r_e + s1)^2 + M2 (s2^2 + s3^2).
  const double rr = (1.5 + s(0)) * (1.5 + s(0));
  EXPECT_NEAR(geo.I_red(1, 1), spec.M1() * rr + spec.M2() * (s(1) * s(1) + s(2) * s(2)), 1e-14);
  EXPECT_NEAR(geo.I_red(0, 0), prn.I_red(0, 0), 1e-14);
  EXPECT_NEAR(geo.I_red(0, 1), prn.I_red(0, 1), 1e-14);
  EXPECT_GT(std::abs(geo.I_red(1, 1) - prn.I_red(1, 1)), 1e-4);
  // Only the x-row s4 coupling differs in sign.
  Mat24 diff = geo.C - prn.C;
  EXPECT_NEAR(diff(0, 2), -2 * spec.M2() * s(3), 1e-15);
  diff(0, 2) = 0;
  EXPECT_LE(diff.cwiseAbs().maxCoeff(), 1e-15);
}

TEST(SliceBlocks, KineticEnergyMatchesFullMetric) {
  std::mt19937 rng(21);
  std::normal_distribution<double> n;
  const auto spec = lj_molecule(1, 0.5, 4, 2, 3, 1);
  const double r_e = 1.6;
  for (int k = 0; k < 50; ++k) {
    const Vec4 s = random_sigma(rng, r_e);
    const Eigen::Vector2d xi(n(rng), n(rng));
    const Vec4 sd(n(rng), n(rng), n(rng), n(rng));
    const double t = slice_kinetic_energy(slice_blocks(spec, r_e, s), xi, sd);
    EXPECT_NEAR(t, full_kinetic(spec, r_e, s, xi, sd), 1e-12 * (1 + t));
  }
}

TEST(SliceBlocks, LegendreRoundTrip) {
  std::mt19937 rng(22);
  std::normal_distribution<double> n;
  const auto spec = h3();
  const double r_e = 1.87;
  for (int k = 0; k < 50; ++k) {
    const auto b = slice_blocks(spec, r_e, random_sigma(rng, r_e));
    const Eigen::Vector2d xi(n(rng), n(rng));
    const Vec4 sd(n(rng), n(rng), n(rng), n(rng));
    const auto [mu, p] = slice_momenta(b, xi, sd);
    const auto [xi2, sd2] = slice_velocities(b, mu, p);
    EXPECT_LE((xi2 - xi).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LE((sd2 - sd).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(SliceBlocks, SingularInertia) {
  EXPECT_THROW(slice_blocks(h3(), 1.0, Vec4(-1.0, 0, 0, 0)), SingularInertia);
}

TEST(SliceHamiltonian, SpecialValues) {
  const auto spec = h3();
  const double r_e = 1.87;
  const Vec4 s(0.02, -0.03, 0.01, 0.04);
  EXPECT_NEAR(slice_hamiltonian(spec, r_e, 0, 0, s, Vec4::Zero()), slice_potential(spec, r_e, s), 1e-14);
  const double mx = 0.4, mz = 1.1;
  EXPECT_NEAR(slice_hamiltonian(spec, r_e, mx, mz, Vec4::Zero(), Vec4::Zero()),
              0.5 * (mx * mx + mz * mz) / (spec.M1() * r_e * r_e) + slice_potential(spec, r_e, Vec4::Zero()), 1e-13);
}

TEST(SliceHamiltonian, LegendreTransformOfLagrangian) {
  std::mt19937 rng(23);
  std::normal_distribution<double> n;
  const auto spec = h3();
  const double r_e = 1.87;
  for (int k = 0; k < 20; ++k) {
    const Vec4 s = random_sigma(rng, r_e);
    const auto b = slice_blocks(spec, r_e, s);
    const Eigen::Vector2d xi(n(rng), n(rng));
    const Vec4 sd(n(rng), n(rng), n(rng), n(rng));
    const auto [mu, p] = slice_momenta(b, xi, sd);
    const double energy = slice_kinetic_energy(b, xi, sd) + slice_potential(spec, r_e, s);
    EXPECT_NEAR(slice_hamiltonian(spec, r_e, mu(0), mu(1), s, p), energy, 1e-10 * (1 + std::abs(energy)));
  }
}

TEST(SliceHamiltonian, GradientVanishesAtEquilibrium) {
  const auto spec = h3();
  const auto re = linear(spec, 0.0);
  const double h = 1e-6;
  for (int j = 0; j < 8; ++j) {
    Vec4 s = Vec4::Zero(), p = Vec4::Zero();
    auto f = [&](double t) {
      Vec4 a = s, b = p;
      (j < 4 ? a(j) : b(j - 4)) = t;
      return slice_hamiltonian(spec, re.r, 0, 0, a, b);
    };
    EXPECT_NEAR((f(h) - f(-h)) / (2 * h), 0.0, 1e-8);
  }
}

TEST(SliceHessian, MatchesFiniteDifferences) {
  for (const auto& spec : {h3(), lj_molecule(1, 0.5, 4, 2, 3, 1), lj_molecule(0.5, 1, 2, 1, 1, 3)}) {
    const auto prof = characterize(spec);
    for (double frac : {0.0, 0.3, 0.7}) {
      for (const auto& re : solve_linear(spec, frac * prof.c0W, prof).points) {
        const Mat8 an = slice_hessian(spec, re.r, Eigen::Vector2d(0, re.c));
        const double h = 1e-4 * re.r;
        auto H = [&](const Eigen::Matrix<double, 8, 1>& x) {
          return slice_hamiltonian(spec, re.r, 0, re.c, x.head<4>(), x.tail<4>());
        };
        Mat8 fd;
        for (int i = 0; i < 8; ++i)
          for (int j = 0; j < 8; ++j) {
            Eigen::Matrix<double, 8, 1> ei = Eigen::Matrix<double, 8, 1>::Zero(), ej = ei;
            ei(i) = h;
            ej(j) = h;
            fd(i, j) = (H(ei + ej) - H(ei - ej) - H(ej - ei) + H(-ei - ej)) / (4 * h * h);
          }
        EXPECT_LE((an - fd).cwiseAbs().maxCoeff(), 1e-4 * (1 + an.cwiseAbs().maxCoeff())) << re.c;
      }
    }
  }
}

TEST(SliceHessian, BlockFormAgreesAtBasePoint) {
  using Vec8 = Eigen::Matrix<double, 8, 1>;
  const auto spec = h3();
  const auto re = linear(spec, 1.5);
  const double h = 1e-4;
  auto exact = [&](const Vec8& x) { return slice_hamiltonian(spec, re.r, 0, re.c, x.head<4>(), x.tail<4>()); };
  auto block = [&](const Vec8& x) {
    return slice_hamiltonian_block_form(spec, re.r, 0, re.c, x.head<4>(), x.tail<4>());
  };
  for (int i = 0; i < 8; ++i) {
    const Vec8 e = h * Vec8::Unit(i);
    const double a = (exact(e) - 2 * exact(Vec8::Zero()) + exact(-e)) / (h * h);
    const double c = (block(e) - 2 * block(Vec8::Zero()) + block(-e)) / (h * h);
    EXPECT_NEAR(a, c, 1e-4 * (1 + std::abs(a)));
  }
}

TEST(SliceStability, GreenAndBluePoints) {
  const auto spec = h3();
  const auto inner = slice_stability(spec, linear(spec, 1.5));
  EXPECT_EQ(inner.verdict, Verdict::lyapunov_stable);
  EXPECT_GT(inner.hessian_eigs.front(), 0);
  const auto outer = slice_stability(spec, linear(spec, 1.5, Family::linear_outer));
  EXPECT_EQ(outer.verdict, Verdict::spectrally_unstable);
  EXPECT_LT(outer.hessian_eigs.front(), 0);
  EXPECT_GT(outer.max_re_lambda, outer.eps_spec);
  EXPECT_THROW(slice_stability(spec, make_re(spec, 0.93, 0.8, 0.0, Family::isosceles_z12)), DomainError);
}

TEST(SliceStability, ZeroMomentumUsesPotentialOnly) {
  // Case 1 molecule: the c = 0 linear configuration; mu = 0 so the Hessian is
  // diag(P^T D^2V P, M^-1).
  const auto spec = lj_molecule(1, 1, 1, 300, 1, 1);
  const auto re = linear(spec, 0.0);
  const Mat8 h = slice_hessian(spec, re.r, Eigen::Vector2d::Zero());
  const auto P = slice_tangent();
  const Eigen::Matrix4d pv = P.transpose() * potential_hessian(spec, slice_configuration(re.r, Vec4::Zero())) * P;
  EXPECT_LE((h.topLeftCorner<4, 4>() - pv).cwiseAbs().maxCoeff(), 1e-10 * (1 + pv.cwiseAbs().maxCoeff()));
  EXPECT_LE((h.topRightCorner<4, 4>().cwiseAbs().maxCoeff()), 0.0);
  const auto rep = slice_stability(spec, re);
  const bool positive = pv.selfadjointView<Eigen::Upper>().eigenvalues().minCoeff() > 0;
  EXPECT_EQ(rep.verdict == Verdict::lyapunov_stable, positive);
}

TEST(SliceStability, ChangesOnlyAtModeThresholds) {
  // Along the inner linear family the Hessian decouples into stretch, two bends
  // and the asymmetric stretch. Stability changes where one of them crosses zero;
  // the bend along the spin axis crosses exactly at c_1s.
  const auto spec = h3();
  const auto prof = characterize(spec);
  const double c1s = momentum_c1s(spec, prof);
  auto d = [&](double c, int k) {
    const auto re = linear(spec, c);
    const Mat8 h = slice_hessian(spec, re.r, Eigen::Vector2d(0, c));
    const Eigen::Matrix4d e = h.bottomLeftCorner<4, 4>(), minv = h.bottomRightCorner<4, 4>();
    return (h.topLeftCorner<4, 4>() - e.transpose() * minv.inverse() * e)(k, k);
  };
  EXPECT_NEAR(d(c1s, 3), 0.0, 1e-9);
  Verdict prev = slice_stability(spec, linear(spec, 1e-3)).verdict;
  const int n = 400;
  for (int i = 1; i < n; ++i) {
    const double c = 1e-3 + (0.99 * prof.c0W - 1e-3) * i / n;
    const Verdict v = slice_stability(spec, linear(spec, c)).verdict;
    if (is_stable(v) != is_stable(prev)) {
      const double c_prev = 1e-3 + (0.99 * prof.c0W - 1e-3) * (i - 1) / n;
      bool crossing = false;
      for (int k = 0; k < 4; ++k) crossing = crossing || ((d(c_prev, k) > 0) != (d(c, k) > 0));
      EXPECT_TRUE(crossing) << c;
    }
    prev = v;
  }
}
