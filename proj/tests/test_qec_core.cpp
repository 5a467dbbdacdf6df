#include <doctest.h>

#include <cmath>

#include "test_helpers.hpp"

using namespace roqec;
using roqec::testing::Rng;

TEST_CASE("codewords and projectors") {
  const PhaseFlipCode code = build_code();

  SUBCASE("zero-logical amplitudes are all 1/sqrt(8)") {
    for (int a = 0; a < kDim; ++a) {
      CHECK(std::abs(code.zero_logical.vector(a) - Complex(1.0 / std::sqrt(8.0), 0.0)) <
            1e-15);
    }
  }

  SUBCASE("codewords orthonormal") {
    CHECK(std::abs(code.zero_logical.vector.norm() - 1.0) < 1e-14);
    CHECK(std::abs(code.one_logical.vector.norm() - 1.0) < 1e-14);
    CHECK(std::abs(code.zero_logical.vector.dot(code.one_logical.vector)) < 1e-14);
  }

  SUBCASE("projector completeness") {
    Matrix8d sum = Matrix8d::Zero();
    for (const auto& p : code.projectors) sum += p.matrix;
    CHECK((sum - Matrix8d::Identity()).cwiseAbs().maxCoeff() < 1e-13);
  }

  SUBCASE("rank-2 orthogonal projectors") {
    for (const auto& p : code.projectors) {
      CHECK((p.matrix * p.matrix - p.matrix).cwiseAbs().maxCoeff() < 1e-13);
      CHECK(p.matrix.trace() == doctest::Approx(2.0).epsilon(1e-13));
      CHECK((p.matrix - p.matrix.transpose().eval()).cwiseAbs().maxCoeff() < 1e-14);
    }
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        CHECK((code.projectors[i].matrix * code.projectors[j].matrix)
                  .cwiseAbs()
                  .maxCoeff() < 1e-13);
      }
  }

  SUBCASE("P_j = Z_j P_0 Z_j elementwise") {
    for (int j = 1; j <= 3; ++j) {
      const Matrix8d zj = pauli_z(j);
      CHECK((code.projectors[j].matrix - zj * code.projectors[0].matrix * zj)
                .cwiseAbs()
                .maxCoeff() < 1e-14);
    }
  }

  SUBCASE("corrections are U_0 = I and U_j = Z_j") {
    CHECK((code.corrections[0].matrix - Matrix8d::Identity()).cwiseAbs().maxCoeff() ==
          0.0);
    for (int j = 1; j <= 3; ++j) {
      CHECK((code.corrections[j].matrix - pauli_z(j)).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("ideal recovery") {
  const KrausChannel ideal = build_ideal_recovery();
  Rng rng;

  SUBCASE("code states are fixed points") {
    for (int i = 0; i < 5; ++i) {
      const LogicalState psi = testing::random_logical_state(rng);
      const DensityMatrix rho = psi.vector * psi.vector.adjoint();
      CHECK((ideal.apply(rho) - rho).cwiseAbs().maxCoeff() < 1e-13);
    }
  }

  SUBCASE("single phase errors are corrected") {
    const LogicalState psi = testing::random_logical_state(rng);
    const DensityMatrix rho = psi.vector * psi.vector.adjoint();
    for (int j = 1; j <= 3; ++j) {
      const Matrix8c zj = pauli_z(j).cast<Complex>();
      const DensityMatrix corrupted = zj * rho * zj;
      CHECK((ideal.apply(corrupted) - rho).cwiseAbs().maxCoeff() < 1e-13);
    }
  }

  SUBCASE("trace preserved on the maximally mixed state") {
    const DensityMatrix mixed = DensityMatrix::Identity() / 8.0;
    CHECK(std::abs(ideal.apply(mixed).trace() - Complex(1.0)) < 1e-13);
  }

  SUBCASE("recovery twice equals recovery once, as superoperators") {
    const SuperMatrixC s = ideal.superoperator();
    CHECK(((s * s) - s).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("faulty recovery") {
  Rng rng;

  SUBCASE("rejects p_meas outside [0, 1]") {
    CHECK_THROWS_AS(build_faulty_recovery(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(build_faulty_recovery(1.1), std::invalid_argument);
  }

  SUBCASE("p_meas = 0 reduces to the ideal recovery") {
    const KrausChannel faulty = build_faulty_recovery(0.0);
    const KrausChannel ideal = build_ideal_recovery();
    for (int i = 0; i < 20; ++i) {
      const DensityMatrix rho = testing::random_density_matrix(rng);
      CHECK((faulty.apply(rho) - ideal.apply(rho)).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  SUBCASE("code-state fidelity is exactly 1 - p_meas") {
    // Wrong-syndrome branches apply some Z_j to a code state, which lands
    // orthogonal to the code space.
    for (double p_meas : {0.1, 0.22, 0.7, 1.0}) {
      const KrausChannel faulty = build_faulty_recovery(p_meas);
      const LogicalState psi = testing::random_logical_state(rng);
      const DensityMatrix rho = psi.vector * psi.vector.adjoint();
      const Complex f = (psi.vector.adjoint() * faulty.apply(rho) * psi.vector)(0, 0);
      CHECK(f.real() == doctest::Approx(1.0 - p_meas).epsilon(1e-12));
    }
  }

  SUBCASE("p_meas = 1 still trace preserving") {
    CHECK(build_faulty_recovery(1.0).trace_preservation_defect() < 1e-12);
  }
}

TEST_CASE("hybrid recovery") {
  Rng rng;

  SUBCASE("rejects out-of-range probabilities") {
    CHECK_THROWS_AS(build_opt_recovery(-0.2, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(build_opt_recovery(0.5, 1.5), std::invalid_argument);
  }

  SUBCASE("p_fb = 1 equals the faulty recovery") {
    const KrausChannel opt = build_opt_recovery(1.0, 0.3);
    const KrausChannel faulty = build_faulty_recovery(0.3);
    for (int i = 0; i < 10; ++i) {
      const DensityMatrix rho = testing::random_density_matrix(rng);
      CHECK((opt.apply(rho) - faulty.apply(rho)).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  SUBCASE("p_fb = 0 equals the bare parity measurement") {
    const KrausChannel opt = build_opt_recovery(0.0, 0.3);
    const KrausChannel meas = build_measurement_channel();
    for (int i = 0; i < 10; ++i) {
      const DensityMatrix rho = testing::random_density_matrix(rng);
      CHECK((opt.apply(rho) - meas.apply(rho)).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  SUBCASE("CPTP at the hybrid-optimum parameters") {
    const KrausChannel opt = build_opt_recovery(0.488, 0.22);
    CHECK(opt.trace_preservation_defect() < 1e-12);
    CHECK(opt.choi_min_eigenvalue() > -1e-10);
  }

  SUBCASE("CPTP across the parameter extremes") {
    for (double pf : {0.0, 0.22, 0.5, 1.0})
      for (double pm : {0.0, 0.22, 0.5, 1.0}) {
        const KrausChannel opt = build_opt_recovery(pf, pm);
        CHECK(opt.trace_preservation_defect() < 1e-12);
        CHECK(opt.choi_min_eigenvalue() > -1e-10);
      }
  }

  SUBCASE("superoperator affine in p_fb, and in p_meas at fixed p_fb") {
    const double pm = 0.31;
    const SuperMatrixC s0 = build_opt_recovery(0.0, pm).superoperator();
    const SuperMatrixC s1 = build_opt_recovery(1.0, pm).superoperator();
    const double p = 0.37;
    const SuperMatrixC sp = build_opt_recovery(p, pm).superoperator();
    CHECK((sp - ((1.0 - p) * s0 + p * s1)).cwiseAbs().maxCoeff() < 1e-12);

    const double pf = 0.61;
    const SuperMatrixC m0 = build_opt_recovery(pf, 0.0).superoperator();
    const SuperMatrixC m1 = build_opt_recovery(pf, 1.0).superoperator();
    const double q = 0.44;
    const SuperMatrixC mq = build_opt_recovery(pf, q).superoperator();
    CHECK((mq - ((1.0 - q) * m0 + q * m1)).cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("channel matrices are real in the computational basis") {
    for (const KrausChannel& ch :
         {build_ideal_recovery(), build_faulty_recovery(0.22),
          build_measurement_channel(), build_opt_recovery(0.488, 0.22)}) {
      for (const Matrix8c& k : ch.kraus_ops()) {
        CHECK(k.imag().cwiseAbs().maxCoeff() <= 1e-15);
      }
    }
  }

  SUBCASE("output supported on the syndrome subspaces") {
    const PhaseFlipCode& code = phase_flip_code();
    const KrausChannel opt = build_opt_recovery(0.65, 0.18);
    for (int i = 0; i < 5; ++i) {
      const DensityMatrix out = opt.apply(testing::random_density_matrix(rng));
      double total = 0.0;
      for (const auto& p : code.projectors) {
        const Matrix8c pj = p.matrix.cast<Complex>();
        total += (pj * out * pj).trace().real();
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("logical two-design") {
  const PhaseFlipCode& code = phase_flip_code();
  const auto design = logical_two_design();

  SUBCASE("states normalized and inside the code space") {
    const Matrix8c p0 = code.projectors[0].matrix.cast<Complex>();
    for (const LogicalState& s : design) {
      CHECK(std::abs(s.vector.norm() - 1.0) < 1e-14);
      CHECK((p0 * s.vector - s.vector).norm() < 1e-13);
    }
  }

  SUBCASE("projector mean is P_0 / 2") {
    Matrix8c mean = Matrix8c::Zero();
    for (const LogicalState& s : design) mean += s.vector * s.vector.adjoint();
    mean /= 6.0;
    CHECK((mean - code.projectors[0].matrix.cast<Complex>() / 2.0)
              .cwiseAbs()
              .maxCoeff() < 1e-14);
  }

  SUBCASE("design average equals the Haar average for a fixed channel") {
    // Fixed channel: dephase at one noise draw, then a hybrid recovery.
    const SegmentUnitary v = segment_unitary(NoiseSample{{0.9, -1.3, 0.4}}, 0.8);
    const KrausChannel recover = build_opt_recovery(0.37, 0.18);
    auto fidelity = [&](const LogicalState& s) {
      const DensityMatrix rho = s.vector * s.vector.adjoint();
      const DensityMatrix out = recover.apply(v.conjugate(rho));
      return (s.vector.adjoint() * out * s.vector)(0, 0).real();
    };

    double design_mean = 0.0;
    for (const LogicalState& s : design) design_mean += fidelity(s);
    design_mean /= 6.0;

    Rng rng;
    const int samples = 10000;
    double mean = 0.0, m2 = 0.0;
    for (int i = 0; i < samples; ++i) {
      const double f = fidelity(testing::random_logical_state(rng));
      const double delta = f - mean;
      mean += delta / (i + 1);
      m2 += delta * (f - mean);
    }
    const double se = std::sqrt(m2 / (samples - 1) / samples);
    CHECK(std::abs(design_mean - mean) < 3.0 * se);
  }
}

TEST_CASE("channel labels") {
  CHECK(build_ideal_recovery().label() == ChannelLabel::Ideal);
  CHECK(build_faulty_recovery(0.1).label() == ChannelLabel::Faulty);
  CHECK(build_measurement_channel().label() == ChannelLabel::MeasureOnly);
  CHECK(build_opt_recovery(0.5, 0.1).label() == ChannelLabel::Opt);
  CHECK(to_string(ChannelLabel::MeasureOnly) == "measure-only");
  CHECK(to_string(ChannelLabel::Opt) == "opt");
}

TEST_CASE("density-matrix validation helper") {
  Rng rng;
  const DensityMatrix rho = testing::random_density_matrix(rng);
  const DensityMatrixCheck check = check_density_matrix(rho);
  CHECK(check.ok());

  DensityMatrix bad = rho;
  bad(0, 0) += Complex(0.5, 0.0);
  CHECK_FALSE(check_density_matrix(bad).ok());
}
