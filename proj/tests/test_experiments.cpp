#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "ambsee/ambsee.hpp"
#include "oracles.hpp"

using namespace ambsee;

namespace {

SweepSpec small_spec(SweepVariable v, std::vector<double> values, std::vector<Scheme> schemes, std::size_t trials) {
  SweepSpec s;
  s.variable = v;
  s.values = std::move(values);
  s.schemes = std::move(schemes);
  s.trials = trials;
  s.seed = 3;
  s.pso.max_iterations = 20;
  return s;
}

}  // namespace

TEST(Schemes, NamesAndBdCounts) {
  for (Scheme s : {Scheme::NomaPure, Scheme::Noma1Bd, Scheme::Noma2Bd, Scheme::Noma3Bd, Scheme::Noma4Bd, Scheme::Oma2Bd})
    EXPECT_EQ(parse_scheme(to_string(s)), s);
  EXPECT_EQ(bd_count(Scheme::Noma4Bd), 4u);
  EXPECT_EQ(bd_count(Scheme::Oma2Bd), 2u);
  EXPECT_THROW(parse_scheme("NOMA+9BD"), std::invalid_argument);
  EXPECT_EQ(method_for(Scheme::Noma2Bd, 2, std::nullopt), Method::ClosedForm);
  EXPECT_EQ(method_for(Scheme::Noma2Bd, 3, std::nullopt), Method::Pso);
  EXPECT_EQ(method_for(Scheme::Noma1Bd, 2, Method::Grid), Method::Grid);
  EXPECT_EQ(method_for(Scheme::NomaPure, 2, Method::Grid), Method::ClosedForm);
}

TEST(SweepSpecJson, ParsesPowerStringsAndRejectsUnknownKeys) {
  const auto j = nlohmann::json::parse(
      R"({"variable": "noise_power", "values": ["-30dBm", 0.001], "schemes": ["NOMA-pure", "OMA+2BD"],
          "trials": 12, "seed": 4, "method": "pso", "pso": {"particles": 10}})");
  const SweepSpec s = j.get<SweepSpec>();
  EXPECT_EQ(s.variable, SweepVariable::NoisePower);
  ASSERT_EQ(s.values.size(), 2u);
  EXPECT_NEAR(s.values[0], 1e-6, 1e-20);
  EXPECT_EQ(s.values[1], 0.001);
  EXPECT_EQ(s.schemes[1], Scheme::Oma2Bd);
  EXPECT_EQ(s.trials, 12u);
  EXPECT_EQ(s.method, Method::Pso);
  EXPECT_EQ(s.pso.particles, 10u);
  EXPECT_ANY_THROW(nlohmann::json::parse(R"({"variable": "p_max", "valuez": [1]})").get<SweepSpec>());
  EXPECT_ANY_THROW(nlohmann::json::parse(R"({"variable": "bandwidth"})").get<SweepSpec>());
  SweepSpec bad = small_spec(SweepVariable::PMax, {}, {Scheme::NomaPure}, 1);
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad.values = {-1.0};
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(RunSweep, DuplicateSchemeGivesIdenticalCurves) {
  const SweepSpec spec =
      small_spec(SweepVariable::PMax, {10.0, 100.0}, {Scheme::Noma3Bd, Scheme::NomaPure, Scheme::Noma3Bd}, 8);
  const SweepResult r = run_sweep(spec, NetworkConfig{});
  for (std::size_t p = 0; p < 2; ++p) {
    EXPECT_EQ(r.at(p, 0).mean_zeta, r.at(p, 2).mean_zeta);
    EXPECT_EQ(r.samples[p][0], r.samples[p][2]);
  }
}

TEST(RunSweep, PureSchemeHasZeroRelativeGain) {
  const SweepSpec spec = small_spec(SweepVariable::RMin, {0.5, 1.0, 2.0}, {Scheme::NomaPure, Scheme::Noma1Bd}, 20);
  const SweepResult r = run_sweep(spec, NetworkConfig{});
  for (std::size_t p = 0; p < 3; ++p) {
    EXPECT_EQ(r.at(p, 0).rel_gain, 0.0);
    EXPECT_NEAR(r.at(p, 1).rel_gain, r.at(p, 1).mean_zeta / r.at(p, 0).mean_zeta - 1.0, 1e-12);
  }
}

TEST(RunSweep, StatisticsMatchSamples) {
  const SweepSpec spec = small_spec(SweepVariable::PMax, {100.0}, {Scheme::NomaPure, Scheme::Noma2Bd}, 30);
  const SweepResult r = run_sweep(spec, NetworkConfig{});
  for (std::size_t s = 0; s < 2; ++s) {
    double sum = 0.0, sq = 0.0;
    std::size_t n = 0;
    for (double z : r.samples[0][s]) {
      if (std::isnan(z)) continue;
      sum += z;
      ++n;
    }
    const double mean = sum / static_cast<double>(n);
    for (double z : r.samples[0][s])
      if (!std::isnan(z)) sq += (z - mean) * (z - mean);
    EXPECT_EQ(r.at(0, s).n_feasible, n);
    EXPECT_NEAR(r.at(0, s).mean_zeta, mean, 1e-12 * mean);
    EXPECT_NEAR(r.at(0, s).stderr_zeta, std::sqrt(sq / static_cast<double>(n - 1) / static_cast<double>(n)), 1e-12);
  }
}

TEST(RunSweep, IndependentOfWorkerCount) {
  const SweepSpec spec = small_spec(SweepVariable::PMax, {10.0, 100.0},
                                    {Scheme::NomaPure, Scheme::Noma1Bd, Scheme::Noma3Bd, Scheme::Oma2Bd}, 12);
  const SweepResult one = run_sweep(spec, NetworkConfig{}, 1);
  const SweepResult four = run_sweep(spec, NetworkConfig{}, 4);
  EXPECT_EQ(one.samples, four.samples);
  std::ostringstream a, b;
  write_sweep_csv(a, one);
  write_sweep_csv(b, four);
  EXPECT_EQ(a.str(), b.str());
}

TEST(RunSweep, CommonRandomNumbersAcrossPoints) {
  // With a single scheme that is feasible everywhere the same drop is used at
  // every sweep value, so zeta must be monotone trial by trial in P_max.
  SweepSpec spec = small_spec(SweepVariable::PMax, {50.0, 100.0}, {Scheme::NomaPure}, 40);
  const SweepResult r = run_sweep(spec, NetworkConfig{});
  for (std::size_t t = 0; t < 40; ++t) {
    if (r.at(0, 0).n_resampled || r.at(1, 0).n_resampled) break;
    EXPECT_GE(r.samples[1][0][t], r.samples[0][0][t] - 1e-12);
  }
}

TEST(RunSweep, CsvLayout) {
  const SweepSpec spec = small_spec(SweepVariable::PMax, {100.0}, {Scheme::NomaPure, Scheme::Noma1Bd}, 5);
  std::ostringstream os;
  write_sweep_csv(os, run_sweep(spec, NetworkConfig{}));
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "scheme,sweep_value,mean_zeta,stderr,rel_gain,n_feasible,n_resampled");
  std::getline(is, line);
  EXPECT_EQ(line.rfind("NOMA-pure,100,", 0), 0u) << line;
}

TEST(RunSweep, EavesdropperLattice) {
  SweepSpec spec;
  spec.variable = SweepVariable::EavPosition;
  spec.lattice = 3;
  spec.schemes = {Scheme::Noma1Bd};
  spec.trials = 4;
  const SweepResult r = run_sweep(spec, NetworkConfig{});
  // corners of a 3 x 3 lattice fall outside the disk; the centre is the transmitter
  EXPECT_EQ(r.rows.size(), 4u);
  std::ostringstream os;
  write_heatmap_csv(os, r, Scheme::Noma1Bd);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "x,y,mean_zeta,stderr,n_feasible,n_resampled");
}

TEST(RunSweep, MoreBdsGainMoreAtHighNoise) {
  // the four-BD gain over pure NOMA exceeds the three-BD gain and grows with noise
  SweepSpec spec = small_spec(SweepVariable::NoisePower, {dbm_to_watts(-30.0), dbm_to_watts(-10.0)},
                              {Scheme::NomaPure, Scheme::Noma3Bd, Scheme::Noma4Bd}, 60);
  spec.pso.max_iterations = 30;
  const SweepResult r = run_sweep(spec, NetworkConfig{});
  for (std::size_t p = 0; p < 2; ++p) EXPECT_GT(r.at(p, 2).rel_gain, r.at(p, 1).rel_gain);
  EXPECT_GT(r.at(1, 1).rel_gain, r.at(0, 1).rel_gain);
  EXPECT_GT(r.at(1, 2).rel_gain, r.at(0, 2).rel_gain);
}

TEST(Oma, FullReflection) {
  NetworkConfig cfg;
  cfg.bd_count = 2;
  const Problem pb = Problem::from(generate_scenario(cfg, 0), cfg);
  const OmaResult r = oma_baseline(pb);
  ASSERT_TRUE(r.feasible);
  const NormalizedGains H = effective_gains(pb.scenario, ReflectionVector::ones(2));
  const OmaModel m(H, pb.qos, pb.p_max, pb.p_circuit);
  EXPECT_NEAR(m.ratio(r.p), r.zeta, 1e-12);
}

TEST(Oma, SingleUserMatchesNomaAtEqualPower) {
  NetworkConfig cfg;
  cfg.user_count = 1;
  cfg.bd_count = 1;
  for (std::uint64_t t = 0; t < 50; ++t) {
    const Problem pb = Problem::from(generate_scenario(cfg, t), cfg);
    const NormalizedGains H = effective_gains(pb.scenario, ReflectionVector::ones(1));
    const OmaModel m(H, pb.qos, pb.p_max, pb.p_circuit);
    for (double p : {0.5, 3.0, 40.0}) {
      EXPECT_NEAR(m.secrecy_sum_rate({p}), secrecy_sum_rate(H, PowerAllocation({p})), 1e-13);
      EXPECT_NEAR(m.ratio({p}), objectives(H, PowerAllocation({p}), 0.0, pb.p_circuit).zeta, 1e-13);
    }
  }
}

TEST(Oma, RatioMatchesPerUserGridOracle) {
  // K = 2: brute force over both slot powers on a log grid refined locally
  NetworkConfig cfg;
  cfg.bd_count = 2;
  std::size_t checked = 0;
  for (std::uint64_t t = 0; checked < 20; ++t) {
    const Problem pb = Problem::from(generate_scenario(cfg, t), cfg);
    const OmaResult r = oma_baseline(pb);
    if (!r.feasible) continue;
    ++checked;
    const NormalizedGains H = effective_gains(pb.scenario, ReflectionVector::ones(2));
    const OmaModel m(H, pb.qos, pb.p_max, pb.p_circuit);
    const auto& fl = m.floor();
    // sum p <= K P_max
    const double cap = 2.0 * pb.p_max;
    double best = 0.0;
    oracle::refine_max(fl[0], cap - fl[1], [&](double p0) {
      const double v = oracle::refine_max(fl[1], cap - p0, [&](double p1) { return m.ratio({p0, p1}); }, 1e-6);
      best = std::max(best, v);
      return v;
    }, 1e-6);
    EXPECT_GE(r.zeta, best - 1e-7 * best);
    EXPECT_TRUE(r.converged);
  }
}

TEST(Oma, InfeasibleQos) {
  NetworkConfig cfg;
  cfg.bd_count = 2;
  cfg.p_max = 1e-6;
  EXPECT_FALSE(oma_baseline(Problem::from(generate_scenario(cfg, 0), cfg)).feasible);
}

TEST(ImperfectCsi, ZeroErrorEqualsPerfectDesign) {
  NetworkConfig cfg;
  const CsiResult r = imperfect_csi_experiment(cfg, {0.0, 1e-2}, {2, 3}, 20, 5);
  for (std::size_t ki = 0; ki < 2; ++ki) {
    cfg.user_count = r.user_counts[ki];
    cfg.bd_count = 1;
    cfg.seed = 5;
    for (std::size_t t = 0; t < 20; ++t) {
      for (std::size_t attempt = 0;; ++attempt) {
        const Problem pb = Problem::from(generate_scenario(cfg, t, attempt), cfg);
        const SolveResult d = solve_closed_form(pb, SolverSettings{});
        if (!d.feasible) continue;
        EXPECT_NEAR(r.samples[ki][0][t], d.objective.zeta, 1e-12 * (1.0 + d.objective.zeta));
        break;
      }
    }
    EXPECT_EQ(r.at(ki, 0).rel_gain, 0.0);
  }
}

TEST(ImperfectCsi, RealizedZetaNeverNegative) {
  const CsiResult r = imperfect_csi_experiment(NetworkConfig{}, {1e-1, 10.0}, {2}, 50, 9);
  for (const auto& per_sigma : r.samples[0])
    for (double z : per_sigma) EXPECT_GE(z, 0.0);
}

TEST(ImperfectCsi, SmallErrorNoWorseThanLargeError) {
  const CsiResult r = imperfect_csi_experiment(NetworkConfig{}, {1e-4, 1e-1}, {2, 3, 4}, 300, 1);
  for (std::size_t ki = 0; ki < 3; ++ki) EXPECT_GE(r.at(ki, 0).mean_zeta, r.at(ki, 1).mean_zeta) << "K index " << ki;
}

TEST(ImperfectCsi, CsvLayout) {
  std::ostringstream os;
  write_csi_csv(os, imperfect_csi_experiment(NetworkConfig{}, {0.0}, {2}, 3, 1));
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "scheme,k,sweep_value,mean_zeta,stderr,rel_gain,n_feasible,n_resampled");
}

TEST(Dataset, FeatureColumnCounts) {
  EXPECT_EQ(dataset_feature_columns(2, 1).size(), 7u);
  EXPECT_EQ(dataset_feature_columns(2, 2).size(), 11u);
  EXPECT_EQ(dataset_columns(2, 2),
            (std::vector<std::string>{"h_1", "h_2", "h_e", "g_1", "g_2", "g_11", "g_12", "g_21", "g_22", "g_1e",
                                      "g_2e", "p_1", "p_2", "rho_1", "rho_2", "zeta"}));
}

TEST(Dataset, RoundTripAndLabelsFeasible) {
  NetworkConfig cfg;
  cfg.bd_count = 2;
  std::stringstream ss;
  const ExportStats st = export_dataset(cfg, 40, SolveOptions{}, ss);
  EXPECT_EQ(st.rows, 40u);
  const Dataset d = read_dataset(ss);
  ASSERT_EQ(d.rows.size(), 40u);
  EXPECT_EQ(d.user_count, 2u);
  EXPECT_EQ(d.bd_count, 2u);
  QoSParams A = QoSParams::uniform(2, cfg.r_min);
  for (const auto& row : d.rows) {
    const double z = reevaluate_zeta(row, cfg.noise_power, cfg.eav_noise_power, cfg.p_circuit);
    EXPECT_NEAR(z, row.zeta, 1e-9);
    Scenario s;
    s.h = row.h;
    s.h_e = row.h_e;
    s.g = row.g;
    s.bd_user = row.bd_user;
    s.bd_eav = row.bd_eav;
    s.users.resize(2);
    s.bds.resize(2);
    s.noise_user.assign(2, cfg.noise_power);
    s.noise_eav = cfg.eav_noise_power;
    const NormalizedGains H = effective_gains(s, ReflectionVector(row.rho));
    EXPECT_TRUE(check_constraints(H, PowerAllocation(row.p), A, cfg.p_max).all());
  }
}

TEST(Dataset, DeterministicAndJobIndependent) {
  NetworkConfig cfg;
  cfg.bd_count = 1;
  std::stringstream a, b;
  export_dataset(cfg, 25, SolveOptions{}, a, 1);
  export_dataset(cfg, 25, SolveOptions{}, b, 3);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Dataset, RejectsBadHeader) {
  std::istringstream is("h_1,h_2,zeta\n1,2,3\n");
  EXPECT_THROW(read_dataset(is), std::invalid_argument);
}

TEST(Parallel, PropagatesExceptions) {
  EXPECT_THROW(parallel_for(10, 3, [](std::size_t i) {
                 if (i == 7) throw std::runtime_error("boom");
               }),
               std::runtime_error);
  std::vector<int> hit(100, 0);
  parallel_for(100, 4, [&](std::size_t i) { hit[i] += 1; });
  for (int h : hit) EXPECT_EQ(h, 1);
}
