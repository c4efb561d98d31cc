#include <cmath>
#include <functional>
#include <sstream>
#include <vector>

#include "cogsat/problem.hpp"
#include "cogsat/rng.hpp"
#include "doctest.h"

using namespace cogsat;

namespace {

// Builds a realization from explicit gain rules, for pinned-value tests.
ChannelRealization make_channels(
    const Dims& dims, std::int64_t num_pus,
    const std::function<double(int, int, std::int64_t)>& f_det_rule,
    const std::function<double(int, int, int, int)>& g_rule) {
  const int Q = dims.sus_per_operator();
  std::vector<double> f_det, f, g;
  for (int n = 0; n < dims.operators; ++n) {
    for (int q = 0; q < Q; ++q) {
      for (std::int64_t l = 0; l < num_pus; ++l) {
        const double det = f_det_rule(n, q, l);
        f_det.push_back(det);
        for (int m = 0; m < dims.subbands; ++m) f.push_back(det);
      }
    }
  }
  for (int n = 0; n < dims.operators; ++n) {
    for (int q = 0; q < Q; ++q) {
      for (int b = 0; b < dims.beams; ++b) {
        for (int m = 0; m < dims.subbands; ++m) g.push_back(g_rule(n, q, b, m));
      }
    }
  }
  return ChannelRealization(dims, num_pus, std::move(f), std::move(f_det), std::move(g));
}

ChannelRealization random_channels(const Dims& dims, std::int64_t num_pus, rng::Stream& s) {
  // Capture draw order explicitly so the rule lambdas stay pure.
  const int Q = dims.sus_per_operator();
  std::vector<double> fvals(static_cast<std::size_t>(dims.operators) * Q * num_pus);
  std::vector<double> gvals(static_cast<std::size_t>(dims.operators) * Q * dims.beams *
                            dims.subbands);
  for (auto& v : fvals) v = s.next_uniform(0.1, 5.0);
  for (auto& v : gvals) v = s.next_uniform(0.05, 2.0);
  return make_channels(
      dims, num_pus,
      [&](int n, int q, std::int64_t l) {
        return fvals[(static_cast<std::size_t>(n) * Q + q) * num_pus + l];
      },
      [&](int n, int q, int b, int m) {
        return gvals[((static_cast<std::size_t>(n) * Q + q) * dims.beams + b) * dims.subbands +
                     m];
      });
}

Assignment random_assignment(const Dims& dims, rng::Stream& s) {
  std::vector<std::vector<int>> perms;
  for (int nb = 0; nb < dims.operators * dims.beams; ++nb) {
    std::vector<int> perm(static_cast<std::size_t>(dims.subbands));
    for (int m = 0; m < dims.subbands; ++m) perm[static_cast<std::size_t>(m)] = m;
    for (int m = dims.subbands - 1; m > 0; --m) {
      const int j = static_cast<int>(s.next_u64() % static_cast<std::uint64_t>(m + 1));
      std::swap(perm[static_cast<std::size_t>(m)], perm[static_cast<std::size_t>(j)]);
    }
    perms.push_back(perm);
  }
  return Assignment::from_beam_permutations(dims, perms);
}

}  // namespace

TEST_CASE("assignment validation enforces the permutation structure") {
  const Dims dims{1, 2, 2};
  CHECK_NOTHROW(Assignment::identity(dims));

  // C5 broken: one SU on two subbands.
  std::vector<std::uint8_t> two_bands{1, 1, 1, 0, 1, 0, 0, 1};
  CHECK_THROWS_AS(Assignment(dims, two_bands), std::invalid_argument);

  // C4 broken: both SUs of a beam on the same subband.
  std::vector<std::uint8_t> same_band{1, 0, 1, 0, 1, 0, 0, 1};
  CHECK_THROWS_AS(Assignment(dims, same_band), std::invalid_argument);

  // C2 broken: non-binary entry.
  std::vector<std::uint8_t> non_binary{2, 0, 0, 1, 1, 0, 0, 1};
  CHECK_THROWS_AS(Assignment(dims, non_binary), std::invalid_argument);

  CHECK_THROWS_AS(Assignment::from_beam_permutations(dims, {{0, 0}, {0, 1}}),
                  std::invalid_argument);
}

TEST_CASE("interference at a PU sums assigned gain-power products") {
  const Dims dims{1, 1, 1};
  const auto ch = make_channels(
      dims, 1, [](int, int, std::int64_t) { return 2.0; },
      [](int, int, int, int) { return 1.0; });
  const Assignment a = Assignment::identity(dims);
  PowerAllocation p(dims, 10.0);
  p.set(0, 0, 0, 3.0);
  CHECK(interference_at_pu(a, p, ch, 0, 0) == doctest::Approx(6.0));

  p.set(0, 0, 0, 0.0);
  CHECK(interference_at_pu(a, p, ch, 0, 0) == 0.0);
}

TEST_CASE("interference and rates match an independent recomputation") {
  rng::Stream s(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const Dims dims{1 + static_cast<int>(s.next_u64() % 3),
                    1 + static_cast<int>(s.next_u64() % 2),
                    1 + static_cast<int>(s.next_u64() % 3)};
    const std::int64_t L = 1 + static_cast<std::int64_t>(s.next_u64() % 5);
    const auto ch = random_channels(dims, L, s);
    const Assignment a = random_assignment(dims, s);
    PowerAllocation p(dims, 10.0);
    for (int n = 0; n < dims.operators; ++n) {
      for (int q = 0; q < dims.sus_per_operator(); ++q) {
        p.set(n, q, a.subband_of(n, q), s.next_uniform(0.0, 10.0));
      }
    }

    // Naive triple loop over the raw tensor, long double accumulation.
    for (std::int64_t l = 0; l < L; ++l) {
      for (int m = 0; m < dims.subbands; ++m) {
        long double expected = 0.0L;
        for (int n = 0; n < dims.operators; ++n) {
          for (int q = 0; q < dims.sus_per_operator(); ++q) {
            if (!a.assigned(n, q, m)) continue;
            expected += static_cast<long double>(ch.det_gain_to_pu(n, q, l)) * p.at(n, q, m);
          }
        }
        const double got = interference_at_pu(a, p, ch, l, m);
        CHECK(std::abs(got - static_cast<double>(expected)) <=
              1e-12 * std::max(1.0, static_cast<double>(expected)));
      }
    }

    // Term-by-term rate recomputation.
    long double rate = 0.0L;
    for (int n = 0; n < dims.operators; ++n) {
      long double op_rate = 0.0L;
      for (int b = 0; b < dims.beams; ++b) {
        for (int slot = 0; slot < dims.subbands; ++slot) {
          const int q = b * dims.subbands + slot;
          const int m = a.subband_of(n, q);
          long double j = 0.0L;
          for (int i = 0; i < dims.sus_per_operator(); ++i) {
            if (i == q || !a.assigned(n, i, m)) continue;
            j += static_cast<long double>(ch.gain_to_beam(n, i, b, m)) * p.at(n, i, m);
          }
          CHECK(std::abs(intra_sat_interference(a, p, ch, n, b, q, m) -
                         static_cast<double>(j)) <=
                1e-12 * std::max(1.0, static_cast<double>(j)));
          op_rate += std::log2(1.0L + ch.gain_to_beam(n, q, b, m) * p.at(n, q, m) / (1.0L + j));
        }
      }
      CHECK(std::abs(operator_rate(a, p, ch, n) - static_cast<double>(op_rate)) <=
            1e-12 * std::max(1.0, static_cast<double>(op_rate)));
      rate += op_rate;
    }
    CHECK(std::abs(total_rate(a, p, ch) - static_cast<double>(rate)) <=
          1e-12 * std::max(1.0, static_cast<double>(rate)));
  }
}

TEST_CASE("intra-satellite interference cases") {
  // One beam: FDMA leaves no co-channel partner inside the operator.
  {
    const Dims dims{1, 1, 2};
    const auto ch = make_channels(
        dims, 1, [](int, int, std::int64_t) { return 1.0; },
        [](int, int, int, int) { return 1.0; });
    const Assignment a = Assignment::identity(dims);
    PowerAllocation p(dims, 10.0);
    p.set(0, 0, 0, 5.0);
    p.set(0, 1, 1, 5.0);
    CHECK(intra_sat_interference(a, p, ch, 0, 0, 0, 0) == 0.0);
  }
  // Two beams sharing a subband: the partner leaks with G * P.
  {
    const Dims dims{1, 2, 1};
    const auto ch = make_channels(
        dims, 1, [](int, int, std::int64_t) { return 1.0; },
        [](int, int, int, int) { return 1.0; });
    const Assignment a = Assignment::identity(dims);
    PowerAllocation p(dims, 10.0);
    p.set(0, 0, 0, 1.0);
    p.set(0, 1, 0, 1.0);
    CHECK(intra_sat_interference(a, p, ch, 0, 0, 0, 0) == doctest::Approx(1.0));
  }
}

TEST_CASE("rate formula on pinned instances") {
  {
    const Dims dims{1, 1, 1};
    const auto ch = make_channels(
        dims, 1, [](int, int, std::int64_t) { return 1.0; },
        [](int, int, int, int) { return 1.0; });
    const Assignment a = Assignment::identity(dims);
    PowerAllocation p(dims, 10.0);
    p.set(0, 0, 0, 1.0);
    CHECK(operator_rate(a, p, ch, 0) == doctest::Approx(1.0));
    CHECK(total_rate(a, p, ch) == doctest::Approx(operator_rate(a, p, ch, 0)));
  }
  {
    const Dims dims{1, 2, 1};
    const auto ch = make_channels(
        dims, 1, [](int, int, std::int64_t) { return 1.0; },
        [](int, int, int, int) { return 1.0; });
    const Assignment a = Assignment::identity(dims);
    PowerAllocation p(dims, 10.0);
    p.set(0, 0, 0, 1.0);
    p.set(0, 1, 0, 1.0);
    // Each SU sees signal 1 over noise 1 plus partner interference 1.
    CHECK(operator_rate(a, p, ch, 0) == doctest::Approx(2.0 * std::log2(1.5)));
  }
  {
    const Dims dims{1, 1, 2};
    const auto ch = make_channels(
        dims, 1, [](int, int, std::int64_t) { return 1.0; },
        [](int, int, int, int) { return 1.0; });
    const Assignment a = Assignment::identity(dims);
    const PowerAllocation p(dims, 10.0);
    CHECK(total_rate(a, p, ch) == 0.0);
  }
}

TEST_CASE("interference is linear in the power tensor") {
  rng::Stream s(55);
  const Dims dims{2, 2, 2};
  const std::int64_t L = 4;
  const auto ch = random_channels(dims, L, s);
  const Assignment a = random_assignment(dims, s);
  PowerAllocation p1(dims, 100.0), p2(dims, 100.0), mix(dims, 100.0);
  const double wa = 0.3, wb = 1.7;
  for (int n = 0; n < dims.operators; ++n) {
    for (int q = 0; q < dims.sus_per_operator(); ++q) {
      const int m = a.subband_of(n, q);
      const double x = s.next_uniform(0.0, 2.0);
      const double y = s.next_uniform(0.0, 2.0);
      p1.set(n, q, m, x);
      p2.set(n, q, m, y);
      mix.set(n, q, m, wa * x + wb * y);
    }
  }
  for (std::int64_t l = 0; l < L; ++l) {
    for (int m = 0; m < dims.subbands; ++m) {
      const double lhs = interference_at_pu(a, mix, ch, l, m);
      const double rhs =
          wa * interference_at_pu(a, p1, ch, l, m) + wb * interference_at_pu(a, p2, ch, l, m);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
  }
}

TEST_CASE("rate is nondecreasing in own power without co-channel partners") {
  rng::Stream s(66);
  const Dims dims{1, 1, 3};  // B = 1: no intra-operator coupling
  const auto ch = random_channels(dims, 2, s);
  const Assignment a = random_assignment(dims, s);
  PowerAllocation p(dims, 10.0);
  for (int q = 0; q < dims.sus_per_operator(); ++q) {
    p.set(0, q, a.subband_of(0, q), s.next_uniform(0.0, 5.0));
  }
  p.set(0, 1, a.subband_of(0, 1), 0.0);  // the swept SU starts at zero
  double prev = operator_rate(a, p, ch, 0);
  for (double x = 0.5; x <= 10.0; x += 0.5) {
    p.set(0, 1, a.subband_of(0, 1), x);
    const double r = operator_rate(a, p, ch, 0);
    CHECK(r >= prev - 1e-12);
    prev = r;
  }
}

TEST_CASE("feasibility report flags each constraint") {
  const Dims dims{1, 1, 1};
  const auto ch = make_channels(
      dims, 1, [](int, int, std::int64_t) { return 1.0; },
      [](int, int, int, int) { return 1.0; });
  const Assignment a = Assignment::identity(dims);
  const Thresholds th = Thresholds::uniform(1.0);

  {
    const PowerAllocation p(dims, 10.0);
    CHECK(check_feasibility(a, p, ch, th).feasible());
  }
  {
    // P * F = 2 I_th: C1 violated with excess exactly I_th.
    PowerAllocation p(dims, 10.0);
    p.set(0, 0, 0, 2.0);
    const FeasibilityReport r = check_feasibility(a, p, ch, th);
    CHECK_FALSE(r.c1.ok);
    CHECK(r.c1.worst_violation == doctest::Approx(1.0));
    CHECK(r.c2.ok);
    CHECK(r.c3.ok);
    CHECK(r.c4.ok);
    CHECK(r.c5.ok);
  }
}

TEST_CASE("strict mode checks realized gains") {
  const Dims dims{1, 1, 1};
  // Deterministic gain 1, realized gain 3.
  std::vector<double> f{3.0}, f_det{1.0}, g{1.0};
  const ChannelRealization ch(dims, 1, std::move(f), std::move(f_det), std::move(g));
  const Assignment a = Assignment::identity(dims);
  PowerAllocation p(dims, 10.0);
  p.set(0, 0, 0, 0.5);
  const Thresholds th = Thresholds::uniform(1.0);
  CHECK(check_feasibility(a, p, ch, th, GainKind::kDeterministic).feasible());
  CHECK_FALSE(check_feasibility(a, p, ch, th, GainKind::kRealized).feasible());
}

TEST_CASE("power caps") {
  CHECK(lemma1_power_cap(4.0, 1.0) == doctest::Approx(0.25));
  CHECK(lemma1_power_cap(1e-12, 1.0) == doctest::Approx(1e12));
  CHECK(std::isfinite(lemma1_power_cap(1e-12, 1.0)));
  CHECK_THROWS_AS(lemma1_power_cap(0.0, 1.0), std::invalid_argument);

  CHECK(theorem1_power_cap(4.0, 1.0, 10.0, 1.0) == doctest::Approx(0.225));
  CHECK(theorem1_power_cap(4.0, 1.0, std::numeric_limits<double>::infinity(), 1.0) ==
        doctest::Approx(0.25));
  CHECK(theorem1_power_cap(4.0, 1.0, 10.0, 0.1) == doctest::Approx(0.1));
  CHECK_THROWS_AS(theorem1_power_cap(4.0, 1.0, 0.5, 1.0), std::invalid_argument);
}

TEST_CASE("a single SU at the lemma cap meets the threshold exactly") {
  const Dims dims{1, 1, 1};
  const double gain = 3.7;
  const double i_th = 2.2;
  const auto ch = make_channels(
      dims, 1, [&](int, int, std::int64_t) { return gain; },
      [](int, int, int, int) { return 1.0; });
  const Assignment a = Assignment::identity(dims);
  PowerAllocation p(dims, 1e9);
  p.set(0, 0, 0, lemma1_power_cap(gain, i_th));
  CHECK(interference_at_pu(a, p, ch, 0, 0) == doctest::Approx(i_th).epsilon(1e-15));
  CHECK(check_feasibility(a, p, ch, Thresholds::uniform(i_th)).feasible());
}

TEST_CASE("per-(l, m) threshold tables are honored") {
  const Dims dims{1, 1, 2};
  const auto ch = make_channels(
      dims, 2, [](int, int, std::int64_t l) { return l == 0 ? 1.0 : 0.5; },
      [](int, int, int, int) { return 1.0; });
  const Assignment a = Assignment::identity(dims);
  PowerAllocation p(dims, 10.0);
  p.set(0, 0, 0, 1.5);
  p.set(0, 1, 1, 1.5);
  // Row (0, 0) sees 1.5; a table tight there and loose elsewhere flips it.
  const Thresholds loose = Thresholds::table(2, 2, {2.0, 2.0, 2.0, 2.0});
  const Thresholds tight = Thresholds::table(2, 2, {1.0, 2.0, 2.0, 2.0});
  CHECK(check_feasibility(a, p, ch, loose).feasible());
  CHECK_FALSE(check_feasibility(a, p, ch, tight).feasible());
  CHECK_THROWS_AS(Thresholds::table(2, 2, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(Thresholds::uniform(0.0), std::invalid_argument);
}

TEST_CASE("solution CSV lists every (n, q, m) cell") {
  const Dims dims{1, 1, 2};
  const Assignment a = Assignment::identity(dims);
  PowerAllocation p(dims, 10.0);
  p.set(0, 0, 0, 1.25);
  std::ostringstream out;
  dump_solution_csv(a, p, out);
  CHECK(out.str() ==
        "n,q,m,assigned,power\n"
        "1,1,1,1,1.25\n"
        "1,1,2,0,0\n"
        "1,2,1,0,0\n"
        "1,2,2,1,0\n");
}
